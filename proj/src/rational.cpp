#include "tgl/rational.hpp"

#include <cctype>
#include <cmath>

#include "tgl/error.hpp"

namespace tgl {

namespace {

bool is_integer_token(std::string_view token) {
  std::size_t start = 0;
  if (!token.empty() && (token[0] == '-' || token[0] == '+')) start = 1;
  if (start == token.size()) return false;
  for (std::size_t i = start; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view token) {
  std::string text(token);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return Integer(text, 10);
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_json: return "malformed_json";
    case ErrorCode::schema: return "schema";
    case ErrorCode::dangling_endpoint: return "dangling_endpoint";
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::unknown_id: return "unknown_id";
    case ErrorCode::basis_cap: return "basis_cap";
    case ErrorCode::mismatched_sources: return "mismatched_sources";
    case ErrorCode::path_too_long: return "path_too_long";
    case ErrorCode::truncation_too_small: return "truncation_too_small";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::supercritical: return "supercritical";
    case ErrorCode::grid_not_bracketed: return "grid_not_bracketed";
    case ErrorCode::tie: return "tie";
    case ErrorCode::domination: return "domination";
    case ErrorCode::sinks_present: return "sinks_present";
    case ErrorCode::non_integer_quotient: return "non_integer_quotient";
    case ErrorCode::span_cap: return "span_cap";
    case ErrorCode::search_budget: return "search_budget";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::postcondition: return "postcondition";
  }
  return "unknown";
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorCode::invalid_argument,
                "not a rational \"p/q\": '" + std::string(text) + "'");
  }
  Integer q = parse_integer(den);
  if (q == 0) {
    throw Error(ErrorCode::invalid_argument, "zero denominator: '" + std::string(text) + "'");
  }
  Rational r(parse_integer(num), q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  Rational c = value;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::invalid_argument, "non-finite value");
  }
  Rational r(value);
  r.canonicalize();
  return r;
}

Rational power(const Rational& base, unsigned exponent) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace tgl
