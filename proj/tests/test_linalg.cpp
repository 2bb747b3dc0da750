#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tgl/error.hpp"
#include "tgl/exact_linalg.hpp"
#include "tgl/rational.hpp"

using namespace tgl;

namespace {

// Rank by plain dense elimination, for comparison with EchelonSpan.
std::size_t dense_rank(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

SparseVector sparse(const std::vector<Rational>& dense) {
  SparseVector v;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0) v.emplace_back(i, dense[i]);
  }
  return v;
}

std::vector<std::vector<Rational>> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols));
  for (auto& row : m) {
    for (auto& x : row) {
      // Mostly zeros so that rank deficiency is common.
      x = (rng() % 3 == 0) ? Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)) : Rational(0);
      x.canonicalize();
    }
  }
  return m;
}

}  // namespace

TEST_CASE("rational formatting and parsing") {
  CHECK(to_string(Rational(2)) == "2/1");
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_rational(" 1/3"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational("1/2/3"), Error);
}

TEST_CASE("double conversion is exact") {
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(0.1) != Rational(1, 10));
  CHECK(rational_from_double(0.1).get_d() == 0.1);
  CHECK(rational_from_double(-3.0) == Rational(-3));
  CHECK_THROWS_AS(rational_from_double(1.0 / 0.0), Error);
}

TEST_CASE("powers") {
  CHECK(power(Rational(2, 3), 0) == 1);
  CHECK(power(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(power(Rational(-1, 2), 5) == Rational(-1, 32));
}

TEST_CASE("leading minors") {
  CHECK(leading_minors_positive({{Integer(2), Integer(-1)}, {Integer(-1), Integer(2)}}));
  CHECK_FALSE(leading_minors_positive({{Integer(1), Integer(-1)}, {Integer(-1), Integer(1)}}));
  CHECK_FALSE(leading_minors_positive({{Integer(0), Integer(1)}, {Integer(1), Integer(5)}}));
  CHECK(leading_minors_positive({}));
  // 3x3 with minors 2, 3, 4.
  CHECK(leading_minors_positive({{Integer(2), Integer(-1), Integer(0)},
                                 {Integer(-1), Integer(2), Integer(-1)},
                                 {Integer(0), Integer(-1), Integer(2)}}));
}

TEST_CASE("solve and nullspace") {
  RationalMatrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 4;
  const auto x = solve(a, {Rational(5), Rational(6)});
  CHECK(x[0] == -4);
  CHECK(x[1] == Rational(9, 2));
  RationalMatrix s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = 2;
  s(1, 0) = 2;
  s(1, 1) = 4;
  CHECK_THROWS_AS(solve(s, {Rational(1), Rational(1)}), Error);
  const auto k = nullspace(s);
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] + 2 * k[0][1] == 0);
  CHECK(k[0] != std::vector<Rational>{0, 0});
}

TEST_CASE("echelon span rank matches dense elimination") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng() % 8;
    const std::size_t cols = 1 + rng() % 8;
    const auto m = random_matrix(rng, rows, cols);
    EchelonSpan span;
    for (const auto& row : m) span.insert(sparse(row));
    CHECK(span.rank() == dense_rank(m));
    for (const auto& row : m) CHECK(span.contains(sparse(row)));
  }
}

TEST_CASE("tracked span expresses members in terms of inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_matrix(rng, 6, 5);
    TrackedEchelonSpan span;
    for (const auto& row : m) span.insert(sparse(row));
    CHECK(span.inserted_count() == 6);
    std::vector<Rational> target(5, Rational(0));
    for (std::size_t r = 0; r < m.size(); ++r) {
      for (std::size_t c = 0; c < 5; ++c) target[c] += Rational(static_cast<long>(r) - 2) * m[r][c];
    }
    const auto coeffs = span.express(sparse(target));
    REQUIRE(coeffs.has_value());
    std::vector<Rational> rebuilt(5, Rational(0));
    for (const auto& [k, c] : *coeffs) {
      for (std::size_t j = 0; j < 5; ++j) rebuilt[j] += c * m[k][j];
    }
    CHECK(rebuilt == target);
  }
  TrackedEchelonSpan span;
  span.insert({{0, Rational(1)}});
  CHECK_FALSE(span.express({{1, Rational(1)}}).has_value());
}

TEST_CASE("positive semidefinite test") {
  using Rows = std::vector<std::map<std::uint32_t, Rational>>;
  CHECK(is_positive_semidefinite(Rows{{{0, Rational(1)}}, {}}));
  CHECK(is_positive_semidefinite(Rows{{{0, Rational(1)}, {1, Rational(1)}}, {{0, Rational(1)}, {1, Rational(1)}}}));
  CHECK_FALSE(is_positive_semidefinite(Rows{{{0, Rational(1)}, {1, Rational(2)}}, {{0, Rational(2)}, {1, Rational(1)}}}));
  CHECK_FALSE(is_positive_semidefinite(Rows{{{0, Rational(-1)}}}));
  CHECK_FALSE(is_positive_semidefinite(Rows{{{1, Rational(1)}}, {{0, Rational(1)}}}));
}
