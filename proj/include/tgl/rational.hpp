#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tgl {

using Rational = mpq_class;
using Integer = mpz_class;

/// Accepts "p/q" or "p" (optional sign); result is canonical.
Rational parse_rational(std::string_view text);

/// Always "p/q", with q >= 1: 2 prints as "2/1".
std::string to_string(const Rational& value);

/// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double value);

Rational power(const Rational& base, unsigned exponent);

}  // namespace tgl
