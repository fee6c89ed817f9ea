#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace pottsforge {

/// Exact arbitrary-precision rational. Always kept in canonical (reduced,
/// positive denominator) form by the GMP C++ layer.
using BigRational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p", or a finite decimal such as "0.125" or "-3.5e-2"
/// into an exact rational. Throws std::invalid_argument on malformed input
/// or a zero denominator.
BigRational parse_rational(std::string_view text);

/// Always "p/q" (denominator printed even when 1).
std::string to_fraction_string(const BigRational& x);

/// Decimal rendering rounded to `digits` places after the point.
std::string to_decimal_string(const BigRational& x, int digits = 12);

double to_double(const BigRational& x);

/// x^e for e >= 0.
BigRational pow(const BigRational& x, unsigned long e);
BigInt pow(const BigInt& x, unsigned long e);

BigInt floor(const BigRational& x);
BigInt ceil(const BigRational& x);

inline bool is_integer(const BigRational& x) { return x.get_den() == 1; }

}  // namespace pottsforge
