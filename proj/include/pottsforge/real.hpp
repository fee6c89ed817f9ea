#pragma once

#include <mpfr.h>

#include <string>

#include "pottsforge/rational.hpp"

namespace pottsforge {

/// Owning wrapper over an MPFR float. Used only where a quantity is genuinely
/// irrational (logarithms, exponentials, fractional powers); exact work stays
/// in BigRational.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 128);
  Real(const BigRational& x, mpfr_prec_t bits, mpfr_rnd_t rnd = MPFR_RNDN);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  /// The binary float is itself a dyadic rational; this returns it exactly.
  BigRational exact() const;
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  std::string to_string(int significant_digits = 20) const;

 private:
  mpfr_t value_;
};

struct RationalInterval {
  BigRational lo;
  BigRational hi;
  bool contains(const BigRational& x) const { return lo <= x && x <= hi; }
};

/// Rigorous enclosure of exp(x).
RationalInterval exp_bounds(const BigRational& x, mpfr_prec_t bits = 256);

/// Rigorous enclosure of ln(x), x > 0.
RationalInterval log_bounds(const BigRational& x, mpfr_prec_t bits = 256);

/// Rigorous enclosure of x^(num/den), x > 0.
RationalInterval root_power_bounds(const BigRational& x, long num, unsigned long den,
                                   mpfr_prec_t bits = 256);

/// Exact rational square root when x is a perfect square of a rational.
bool exact_sqrt(const BigRational& x, BigRational& root);

/// Exact x^(1/k) when it is rational.
bool exact_root(const BigRational& x, unsigned long k, BigRational& root);

/// Continued-fraction convergent of the midpoint of `enclosure` that lies
/// within relative distance `rel_tol` of every point of the enclosure.
/// Favors small denominators.
BigRational simplest_within(const RationalInterval& enclosure, const BigRational& rel_tol);

}  // namespace pottsforge
