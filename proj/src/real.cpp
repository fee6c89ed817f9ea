#include "pottsforge/real.hpp"

#include <stdexcept>
#include <vector>

namespace pottsforge {

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(const BigRational& x, mpfr_prec_t bits, mpfr_rnd_t rnd) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, x.get_mpq_t(), rnd);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

BigRational Real::exact() const {
  if (!mpfr_number_p(value_)) throw std::domain_error("non-finite real has no rational value");
  BigRational r;
  mpfr_get_q(r.get_mpq_t(), value_);
  return r;
}

std::string Real::to_string(int significant_digits) const {
  std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", significant_digits, value_);
  return std::string(buf.data());
}

RationalInterval exp_bounds(const BigRational& x, mpfr_prec_t bits) {
  Real lo(x, bits, MPFR_RNDD);
  Real hi(x, bits, MPFR_RNDU);
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.exact(), hi.exact()};
}

RationalInterval log_bounds(const BigRational& x, mpfr_prec_t bits) {
  if (x <= 0) throw std::domain_error("log of non-positive rational");
  Real lo(x, bits, MPFR_RNDD);
  Real hi(x, bits, MPFR_RNDU);
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.exact(), hi.exact()};
}

RationalInterval root_power_bounds(const BigRational& x, long num, unsigned long den, mpfr_prec_t bits) {
  if (x <= 0) throw std::domain_error("fractional power of non-positive rational");
  if (den == 0) throw std::invalid_argument("zero root index");
  // x -> x^(num/den) is increasing for num >= 0 and decreasing otherwise, so
  // the input and the root are rounded with or against the output direction.
  auto side = [&](bool upward) {
    mpfr_rnd_t out = upward ? MPFR_RNDU : MPFR_RNDD;
    mpfr_rnd_t in = (num >= 0) == upward ? MPFR_RNDU : MPFR_RNDD;
    Real v(x, bits, in);
    mpfr_rootn_ui(v.get(), v.get(), den, in);
    mpfr_pow_si(v.get(), v.get(), num, out);
    return v.exact();
  };
  return {side(false), side(true)};
}

bool exact_root(const BigRational& x, unsigned long k, BigRational& root) {
  if (x < 0 || k == 0) return false;
  BigInt rn, rd;
  if (mpz_root(rn.get_mpz_t(), x.get_num_mpz_t(), k) == 0) return false;
  if (mpz_root(rd.get_mpz_t(), x.get_den_mpz_t(), k) == 0) return false;
  root = BigRational(rn, rd);
  root.canonicalize();
  return true;
}

bool exact_sqrt(const BigRational& x, BigRational& root) { return exact_root(x, 2, root); }

namespace {

// Simplest rational in [a, b], 0 < a <= b.
BigRational simplest_between(const BigRational& a, const BigRational& b) {
  BigInt c = ceil(a);
  if (BigRational(c) <= b) return BigRational(c);
  BigInt fl = floor(a);
  BigRational inner = simplest_between(1 / (b - fl), 1 / (a - fl));
  BigRational r = BigRational(fl) + 1 / inner;
  r.canonicalize();
  return r;
}

}  // namespace

BigRational simplest_within(const RationalInterval& enclosure, const BigRational& rel_tol) {
  const BigRational& lo = enclosure.lo;
  const BigRational& hi = enclosure.hi;
  if (lo <= 0 || hi < lo) throw std::invalid_argument("simplest_within expects a positive enclosure");
  BigRational a = hi - rel_tol * lo;
  BigRational b = lo + rel_tol * lo;
  if (a > b) throw std::invalid_argument("enclosure too wide for requested tolerance");
  if (a <= 0) a = b / 2;
  return simplest_between(a, b);
}

}  // namespace pottsforge
