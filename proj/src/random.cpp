#include "pottsforge/random.hpp"

#include <limits>
#include <stdexcept>

namespace pottsforge {

namespace {

const BigInt& two_pow_64() {
  static const BigInt v = [] {
    BigInt x = 1;
    x <<= 64;
    return x;
  }();
  return v;
}

std::uint64_t to_u64(const BigInt& x) {
  // mpz exports at most 64 bits here; callers guarantee 0 <= x < 2^64.
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

}  // namespace

Seed derive_seed(Seed base, std::uint64_t stream) {
  std::uint64_t z = base.value + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return {z ^ (z >> 31)};
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

Threshold::Threshold(const BigRational& p) : p_(p) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]: " + to_fraction_string(p));
  if (p == 1) {
    certain_ = true;
    return;
  }
  BigRational scaled = p * two_pow_64();
  BigInt head = floor(scaled);
  head_ = to_u64(head);
  residual_ = scaled - head;
}

std::uint64_t ExactUniform::word(std::size_t k) {
  if (k == 0) return head_;
  while (tail_.size() < k) tail_.push_back(rng_->next());
  return tail_[k - 1];
}

bool ExactUniform::below(const Threshold& t) {
  if (t.certain_) return true;
  std::uint64_t u = head_;
  if (u != t.head_) return u < t.head_;
  BigRational r = t.residual_;
  for (std::size_t k = 1;; ++k) {
    // U's remaining bits are >= 0, so a terminated expansion cannot exceed U.
    if (r == 0) return false;
    BigRational scaled = r * two_pow_64();
    BigInt w = floor(scaled);
    std::uint64_t wk = to_u64(w);
    std::uint64_t uk = word(k);
    if (uk != wk) return uk < wk;
    r = scaled - w;
  }
}

}  // namespace pottsforge
