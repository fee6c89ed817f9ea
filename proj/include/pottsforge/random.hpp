#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pottsforge/rational.hpp"

namespace pottsforge {

struct Seed {
  std::uint64_t value = 0;
};

/// Independent child seed for stream `stream` (splitmix64 mixing).
Seed derive_seed(Seed base, std::uint64_t stream);

/// 64-bit generator with a fully specified output sequence, so runs are
/// reproducible across platforms for a fixed Seed.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, n), n > 0, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Comparison data for exact Bernoulli(p) draws, p in [0, 1]: the leading 64
/// bits of p's binary expansion plus the exact remainder.
class Threshold {
 public:
  Threshold() = default;
  explicit Threshold(const BigRational& p);

  const BigRational& probability() const { return p_; }
  std::uint64_t head() const { return head_; }
  bool certain() const { return certain_; }

 private:
  friend class ExactUniform;
  BigRational p_;
  std::uint64_t head_ = 0;
  bool certain_ = false;
  BigRational residual_;
};

/// A Uniform[0,1) variate whose binary expansion is revealed 64 bits at a
/// time, only as far as needed to decide U < p exactly. Several thresholds may
/// be tested against the same variate; the comparisons stay consistent, which
/// is what makes shared-randomness couplings monotone.
class ExactUniform {
 public:
  explicit ExactUniform(Rng& rng) : rng_(&rng), head_(rng.next()) {}

  bool below(const Threshold& t);
  std::uint64_t head() const { return head_; }

 private:
  std::uint64_t word(std::size_t k);

  Rng* rng_;
  std::uint64_t head_;
  std::vector<std::uint64_t> tail_;  // words 1, 2, ... drawn on demand
};

inline bool bernoulli(Rng& rng, const Threshold& t) {
  ExactUniform u(rng);
  return u.below(t);
}

}  // namespace pottsforge
