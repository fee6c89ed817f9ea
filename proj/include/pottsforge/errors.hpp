#pragma once

#include <stdexcept>
#include <string>

namespace pottsforge {

/// An exact oracle was asked to enumerate more than its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what)
      : std::runtime_error("instance too large for exact oracle: " + what) {}
};

/// A monotone coupling produced lower.A not contained in upper.A.
class CouplingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A reduction stage could not be carried out on this instance.
class ReductionError : public std::runtime_error {
 public:
  ReductionError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// The rho tuner found no grid point whose zeta lands in the target window.
class NoCrossing : public ReductionError {
 public:
  NoCrossing(std::string stage, const std::string& what) : ReductionError(std::move(stage), what) {}
};

}  // namespace pottsforge
