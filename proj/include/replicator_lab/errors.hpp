#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlab {

/// Bad input: dimension mismatch, out-of-range index, violated precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A library invariant failed (LP solver status, potential validation).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested quantity does not exist for the given data (e.g. a slope
/// fitted through fewer than two points).
class UndefinedResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Failure while integrating a path; carries the step at which it happened.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, long long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long long step() const noexcept { return step_; }

 private:
  long long step_;
};

/// One run of an ensemble failed; carries the run index and its seed.
class EnsembleError : public std::runtime_error {
 public:
  EnsembleError(const std::string& what, std::size_t run, std::uint64_t seed)
      : std::runtime_error("run " + std::to_string(run) + " (seed " + std::to_string(seed) + ") failed: " + what),
        run_(run),
        seed_(seed) {}
  std::size_t run() const noexcept { return run_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t run_;
  std::uint64_t seed_;
};

}  // namespace rlab
