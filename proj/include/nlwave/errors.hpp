#pragma once

#include <stdexcept>
#include <string>

namespace nlwave {

/// Index or coordinate outside the admissible range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Violated precondition on shapes or parameter values.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Newton iteration failed to converge at some interior site.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, long site, double residual)
      : std::runtime_error(what), site_(site), residual_(residual) {}

  /// Flattened site index (index_map convention) or radial node j.
  long site() const noexcept { return site_; }
  double residual() const noexcept { return residual_; }

 private:
  long site_;
  double residual_;
};

/// Inner linear solver did not make progress.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Levels handed to an energy report do not satisfy the scheme.
class IdentityNotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice-only diagnostic called on a continuum configuration.
class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nlwave
