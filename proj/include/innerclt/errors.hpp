#pragma once

#include <stdexcept>
#include <string>

namespace innerclt {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad zeros, non-finite points, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation point within the pole guard of a Blaschke factor.
class PoleProximity : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Grid refinement reached max_grid before two levels agreed to tol.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_delta, long grid)
      : Error(what), last_delta_(last_delta), grid_(grid) {}
  double last_delta() const noexcept { return last_delta_; }
  long grid() const noexcept { return grid_; }

 private:
  double last_delta_;
  long grid_;
};

/// Total iterate degree exceeds the quadrature budget.
class DegreeBudgetExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Boundary phase failed to unwrap monotonically even on the refined grid.
class RootBracketFailure : public Error {
 public:
  using Error::Error;
};

/// Blocks of a squared-moduli product interleave.
class SeparationViolation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A four-factor specification matches none of the supported shapes.
class ShapeMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The variance sandwich failed; only an implementation bug can cause this.
class SandwichViolation : public Error {
 public:
  using Error::Error;
};

/// N too small for the block-splitting construction to close one block.
class RegimeTooSmall : public Error {
 public:
  using Error::Error;
};

/// Too few samples for the distributional statistics.
class InsufficientSamples : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Coefficient tail beyond storage is not negligible.
class TruncationError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace innerclt
