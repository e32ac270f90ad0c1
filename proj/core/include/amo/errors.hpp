#pragma once

#include <stdexcept>
#include <string>

namespace amo {

// Base class for all toolkit errors. Validation problems (bad arguments,
// violated preconditions) throw std::invalid_argument or a subclass of
// Error; numeric failures detected mid-computation throw subclasses too,
// with enough context in the message to reproduce.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resonance classification: k falls outside every computed scale bracket.
struct ScaleOutOfRange : Error {
  using Error::Error;
};

// m-function iteration left the upper half plane.
struct LeftHalfConvergence : Error {
  using Error::Error;
};

// m-value too close to real axis or zero for the conjugation matrix.
struct DegenerateM : Error {
  using Error::Error;
};

// Angle unwrapping saw a jump > 1/2 even after grid refinement.
struct BranchUnwrapFailure : Error {
  using Error::Error;
};

// Band-edge isolation found a number of roots != 2q after refinement.
struct RootCountMismatch : Error {
  using Error::Error;
};

// Discriminant probe detected phase dependence above tolerance.
struct ThetaDependenceDetected : Error {
  using Error::Error;
};

// Green function requested at an energy within 1e-10 of a window eigenvalue.
struct NearSingularWindow : Error {
  using Error::Error;
};

// Inverse iteration failed to reach the residual target.
struct InverseIterationStall : Error {
  using Error::Error;
};

// Dual pair construction: eigenvector tail mass too large for the cutoff.
struct InsufficientDecay : Error {
  using Error::Error;
};

// Shifted trigonometric sum called outside its validity regime.
struct PreconditionViolated : Error {
  using Error::Error;
};

// Uniformity measure with two interpolation nodes closer than 1e-13.
struct CoincidentNodes : Error {
  using Error::Error;
};

// A non-excluded node of a trigonometric sum is numerically zero.
struct DegenerateNode : Error {
  using Error::Error;
};

// Cohomological equation: a divisor exp(2 pi i k a) - 1 vanishes against a
// coefficient too large to drop.
struct SmallDivisorOverflow : Error {
  using Error::Error;
};

// Eigenvector decay fit rejected: no exponential trend in the data.
struct NoDecayDetected : Error {
  using Error::Error;
};

}  // namespace amo
