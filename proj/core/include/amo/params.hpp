#pragma once

namespace amo {

// Parameters of the operator (H u)_n = u_{n+1} + u_{n-1}
//                                      + 2 lambda cos(2 pi (theta + n alpha)) u_n.
struct OperatorParams {
  double coupling = 0.0;   // lambda
  double frequency = 0.0;  // alpha
  double phase = 0.0;      // theta
  double energy = 0.0;     // E
};

// |E| never exceeds this on the spectrum.
inline double spectrum_bound(double coupling) {
  double l = coupling < 0 ? -coupling : coupling;
  return 2.0 + 2.0 * l;
}

}  // namespace amo
