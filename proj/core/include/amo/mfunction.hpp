#pragma once

#include <complex>
#include <vector>

#include "amo/fourier.hpp"
#include "amo/mat2.hpp"
#include "amo/params.hpp"

namespace amo::mfunction {

// True when Im E > 0 and 2 lambda sinh|2 pi Im x| < Im E (strictly), the
// region where the Moebius iteration below is a uniform contraction.
bool in_domain_omega(double coupling, std::complex<double> energy,
                     std::complex<double> x);

struct MIterate {
  std::complex<double> m{0.0, 1.0};  // final iterate, Im > 0
  std::vector<double> step_sizes;    // |m^j - m^{j-1}| per step
  double invariance_residual = 0.0;  // |S(x) . m(E,x) - m(E,x+alpha)|
  long long n_steps = 0;
};

// m^n(E,x) = S(x-alpha) S(x-2alpha) ... S(x-n alpha) . i, the nested-image
// approximation of the invariant section. Throws LeftHalfConvergence if an
// iterate leaves the upper half plane.
MIterate m_iterate(const OperatorParams& p, std::complex<double> energy,
                   std::complex<double> x, long long n);

// Unimodular C with C . m = i under the Moebius action; throws DegenerateM
// when Im m < 1e-14.
Mat2d conjugation_C(std::complex<double> m);

// m at real energy p.energy, as the Richardson limit of m(E + i delta) along
// delta in {1e-2, 1e-3, 1e-4}. instability is the disagreement between the
// two extrapolation pairs.
struct BoundaryM {
  std::complex<double> m{0.0, 1.0};
  double instability = 0.0;
};
BoundaryM boundary_m(const OperatorParams& p, double x, long long n_converge);

struct PhiSeries {
  fourier::FourierSeries phi_hat;  // rotation angle phi(E, .)
  double theta = 0.0;              // mean phi_hat(0)
  double residual = 0.0;        // sup over grid of ||R_phi - C S C^{-1}||
  double instability = 0.0;     // worst boundary-m extrapolation disagreement
  long long grid_size = 0;
};

// Conjugates the transfer cocycle at real energy to rotations on a grid and
// Fourier-transforms the continuous angle branch. grid_size must be a power
// of two; it is doubled once before BranchUnwrapFailure is thrown.
PhiSeries rotation_angle_phi(const OperatorParams& p, long long grid_size,
                             long long n_converge);

struct CohomologicalSolution {
  fourier::FourierSeries psi_hat;
  double residual = 0.0;  // sup of psi(x+alpha) - psi(x) - (phi(x) - mean)
  std::vector<long long> dropped_modes;
};

// Divides by e^{2 pi i k alpha} - 1 mode by mode, zeroing the mean. A divisor
// below 1e-14 drops the mode when the coefficient is negligible (< 1e-13) and
// throws SmallDivisorOverflow otherwise.
CohomologicalSolution cohomological_solve(const fourier::FourierSeries& phi_hat,
                                          double alpha, long long K_solve);

struct DecayExponent {
  double value = 0.0;  // max over k of (1/|k|) ln |phi_hat(k) / divisor|
  long long k_at = 0;
};

// Truncated growth exponent of the cohomological solution; negative values
// are evidence the solved series converges on a strip.
DecayExponent decay_exponent_a(const fourier::FourierSeries& phi_hat,
                               double alpha, long long k_min);

struct ReducibilityReport {
  double theta = 0.0;     // rotation angle of the conjugated cocycle
  double residual = 0.0;  // sup ||B(x+alpha) S(x) B(x)^{-1} - R_theta||
  double a_truncated = 0.0;
  std::vector<long long> dropped_modes;
  long long K = 0;
};

// Builds B = R_{-psi} C on a grid and measures how far B conjugates the
// cocycle to the constant rotation R_theta.
ReducibilityReport reducibility_probe(const OperatorParams& p, long long K,
                                      long long n_converge);

}  // namespace amo::mfunction
