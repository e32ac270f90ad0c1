#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "amo/mat2.hpp"
#include "amo/params.hpp"

namespace amo::cocycle {

// One-step transfer matrix [[E - 2 lambda cos(2 pi x), -1], [1, 0]].
Mat2d transfer_matrix(const OperatorParams& p, double x);
Mat2c transfer_matrix_complex(const OperatorParams& p,
                              std::complex<double> energy, double x);
// Analytic continuation in the phase: cos(2 pi x) for complex x.
Mat2c transfer_matrix_complex(const OperatorParams& p,
                              std::complex<double> energy,
                              std::complex<double> x);

// n-step product A_n(x) = A(x + (n-1) alpha) ... A(x), log-scaled.
ScaledMat2d transfer_product(const OperatorParams& p, double x, long long n);

struct LyapunovEstimate {
  double value = 0.0;   // mean over phases of (1/n) ln ||A_n||
  double spread = 0.0;  // max - min over phases
  std::vector<double> per_phase;
  long long n_steps = 0;
};

// Phases are a Kronecker sequence offset by a seed-derived shift, so the
// estimate is deterministic for fixed inputs. Requires n_steps >= 1000.
LyapunovEstimate lyapunov_exponent(const OperatorParams& p, long long n_steps,
                                   int n_phases, unsigned long long seed);

// Rotation number of a general one-frequency SL(2,R) cocycle: the Birkhoff
// mean of projective angle increments, each chosen in (-1/2, 1/2].
double rotation_number(double alpha,
                       const std::function<Mat2d(double)>& step_matrix,
                       long long n_steps, double x0);

struct RotationReport {
  double rho = 0.0;       // determination in [0, 1/2]
  double ids = 0.0;       // 1 - 2 rho
  double raw_mean = 0.0;  // unfolded Birkhoff mean of increments
  long long n_steps = 0;
};

// Rho for the transfer cocycle at p.energy, folded to [0, 1/2]; ids = 1-2rho.
// Energies strictly outside +-(2 + 2|lambda|) short-circuit to ids = 0 / 1.
RotationReport fibered_rotation_number(const OperatorParams& p,
                                       long long n_steps);

// P_k = det(E - H) restricted to the window [0, k-1], by the three-term
// recurrence P_j = (E - 2 lambda cos(2 pi (theta + (j-1) alpha))) P_{j-1}
//                - P_{j-2}. P_0 = 1. Plain value overflows near k ~ 600;
// the signed-log variant rescales every step.
double determinant_P(const OperatorParams& p, long long k);

struct SignedLog {
  int sign = 0;           // -1, 0, +1
  double log_abs = 0.0;   // -inf when sign == 0
};
SignedLog determinant_P_log(const OperatorParams& p, long long k);

struct HermanReport {
  double estimate = 0.0;     // quadrature of integral_0^1 ln |P_k(theta)| dtheta
  double lower_bound = 0.0;  // k ln |lambda|
  double margin = 0.0;       // estimate - lower_bound
  bool pass = false;
  int jittered_nodes = 0;
  long long n_quad = 0;
};

// Midpoint-rule quadrature with deterministic node jitter near zeros of P_k.
HermanReport herman_bound_check(double coupling, double frequency,
                                double energy, long long k, long long n_quad,
                                double tol = 1e-6);

struct ThoulessReport {
  double lyapunov = 0.0;      // L(E) value supplied by the caller
  double thouless_sum = 0.0;  // sum_i w_i ln |E - a_i|
  double residual = 0.0;      // lyapunov - thouless_sum
  std::vector<std::size_t> excluded_atoms;
  bool singular = false;      // an atom fell inside the exclusion window
};

// Compares a Lyapunov value against the Thouless integral of an atomic
// density-of-states measure; atoms within exclusion_tol of E are excluded
// and flagged rather than poisoning the sum.
ThoulessReport thouless_residual(double lyapunov_value,
                                 const std::vector<double>& atom_positions,
                                 const std::vector<double>& atom_weights,
                                 double energy, double exclusion_tol = 1e-9);

}  // namespace amo::cocycle
