#pragma once

#include <cstddef>
#include <vector>

#include "amo/bigfloat.hpp"
#include "amo/continued_fraction.hpp"
#include "amo/params.hpp"

namespace amo::trig {

struct RationalSumReport {
  double sum_excluding_min = 0.0;  // sum_{k != k0} ln |sin 2pi(x + kp/(2q))|
  double combined = 0.0;           // the sum plus (q-1) ln 2
  long long k0 = 0;                // excluded index, lowest on ties
  bool tie = false;
  double lower = 0.0;  // ln q + ln(2/pi)
  double upper = 0.0;  // ln q
  bool bounds_pass = false;
};

// The sum over k = 1..q with the minimal-sine term excluded, checked against
// both closed-form bounds. Throws DegenerateNode when a non-excluded sine
// falls below 1e-15.
RationalSumReport log_sin_sum_rational(double x, long long p, long long q);

// |sum_{k=1}^{q-1} ln |sin(pi k p / q)| + (q-1) ln 2 - ln q|.
double rat0_deviation(long long p, long long q);
// Same identity at `bits` of working precision.
BigFloat rat0_deviation_hiprec(long long p, long long q, unsigned bits = 256);

struct IrrationalSumReport {
  double sum_excluding_min = 0.0;
  double deviation = 0.0;    // |sum + (q_n - 1) ln 2|
  double empirical_C = 0.0;  // deviation / ln q_n; 0 when q_n == 1
  long long q_n = 0;
  long long k0 = 0;
};

// Same sum along the convergent denominator q_n of cf, with alpha in place
// of p/q. The bound constant is reported empirically, never asserted.
IrrationalSumReport log_sin_sum_irrational(
    double x, const arith::ContinuedFractionExpansion& cf, std::size_t n);

struct ShiftedSumReport {
  double deviation = 0.0;
  double bound = 0.0;  // ln q_n + C (Delta_n + (ell-1) Delta_r) q_n ln q_n
  bool pass = false;
  long long q_n = 0;
  long long k0 = 0;
};

// The q_r-shifted variant: term k uses the point x + (k + ell_ks[k-1] q_r)
// alpha / 2. Requires r >= n, |ell_ks| <= ell - 1 entrywise, and the exact
// precondition 10 ell q_n < q_{r+1}; C scales the comparison bound.
ShiftedSumReport shifted_sum_check(double x,
                                   const arith::ContinuedFractionExpansion& cf,
                                   std::size_t n, std::size_t r, long long ell,
                                   const std::vector<long long>& ell_ks,
                                   double C);

struct UniformitySample {
  std::vector<double> thetas;
  double epsilon_measured = 0.0;
  long long attaining_j = 0;  // node index of the inner max
  double attaining_z = 0.0;   // argmax over [-1, 1]
};

// (1/k) ln of max over z in [-1,1] and j of prod_{l != j}
// |z - cos 2pi theta_l| / |cos 2pi theta_j - cos 2pi theta_l|, for k+1 nodes.
// Only the cos values matter. Throws CoincidentNodes when two cos values are
// closer than 1e-13.
UniformitySample uniformity_measure(const std::vector<double>& thetas);

enum class BlowupVerdict { NotApplicable, Contradiction, NoContradiction };

struct BlowupReport {
  BlowupVerdict verdict = BlowupVerdict::NotApplicable;
  double uniformity = 0.0;      // measured epsilon of the node set
  double log_interp_max = 0.0;  // ln max_z sum_j |Q_k(cos th_j)| prod-ratio
  double log_target = 0.0;      // k ln lambda
  std::vector<double> node_log_margin;  // membership margins, one per node
};

// Interpolation-blowup probe: with all k+1 nodes inside A_{k, L-eps}
// (L = ln lambda), a set that were eps1-uniform with eps1 < eps would cap
// the Lagrange reconstruction of Q_k below its guaranteed maximum. Verdict
// Contradiction means the measured uniformity indeed exceeds eps1;
// NotApplicable means some node failed the membership precondition.
BlowupReport lagrange_blowup_check(const OperatorParams& params, long long k,
                                   const std::vector<double>& thetas,
                                   double eps, double eps1);

}  // namespace amo::trig
