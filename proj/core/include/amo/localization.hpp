#pragma once

#include <cstdint>
#include <vector>

#include "amo/params.hpp"

namespace amo::localization {

// H restricted to the sites [lo, hi] with zero boundary conditions: symmetric
// tridiagonal, unit off-diagonals, diagonal 2 lambda cos(2 pi (theta + n a)).
// params.energy is ignored by the operator itself.
struct TruncatedOperator {
  OperatorParams params;
  long long lo = 0;
  long long hi = 0;

  long long dimension() const { return hi - lo + 1; }
  double diagonal(long long site) const;
};

// Number of eigenvalues strictly below energy, by the LDL inertia count.
long long index_count_below(const TruncatedOperator& op, double energy);

// All eigenvalues, ascending, by per-index Sturm bisection to 1e-12.
std::vector<double> eigenvalues(const TruncatedOperator& op);

struct EigenSystem {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // unit 2-norm
  std::vector<double> residuals;             // ||(H - E) v||
};

// Eigenpairs for the ascending-index range [first, last]. Inverse iteration
// from the bisection shifts; eigenvectors in a near-degenerate cluster are
// orthogonalized against each other. Throws InverseIterationStall when a
// residual stays above 1e-8 after 50 iterations.
EigenSystem eigen_tridiagonal(const TruncatedOperator& op, long long first,
                              long long last);

// Green's function entry of (H|[lo,hi] - E)^{-1} at (x, y), E = params.energy.
// Throws NearSingularWindow when E is within 1e-10 of a window eigenvalue.
double green_function(const OperatorParams& p, long long lo, long long hi,
                      long long x, long long y);

struct LogGreen {
  int sign = 0;
  double log_abs = 0.0;
};
// Same entry in signed-log form, usable when the value over/underflows.
LogGreen green_log(const OperatorParams& p, long long lo, long long hi,
                   long long x, long long y);

// Extends the two seed values Psi(lo-1) = psi_a, Psi(lo) = psi_b through the
// eigenvalue equation and measures the worst boundary-reconstruction defect
// Psi(x) + G(x,lo) Psi(lo-1) + G(x,hi) Psi(hi+1) over the window, relative
// to sup |Psi|.
double poisson_residual(const OperatorParams& p, long long lo, long long hi,
                        double psi_a, double psi_b);

enum class Regularity { Regular, Singular };

struct RegularityReport {
  long long y = 0;
  long long k = 0;
  double m = 0.0;
  bool has_witness = false;
  long long witness_lo = 0;
  long long witness_hi = 0;
  Regularity classification = Regularity::Singular;
};

// Scans windows [x1, x1 + k - 1] containing y with both endpoints at least
// k/40 away; y is Regular when some window has |G(y, x_i)| < e^{-m |y - x_i|}
// at both ends. Windows with E too close to a window eigenvalue are skipped.
RegularityReport regularity_classify(const OperatorParams& p, long long y,
                                     long long k, double m);

struct DecayFit {
  double slope = 0.0;
  double r2 = 0.0;
  long long center = 0;
  long long r_lo = 0;  // fitted radius range
  long long r_hi = 0;
};

// Least-squares fit of ln |v_n| against |n - center| over the middle part of
// the decay range, with 10% of the box excluded at each boundary. center < 0
// selects argmax |v_n|. Throws NoDecayDetected when r^2 < 0.5.
DecayFit decay_rate(const std::vector<double>& v, long long center = -1);

struct MembershipReport {
  bool member = false;
  double log_margin = 0.0;  // (k+1) r - ln |P_k|
};

// Whether |Q_k(cos 2 pi theta_probe)| <= e^{(k+1) r}, via the log-scaled
// determinant at the shifted phase theta_probe - (k-1) alpha / 2.
MembershipReport A_kr_membership(const OperatorParams& p, long long k,
                                 double r, double theta_probe);

struct GrowthBound {
  bool within = false;
  double tightest_C = 0.0;  // max |psi(x)| / (1 + |x|)
};

// Scan of |psi(x)| <= C (1 + |x|) for the sequence psi starting at
// first_site.
GrowthBound generalized_bound_check(const std::vector<double>& psi,
                                    long long first_site, double C);

}  // namespace amo::localization
