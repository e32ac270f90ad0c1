#include "amo/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "amo/cocycle.hpp"
#include "amo/errors.hpp"
#include "amo/parallel.hpp"

namespace amo::localization {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

unsigned long long mix64(unsigned long long z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<double> diagonal_of(const TruncatedOperator& op) {
  std::vector<double> d(static_cast<std::size_t>(op.dimension()));
  for (long long s = op.lo; s <= op.hi; ++s)
    d[static_cast<std::size_t>(s - op.lo)] = op.diagonal(s);
  return d;
}

// Eigenvalues of the unit-off-diagonal tridiagonal below `energy`, by the
// sign count of the LDL pivot recurrence. Exact zeros are nudged to the
// negative side; the count moves by at most the nudge.
long long count_below(const std::vector<double>& diag, double energy) {
  long long count = 0;
  double q = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double t = diag[i] - energy - (i > 0 ? 1.0 / q : 0.0);
    if (t == 0.0) t = -1e-300;
    if (t < 0.0) ++count;
    q = t;
  }
  return count;
}

double bisect_index(const std::vector<double>& diag, long long idx) {
  double lo = *std::min_element(diag.begin(), diag.end()) - 2.000001;
  double hi = *std::max_element(diag.begin(), diag.end()) + 2.000001;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(diag, mid) >= idx + 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (T - shift) w = rhs for the unit-off-diagonal tridiagonal, by LU
// with partial pivoting (one band of fill-in). A vanishing pivot is replaced
// by a tiny number, which is what inverse iteration wants anyway.
void shifted_solve(const std::vector<double>& diag, double shift,
                   std::vector<double>& w) {
  std::size_t n = diag.size();
  if (n == 1) {
    double piv = diag[0] - shift;
    if (piv == 0.0) piv = 1e-300;
    w[0] /= piv;
    return;
  }
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0);
  double cur0 = diag[0] - shift, cur1 = 1.0, cur2 = 0.0, r = w[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double s0 = 1.0;
    double s1 = diag[i + 1] - shift;
    double s2 = (i + 2 < n) ? 1.0 : 0.0;
    double rs = w[i + 1];
    if (std::abs(cur0) < std::abs(s0)) {
      std::swap(cur0, s0);
      std::swap(cur1, s1);
      std::swap(cur2, s2);
      std::swap(r, rs);
    }
    if (cur0 == 0.0) cur0 = 1e-300;
    double l = s0 / cur0;
    s1 -= l * cur1;
    s2 -= l * cur2;
    rs -= l * r;
    u0[i] = cur0;
    u1[i] = cur1;
    u2[i] = cur2;
    w[i] = r;
    cur0 = s1;
    cur1 = s2;
    cur2 = 0.0;
    r = rs;
  }
  if (cur0 == 0.0) cur0 = 1e-300;
  u0[n - 1] = cur0;
  w[n - 1] = r;
  for (std::size_t ir = n; ir-- > 0;) {
    double acc = w[ir];
    if (ir + 1 < n) acc -= u1[ir] * w[ir + 1];
    if (ir + 2 < n) acc -= u2[ir] * w[ir + 2];
    w[ir] = acc / u0[ir];
  }
}

double tridiag_residual(const std::vector<double>& diag, double value,
                        const std::vector<double>& v) {
  std::size_t n = diag.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = (diag[i] - value) * v[i];
    if (i > 0) t += v[i - 1];
    if (i + 1 < n) t += v[i + 1];
    acc += t * t;
  }
  return std::sqrt(acc);
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s == 0.0) return;
  for (double& x : v) x /= s;
}

void orthogonalize(std::vector<double>& v,
                   const std::vector<const std::vector<double>*>& basis) {
  for (const auto* b : basis) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * (*b)[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * (*b)[i];
  }
}

std::vector<double> inverse_iterate(
    const std::vector<double>& diag, double value, unsigned long long seed,
    const std::vector<const std::vector<double>*>& cluster_basis,
    double* residual_out) {
  std::size_t n = diag.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = static_cast<double>(mix64(seed + i) >> 11) * 0x1.0p-53 - 0.5;
  orthogonalize(v, cluster_basis);
  normalize(v);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    shifted_solve(diag, value, v);
    orthogonalize(v, cluster_basis);
    normalize(v);
    residual = tridiag_residual(diag, value, v);
    if (residual <= 1e-8) {
      *residual_out = residual;
      return v;
    }
  }
  throw InverseIterationStall(
      "inverse iteration residual " + std::to_string(residual) +
      " after 50 iterations at E = " + std::to_string(value));
}

cocycle::SignedLog window_P(const OperatorParams& p, long long start,
                            long long length) {
  OperatorParams q = p;
  q.phase = p.phase + static_cast<double>(start) * p.frequency;
  return cocycle::determinant_P_log(q, length);
}

void check_not_singular(const OperatorParams& p, long long lo, long long hi) {
  TruncatedOperator op{p, lo, hi};
  std::vector<double> d = diagonal_of(op);
  if (count_below(d, p.energy + 1e-10) - count_below(d, p.energy - 1e-10) > 0)
    throw NearSingularWindow("window [" + std::to_string(lo) + ", " +
                             std::to_string(hi) +
                             "] has an eigenvalue within 1e-10 of E");
}

// (H|[lo,hi] - E)^{-1}(x, y) for x <= y, as a determinant quotient: the
// leading minor left of x, the trailing minor right of y, over the full
// window determinant, with a fixed overall minus sign.
LogGreen green_log_sorted(const OperatorParams& p, long long lo, long long hi,
                          long long x, long long y) {
  long long n = hi - lo + 1;
  cocycle::SignedLog left = window_P(p, lo, x - lo);
  cocycle::SignedLog right = window_P(p, y + 1, hi - y);
  cocycle::SignedLog den = window_P(p, lo, n);
  if (den.sign == 0)
    throw NearSingularWindow("window determinant vanished");
  LogGreen g;
  g.sign = -left.sign * right.sign * den.sign;
  g.log_abs = left.log_abs + right.log_abs - den.log_abs;
  if (left.sign == 0 || right.sign == 0) {
    g.sign = 0;
    g.log_abs = -std::numeric_limits<double>::infinity();
  }
  return g;
}

}  // namespace

double TruncatedOperator::diagonal(long long site) const {
  return 2.0 * params.coupling *
         std::cos(kTwoPi *
                  (params.phase + static_cast<double>(site) * params.frequency));
}

long long index_count_below(const TruncatedOperator& op, double energy) {
  if (op.dimension() < 1)
    throw std::invalid_argument("index_count_below: empty window");
  return count_below(diagonal_of(op), energy);
}

std::vector<double> eigenvalues(const TruncatedOperator& op) {
  long long n = op.dimension();
  if (n < 1) throw std::invalid_argument("eigenvalues: empty window");
  std::vector<double> d = diagonal_of(op);
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(out.size(), [&](std::size_t j) {
    out[j] = bisect_index(d, static_cast<long long>(j));
  });
  return out;
}

EigenSystem eigen_tridiagonal(const TruncatedOperator& op, long long first,
                              long long last) {
  long long n = op.dimension();
  if (n < 1) throw std::invalid_argument("eigen_tridiagonal: empty window");
  if (first < 0 || last >= n || first > last)
    throw std::invalid_argument("eigen_tridiagonal: bad index range");
  std::vector<double> d = diagonal_of(op);

  EigenSystem sys;
  std::size_t count = static_cast<std::size_t>(last - first + 1);
  sys.values.resize(count);
  parallel_for(count, [&](std::size_t j) {
    sys.values[j] = bisect_index(d, first + static_cast<long long>(j));
  });

  // Near-degenerate eigenvalues share an inverse-iteration cluster and are
  // orthogonalized against each other; spacings this small are rare here.
  std::vector<std::size_t> cluster_start;
  for (std::size_t j = 0; j < count; ++j)
    if (j == 0 || sys.values[j] - sys.values[j - 1] > 1e-7)
      cluster_start.push_back(j);
  cluster_start.push_back(count);

  sys.vectors.resize(count);
  sys.residuals.resize(count);
  parallel_for(cluster_start.size() - 1, [&](std::size_t c) {
    std::vector<const std::vector<double>*> basis;
    for (std::size_t j = cluster_start[c]; j < cluster_start[c + 1]; ++j) {
      sys.vectors[j] = inverse_iterate(
          d, sys.values[j],
          mix64(static_cast<unsigned long long>(first) + j) * 0x10001ull,
          basis, &sys.residuals[j]);
      basis.push_back(&sys.vectors[j]);
    }
  });
  return sys;
}

LogGreen green_log(const OperatorParams& p, long long lo, long long hi,
                   long long x, long long y) {
  if (lo > hi) throw std::invalid_argument("green_log: empty window");
  if (x < lo || x > hi || y < lo || y > hi)
    throw std::invalid_argument("green_log: site outside window");
  check_not_singular(p, lo, hi);
  if (x > y) std::swap(x, y);
  return green_log_sorted(p, lo, hi, x, y);
}

double green_function(const OperatorParams& p, long long lo, long long hi,
                      long long x, long long y) {
  LogGreen g = green_log(p, lo, hi, x, y);
  if (g.sign == 0) return 0.0;
  return static_cast<double>(g.sign) * std::exp(g.log_abs);
}

double poisson_residual(const OperatorParams& p, long long lo, long long hi,
                        double psi_a, double psi_b) {
  if (lo > hi) throw std::invalid_argument("poisson_residual: empty window");
  check_not_singular(p, lo, hi);
  long long n = hi - lo + 1;
  TruncatedOperator op{p, lo, hi};
  // Formal solution of H psi = E psi seeded at the left boundary.
  std::vector<double> psi(static_cast<std::size_t>(n + 2));
  psi[0] = psi_a;  // site lo - 1
  psi[1] = psi_b;  // site lo
  for (long long s = lo; s <= hi; ++s)
    psi[static_cast<std::size_t>(s - lo + 2)] =
        (p.energy - op.diagonal(s)) * psi[static_cast<std::size_t>(s - lo + 1)] -
        psi[static_cast<std::size_t>(s - lo)];

  double sup = 0.0;
  for (double v : psi) sup = std::max(sup, std::abs(v));
  if (sup == 0.0) return 0.0;

  double worst = 0.0;
  for (long long x = lo; x <= hi; ++x) {
    double g_lo = green_function(p, lo, hi, x, lo);
    double g_hi = green_function(p, lo, hi, x, hi);
    double defect = psi[static_cast<std::size_t>(x - lo + 1)] +
                    g_lo * psi[0] +
                    g_hi * psi[static_cast<std::size_t>(n + 1)];
    worst = std::max(worst, std::abs(defect));
  }
  return worst / sup;
}

RegularityReport regularity_classify(const OperatorParams& p, long long y,
                                     long long k, double m) {
  if (k < 40)
    throw std::invalid_argument("regularity_classify: k < 40 leaves no "
                                "admissible window");
  RegularityReport rep;
  rep.y = y;
  rep.k = k;
  rep.m = m;

  double margin = static_cast<double>(k) / 40.0;
  long long x1_min =
      y + static_cast<long long>(std::ceil(margin)) - (k - 1);
  long long x1_max = y - static_cast<long long>(std::ceil(margin));
  if (x1_min > x1_max) return rep;
  long long stride = k <= 500 ? 1 : (k + 99) / 100;

  std::vector<long long> starts;
  for (long long x1 = x1_min; x1 <= x1_max; x1 += stride)
    starts.push_back(x1);
  std::vector<char> pass(starts.size(), 0);
  parallel_for(starts.size(), [&](std::size_t i) {
    long long x1 = starts[i];
    long long x2 = x1 + k - 1;
    try {
      LogGreen g1 = green_log(p, x1, x2, x1, y);
      LogGreen g2 = green_log(p, x1, x2, y, x2);
      bool ok1 = g1.log_abs < -m * static_cast<double>(y - x1);
      bool ok2 = g2.log_abs < -m * static_cast<double>(x2 - y);
      pass[i] = (ok1 && ok2) ? 1 : 0;
    } catch (const NearSingularWindow&) {
      pass[i] = 0;  // skipped deterministically
    }
  });
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (pass[i]) {
      rep.has_witness = true;
      rep.witness_lo = starts[i];
      rep.witness_hi = starts[i] + k - 1;
      rep.classification = Regularity::Regular;
      break;
    }
  }
  return rep;
}

DecayFit decay_rate(const std::vector<double>& v, long long center) {
  long long n = static_cast<long long>(v.size());
  if (n < 10) throw std::invalid_argument("decay_rate: vector too short");
  if (center < 0) {
    center = 0;
    for (long long i = 1; i < n; ++i)
      if (std::abs(v[static_cast<std::size_t>(i)]) >
          std::abs(v[static_cast<std::size_t>(center)]))
        center = i;
  }
  if (center >= n)
    throw std::invalid_argument("decay_rate: center outside vector");

  long long excl = n / 10;  // boundary-affected zone at each end
  long long radius =
      std::min(center - excl, (n - 1 - excl) - center);
  if (radius < 5)
    throw NoDecayDetected("decay_rate: usable radius too short around site " +
                          std::to_string(center));
  long long r_lo = (radius * 2 + 9) / 10;  // ceil(0.2 radius)
  long long r_hi = (radius * 8) / 10;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  long long pts = 0;
  for (long long r = r_lo; r <= r_hi; ++r) {
    for (int side = -1; side <= 1; side += 2) {
      long long idx = center + side * r;
      double a = std::abs(v[static_cast<std::size_t>(idx)]);
      if (a == 0.0 || !std::isfinite(a)) continue;
      double xr = static_cast<double>(r), yr = std::log(a);
      sx += xr;
      sy += yr;
      sxx += xr * xr;
      sxy += xr * yr;
      syy += yr * yr;
      ++pts;
    }
  }
  if (pts < 4) throw NoDecayDetected("decay_rate: too few usable samples");
  double np = static_cast<double>(pts);
  double cov = sxy - sx * sy / np;
  double varx = sxx - sx * sx / np;
  double vary = syy - sy * sy / np;
  DecayFit fit;
  fit.center = center;
  fit.r_lo = r_lo;
  fit.r_hi = r_hi;
  fit.slope = cov / varx;
  fit.r2 = (vary > 0.0) ? (cov * cov) / (varx * vary) : 0.0;
  if (fit.r2 < 0.5)
    throw NoDecayDetected("decay_rate: r^2 = " + std::to_string(fit.r2));
  return fit;
}

MembershipReport A_kr_membership(const OperatorParams& p, long long k,
                                 double r, double theta_probe) {
  if (k < 1) throw std::invalid_argument("A_kr_membership: k < 1");
  OperatorParams q = p;
  q.phase = theta_probe - 0.5 * static_cast<double>(k - 1) * p.frequency;
  double log_P = cocycle::determinant_P_log(q, k).log_abs;
  MembershipReport rep;
  rep.log_margin = static_cast<double>(k + 1) * r - log_P;
  rep.member = !(log_P > static_cast<double>(k + 1) * r);
  return rep;
}

GrowthBound generalized_bound_check(const std::vector<double>& psi,
                                    long long first_site, double C) {
  GrowthBound b;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    long long site = first_site + static_cast<long long>(i);
    double ratio = std::abs(psi[i]) /
                   (1.0 + static_cast<double>(std::llabs(site)));
    b.tightest_C = std::max(b.tightest_C, ratio);
  }
  b.within = b.tightest_C <= C;
  return b;
}

}  // namespace amo::localization
