#include "amo/cocycle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "amo/parallel.hpp"

namespace amo::cocycle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

// splitmix64; used only to derive a deterministic phase offset from a seed.
unsigned long long mix64(unsigned long long z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Mat2d transfer_matrix(const OperatorParams& p, double x) {
  double diag = p.energy - 2.0 * p.coupling * std::cos(kTwoPi * x);
  return {diag, -1.0, 1.0, 0.0};
}

Mat2c transfer_matrix_complex(const OperatorParams& p,
                              std::complex<double> energy, double x) {
  std::complex<double> diag =
      energy - 2.0 * p.coupling * std::cos(kTwoPi * x);
  return {diag, {-1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
}

Mat2c transfer_matrix_complex(const OperatorParams& p,
                              std::complex<double> energy,
                              std::complex<double> x) {
  std::complex<double> diag =
      energy - 2.0 * p.coupling * std::cos(kTwoPi * x);
  return {diag, {-1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
}

ScaledMat2d transfer_product(const OperatorParams& p, double x, long long n) {
  if (n < 0) throw std::invalid_argument("transfer_product: n < 0");
  ScaledMat2d acc;
  double phase = frac(x);
  for (long long j = 0; j < n; ++j) {
    acc.left_multiply(transfer_matrix(p, phase));
    phase = frac(phase + p.frequency);
  }
  return acc;
}

LyapunovEstimate lyapunov_exponent(const OperatorParams& p, long long n_steps,
                                   int n_phases, unsigned long long seed) {
  if (n_steps < 1000)
    throw std::invalid_argument("lyapunov_exponent: n_steps must be >= 1000");
  if (n_phases < 1)
    throw std::invalid_argument("lyapunov_exponent: n_phases must be >= 1");

  // Kronecker phase ladder with a seed-derived offset.
  constexpr double kGoldenConj = 0.61803398874989484820;
  const double offset =
      static_cast<double>(mix64(seed) >> 11) * 0x1.0p-53;

  LyapunovEstimate est;
  est.n_steps = n_steps;
  est.per_phase.assign(n_phases, 0.0);
  parallel_for(static_cast<std::size_t>(n_phases), [&](std::size_t j) {
    double x0 = frac(offset + static_cast<double>(j) * kGoldenConj);
    ScaledMat2d prod = transfer_product(p, x0, n_steps);
    est.per_phase[j] = prod.log_frobenius() / static_cast<double>(n_steps);
  });

  double lo = est.per_phase[0], hi = est.per_phase[0], sum = 0.0;
  for (double v : est.per_phase) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  est.value = sum / n_phases;
  est.spread = hi - lo;
  return est;
}

namespace {

// Birkhoff mean of projective angle increments, each increment folded into
// (wrap_hi - 1, wrap_hi]. The window must contain the support of the true
// per-step increments; an increment landing on the window edge aliases to
// the opposite edge and poisons the mean.
double rotation_mean(double alpha, const std::function<Mat2d(double)>& step,
                     long long n_steps, double x0, double wrap_hi) {
  double x = frac(x0);
  double vx = std::cos(0.3), vy = std::sin(0.3);
  double angle = std::atan2(vy, vx) / kTwoPi;
  double total = 0.0;
  for (long long j = 0; j < n_steps; ++j) {
    Mat2d m = step(x);
    double wx = m.a * vx + m.b * vy;
    double wy = m.c * vx + m.d * vy;
    double new_angle = std::atan2(wy, wx) / kTwoPi;
    double d = new_angle - angle;
    d -= std::floor(d);                // [0, 1)
    if (d > wrap_hi) d -= 1.0;         // (wrap_hi - 1, wrap_hi]
    total += d;
    double inv_norm = 1.0 / std::hypot(wx, wy);
    vx = wx * inv_norm;
    vy = wy * inv_norm;
    angle = new_angle;
    x = frac(x + alpha);
  }
  return total / static_cast<double>(n_steps);
}

}  // namespace

double rotation_number(double alpha,
                       const std::function<Mat2d(double)>& step_matrix,
                       long long n_steps, double x0) {
  if (n_steps < 1)
    throw std::invalid_argument("rotation_number: n_steps must be >= 1");
  return rotation_mean(alpha, step_matrix, n_steps, x0, 0.5);
}

RotationReport fibered_rotation_number(const OperatorParams& p,
                                       long long n_steps) {
  RotationReport rep;
  rep.n_steps = n_steps;
  const double bound = spectrum_bound(p.coupling);
  if (p.energy < -bound) {
    rep.rho = 0.5;
    rep.ids = 0.0;
    rep.raw_mean = -0.5;
    return rep;
  }
  if (p.energy > bound) {
    rep.rho = 0.0;
    rep.ids = 1.0;
    rep.raw_mean = 0.0;
    return rep;
  }
  // A transfer step maps the open right half-plane into the open upper
  // half-plane (second image component equals the first input component),
  // so per-step increments lie in (-1/4, 3/4). Near the bottom of the
  // spectrum they cluster at +1/2, which the symmetric window would fold
  // to -1/2 at random; the shifted window keeps the branch honest.
  double mean = rotation_mean(
      p.frequency, [&](double x) { return transfer_matrix(p, x); }, n_steps,
      p.phase, 0.75);
  rep.raw_mean = mean;
  double r = mean - std::floor(mean);
  rep.rho = std::min(r, 1.0 - r);
  rep.ids = 1.0 - 2.0 * rep.rho;
  return rep;
}

double determinant_P(const OperatorParams& p, long long k) {
  if (k < 0) throw std::invalid_argument("determinant_P: k < 0");
  double prev = 0.0;  // P_{-1}
  double curr = 1.0;  // P_0
  for (long long j = 1; j <= k; ++j) {
    double site = p.phase + static_cast<double>(j - 1) * p.frequency;
    double diag = p.energy - 2.0 * p.coupling * std::cos(kTwoPi * site);
    double next = diag * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

SignedLog determinant_P_log(const OperatorParams& p, long long k) {
  if (k < 0) throw std::invalid_argument("determinant_P_log: k < 0");
  double prev = 0.0;
  double curr = 1.0;
  double log_scale = 0.0;
  for (long long j = 1; j <= k; ++j) {
    double site = p.phase + static_cast<double>(j - 1) * p.frequency;
    double diag = p.energy - 2.0 * p.coupling * std::cos(kTwoPi * site);
    double next = diag * curr - prev;
    prev = curr;
    curr = next;
    double m = std::max(std::abs(curr), std::abs(prev));
    if (m > 0.0 && std::isfinite(m)) {
      int e = 0;
      std::frexp(m, &e);
      curr = std::ldexp(curr, -e);
      prev = std::ldexp(prev, -e);
      log_scale += e * 0.6931471805599453094;
    }
  }
  SignedLog out;
  if (curr == 0.0) {
    out.sign = 0;
    out.log_abs = -std::numeric_limits<double>::infinity();
  } else {
    out.sign = curr > 0.0 ? 1 : -1;
    out.log_abs = log_scale + std::log(std::abs(curr));
  }
  return out;
}

namespace {

// ln |P_k| at phase theta; an exact zero at the node is nudged
// deterministically and counted.
double log_abs_P(const OperatorParams& base, long long k, double theta,
                 int* jitter) {
  OperatorParams p = base;
  p.phase = theta;
  SignedLog sl = determinant_P_log(p, k);
  if (!std::isfinite(sl.log_abs)) {
    ++*jitter;
    p.phase = theta + 1e-13;
    sl = determinant_P_log(p, k);
    if (!std::isfinite(sl.log_abs)) sl.log_abs = -744.0;
  }
  return sl.log_abs;
}

// Adaptive midpoint integral of ln |P_k| over [a, a+h], given the value fm
// at the cell midpoint. The integrand has logarithmic dips at the zeros of
// P_k; a flat composite rule is biased there by O(h), so cells keep
// splitting until the two-point refinement agrees with the one-point value.
double refine_cell(const OperatorParams& base, long long k, double a, double h,
                   double fm, int depth, int* jitter) {
  double coarse = h * fm;
  double f1 = log_abs_P(base, k, a + 0.25 * h, jitter);
  double f2 = log_abs_P(base, k, a + 0.75 * h, jitter);
  double fine = 0.5 * h * (f1 + f2);
  if (depth >= 48 ||
      std::abs(fine - coarse) <= 1e-13 * (1.0 + std::abs(fine)))
    return fine;
  return refine_cell(base, k, a, 0.5 * h, f1, depth + 1, jitter) +
         refine_cell(base, k, a + 0.5 * h, 0.5 * h, f2, depth + 1, jitter);
}

}  // namespace

HermanReport herman_bound_check(double coupling, double frequency,
                                double energy, long long k, long long n_quad,
                                double tol) {
  if (k < 1) throw std::invalid_argument("herman_bound_check: k < 1");
  if (n_quad < 16) throw std::invalid_argument("herman_bound_check: n_quad < 16");

  HermanReport rep;
  rep.n_quad = n_quad;
  OperatorParams base;
  base.coupling = coupling;
  base.frequency = frequency;
  base.energy = energy;
  const double h = 1.0 / static_cast<double>(n_quad);
  std::vector<double> vals(static_cast<std::size_t>(n_quad), 0.0);
  std::vector<int> jitters(static_cast<std::size_t>(n_quad), 0);
  parallel_for(static_cast<std::size_t>(n_quad), [&](std::size_t i) {
    double a = static_cast<double>(i) * h;
    double fm = log_abs_P(base, k, a + 0.5 * h, &jitters[i]);
    vals[i] = refine_cell(base, k, a, h, fm, 0, &jitters[i]);
  });

  double sum = 0.0;
  int jittered = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    sum += vals[i];
    jittered += jitters[i];
  }
  rep.estimate = sum;
  double abs_coupling = std::abs(coupling);
  rep.lower_bound = abs_coupling > 0.0
                        ? k * std::log(abs_coupling)
                        : -std::numeric_limits<double>::infinity();
  rep.margin = rep.estimate - rep.lower_bound;
  rep.pass = rep.estimate >= rep.lower_bound - tol;
  rep.jittered_nodes = jittered;
  return rep;
}

ThoulessReport thouless_residual(double lyapunov_value,
                                 const std::vector<double>& atom_positions,
                                 const std::vector<double>& atom_weights,
                                 double energy, double exclusion_tol) {
  if (atom_positions.size() != atom_weights.size())
    throw std::invalid_argument("thouless_residual: atom arrays differ in size");
  ThoulessReport rep;
  rep.lyapunov = lyapunov_value;
  double sum = 0.0;
  for (std::size_t i = 0; i < atom_positions.size(); ++i) {
    double gap = std::abs(energy - atom_positions[i]);
    if (gap < exclusion_tol) {
      rep.excluded_atoms.push_back(i);
      rep.singular = true;
      continue;
    }
    sum += atom_weights[i] * std::log(gap);
  }
  rep.thouless_sum = sum;
  rep.residual = lyapunov_value - sum;
  return rep;
}

}  // namespace amo::cocycle
