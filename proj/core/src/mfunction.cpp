#include "amo/mfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "amo/cocycle.hpp"
#include "amo/errors.hpp"
#include "amo/parallel.hpp"

namespace amo::mfunction {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(long long n) { return n > 0 && (n & (n - 1)) == 0; }

double sup_entry_diff(const Mat2d& l, const Mat2d& r) {
  return max_abs_entry(l - r);
}

}  // namespace

bool in_domain_omega(double coupling, std::complex<double> energy,
                     std::complex<double> x) {
  if (energy.imag() <= 0.0) return false;
  return 2.0 * coupling * std::sinh(std::abs(kTwoPi * x.imag())) <
         energy.imag();
}

MIterate m_iterate(const OperatorParams& p, std::complex<double> energy,
                   std::complex<double> x, long long n) {
  if (n < 1) throw std::invalid_argument("m_iterate: n < 1");
  MIterate out;
  out.n_steps = n;
  out.step_sizes.reserve(static_cast<std::size_t>(n));
  const std::complex<double> i_pt{0.0, 1.0};
  ScaledMat2c prod;  // S(x - alpha) ... S(x - j alpha)
  std::complex<double> prev = i_pt;
  for (long long j = 1; j <= n; ++j) {
    std::complex<double> xj = x - static_cast<double>(j) * p.frequency;
    prod.right_multiply(
        cocycle::transfer_matrix_complex(p, energy, xj));
    std::complex<double> mj = moebius(prod.unit, i_pt);
    if (!(mj.imag() > 0.0))
      throw LeftHalfConvergence("m_iterate: iterate left the upper half "
                                "plane at step " + std::to_string(j));
    out.step_sizes.push_back(std::abs(mj - prev));
    prev = mj;
  }
  out.m = prev;

  // Invariance check S(x) . m(E,x) = m(E,x+alpha), with the right side
  // recomputed from scratch at the shifted phase.
  ScaledMat2c shifted;
  std::complex<double> xa = x + p.frequency;
  for (long long j = 1; j <= n; ++j) {
    std::complex<double> xj = xa - static_cast<double>(j) * p.frequency;
    shifted.right_multiply(
        cocycle::transfer_matrix_complex(p, energy, xj));
  }
  std::complex<double> m_shift = moebius(shifted.unit, i_pt);
  std::complex<double> pushed =
      moebius(cocycle::transfer_matrix_complex(p, energy, x), out.m);
  out.invariance_residual = std::abs(pushed - m_shift);
  return out;
}

Mat2d conjugation_C(std::complex<double> m) {
  double v = m.imag();
  if (v < 1e-14) throw DegenerateM("conjugation_C: Im m < 1e-14");
  double r = std::abs(m);
  double s = std::sqrt(v);
  // [[Re m / (|m| sqrt(Im m)), -|m| / sqrt(Im m)], [sqrt(Im m) / |m|, 0]]
  // has unit determinant and sends m to i.
  return {m.real() / (r * s), -r / s, s / r, 0.0};
}

namespace {

// One rung of the boundary ladder: iterate m at E + i delta until two
// successive checkpoints agree. Off the real axis the cocycle is uniformly
// hyperbolic, but the gap shrinks with delta, so the rate is only
// (1 - c delta) per step; a fixed step count cannot serve every rung.
// n_cap bounds the work; on cap the last iterate is returned and the
// extrapolant disagreement surfaces the slop.
std::complex<double> m_at_depth(const OperatorParams& p, double delta,
                                double x, long long n_cap) {
  const std::complex<double> i_pt{0.0, 1.0};
  const std::complex<double> e{p.energy, delta};
  ScaledMat2c prod;
  std::complex<double> prev = i_pt;
  long long j = 0;
  while (j < n_cap) {
    long long stop = std::min(n_cap, j + 16);
    for (; j < stop; ++j) {
      double xj = x - static_cast<double>(j + 1) * p.frequency;
      prod.right_multiply(
          cocycle::transfer_matrix_complex(p, e, {xj, 0.0}));
    }
    std::complex<double> mj = moebius(prod.unit, i_pt);
    if (!(mj.imag() > 0.0))
      throw LeftHalfConvergence("boundary_m: iterate left the upper half "
                                "plane at depth " + std::to_string(delta));
    if (std::abs(mj - prev) <= 1e-13 * (1.0 + std::abs(mj))) return mj;
    prev = mj;
  }
  return prev;
}

}  // namespace

BoundaryM boundary_m(const OperatorParams& p, double x, long long n_converge) {
  const double d0 = 0.02;
  std::complex<double> f0 = m_at_depth(p, d0, x, n_converge);
  std::complex<double> f1 = m_at_depth(p, d0 / 2, x, n_converge);
  std::complex<double> f2 = m_at_depth(p, d0 / 4, x, n_converge);
  // Geometric ladder, so 2 f(d/2) - f(d) cancels the linear term; the two
  // first-order extrapolants agree exactly when m(E + i delta) is affine
  // in delta, and their second-order combination removes the quadratic.
  std::complex<double> r1 = 2.0 * f1 - f0;
  std::complex<double> r2 = 2.0 * f2 - f1;
  BoundaryM out;
  out.m = (4.0 * r2 - r1) / 3.0;
  out.instability = std::abs(r2 - r1);
  if (!(out.m.imag() > 0.0))
    throw LeftHalfConvergence("boundary_m: extrapolated m left the upper "
                              "half plane");
  return out;
}

namespace {

struct PhiGrid {
  std::vector<Mat2d> C_at;     // C(x_j)
  std::vector<Mat2d> C_shift;  // C(x_j + alpha)
  std::vector<double> phi;     // continuous branch of the rotation angle
  double residual = 0.0;
  double instability = 0.0;
};

// One resolution pass: may fail the unwrap, in which case the caller
// refines the grid once.
PhiGrid phi_on_grid(const OperatorParams& p, long long grid_size,
                    long long n_converge) {
  std::size_t n = static_cast<std::size_t>(grid_size);
  PhiGrid g;
  g.C_at.resize(n);
  g.C_shift.resize(n);
  g.phi.resize(n);
  std::vector<double> raw(n), res(n), inst(n);
  parallel_for(n, [&](std::size_t j) {
    double x = static_cast<double>(j) / static_cast<double>(grid_size);
    BoundaryM ma = boundary_m(p, x, n_converge);
    BoundaryM mb = boundary_m(p, x + p.frequency, n_converge);
    g.C_at[j] = conjugation_C(ma.m);
    g.C_shift[j] = conjugation_C(mb.m);
    Mat2d conj = g.C_shift[j] * cocycle::transfer_matrix(p, x) *
                 inverse(g.C_at[j]);
    double phi = std::atan2(conj.c, conj.a) / kTwoPi;
    raw[j] = phi;
    res[j] = sup_entry_diff(rotation(phi), conj);
    inst[j] = std::max(ma.instability, mb.instability);
  });
  g.residual = *std::max_element(res.begin(), res.end());
  g.instability = *std::max_element(inst.begin(), inst.end());

  // Continuous branch: fold each increment to (-1/2, 1/2]. An analytic
  // angle sampled finely has small increments; one near the fold point is
  // an unresolved jump. The closing increment must also cancel the
  // accumulated winding, or no periodic branch exists.
  double wind = 0.0;
  g.phi[0] = raw[0];
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double d = raw[j + 1] - raw[j];
    d -= std::floor(d);
    if (d > 0.5) d -= 1.0;
    if (std::abs(d) > 0.45)
      throw BranchUnwrapFailure("rotation_angle_phi: angle jump " +
                                std::to_string(d) + " between nodes");
    g.phi[j + 1] = g.phi[j] + d;
    wind += d;
  }
  double close = raw[0] - raw[n - 1];
  close -= std::floor(close);
  if (close > 0.5) close -= 1.0;
  wind += close;
  if (std::abs(wind) > 0.25)
    throw BranchUnwrapFailure("rotation_angle_phi: nonzero winding " +
                              std::to_string(wind));
  return g;
}

PhiGrid phi_on_grid_refining(const OperatorParams& p, long long& grid_size,
                             long long n_converge) {
  try {
    return phi_on_grid(p, grid_size, n_converge);
  } catch (const BranchUnwrapFailure&) {
    grid_size *= 2;
    return phi_on_grid(p, grid_size, n_converge);
  }
}

fourier::FourierSeries phi_series(const PhiGrid& g, long long grid_size) {
  std::vector<std::complex<double>> samples(g.phi.size());
  for (std::size_t j = 0; j < g.phi.size(); ++j) samples[j] = {g.phi[j], 0.0};
  long long K = std::min<long long>(256, grid_size / 2 - 1);
  return fourier::analyze_samples(std::move(samples), K);
}

}  // namespace

PhiSeries rotation_angle_phi(const OperatorParams& p, long long grid_size,
                             long long n_converge) {
  if (!is_pow2(grid_size) || grid_size < 8)
    throw std::invalid_argument("rotation_angle_phi: grid size must be a "
                                "power of two >= 8");
  PhiGrid g = phi_on_grid_refining(p, grid_size, n_converge);
  PhiSeries out;
  out.phi_hat = phi_series(g, grid_size);
  out.theta = out.phi_hat.get(0).real();
  out.residual = g.residual;
  out.instability = g.instability;
  out.grid_size = grid_size;
  return out;
}

CohomologicalSolution cohomological_solve(const fourier::FourierSeries& phi_hat,
                                          double alpha, long long K_solve) {
  long long K = phi_hat.order();
  if (K_solve > K)
    throw std::invalid_argument("cohomological_solve: K_solve exceeds input "
                                "order");
  CohomologicalSolution out;
  out.psi_hat = fourier::FourierSeries(K_solve);
  for (long long k = -K_solve; k <= K_solve; ++k) {
    if (k == 0) continue;  // mean is fixed to zero
    std::complex<double> divisor =
        std::polar(1.0, kTwoPi * static_cast<double>(k) * alpha) - 1.0;
    std::complex<double> c = phi_hat.get(k);
    if (std::abs(divisor) < 1e-14) {
      if (std::abs(c) > 1e-13)
        throw SmallDivisorOverflow("cohomological_solve: divisor vanished "
                                   "against coefficient at k = " +
                                   std::to_string(k));
      out.dropped_modes.push_back(k);
      continue;
    }
    out.psi_hat.at(k) = c / divisor;
  }

  // Residual against the full input series, so truncation to K_solve and
  // dropped modes both show up.
  long long grid = 1024;
  while (grid < 4 * (K + 1)) grid *= 2;
  std::complex<double> mean = phi_hat.get(0);
  std::vector<double> errs(static_cast<std::size_t>(grid));
  parallel_for(errs.size(), [&](std::size_t j) {
    double x = static_cast<double>(j) / static_cast<double>(grid);
    std::complex<double> lhs = out.psi_hat.evaluate(x + alpha) -
                               out.psi_hat.evaluate(x);
    std::complex<double> rhs = phi_hat.evaluate(x) - mean;
    errs[j] = std::abs(lhs - rhs);
  });
  out.residual = *std::max_element(errs.begin(), errs.end());
  return out;
}

DecayExponent decay_exponent_a(const fourier::FourierSeries& phi_hat,
                               double alpha, long long k_min) {
  long long K = phi_hat.order();
  if (k_min < 1) throw std::invalid_argument("decay_exponent_a: k_min < 1");
  if (k_min > K)
    throw std::invalid_argument("decay_exponent_a: k_min exceeds series "
                                "order");
  DecayExponent out;
  out.value = -std::numeric_limits<double>::infinity();
  for (long long k = -K; k <= K; ++k) {
    if (std::llabs(k) < k_min) continue;
    double divisor = std::abs(
        std::polar(1.0, kTwoPi * static_cast<double>(k) * alpha) - 1.0);
    double ratio = std::abs(phi_hat.get(k)) / divisor;
    double rate = std::log(ratio) / static_cast<double>(std::llabs(k));
    if (rate > out.value) {
      out.value = rate;
      out.k_at = k;
    }
  }
  return out;
}

ReducibilityReport reducibility_probe(const OperatorParams& p, long long K,
                                      long long n_converge) {
  long long grid_size = 1024;
  while (grid_size < 4 * (K + 1)) grid_size *= 2;
  PhiGrid g = phi_on_grid_refining(p, grid_size, n_converge);
  fourier::FourierSeries phi_hat = phi_series(g, grid_size);
  long long K_eff = std::min(K, phi_hat.order());
  CohomologicalSolution coh = cohomological_solve(phi_hat, p.frequency, K_eff);

  ReducibilityReport out;
  out.theta = phi_hat.get(0).real();
  out.K = K_eff;
  out.dropped_modes = coh.dropped_modes;
  out.a_truncated =
      decay_exponent_a(phi_hat, p.frequency, std::min<long long>(8, K_eff))
          .value;

  Mat2d target = rotation(out.theta);
  std::size_t n = g.phi.size();
  std::vector<double> errs(n);
  parallel_for(n, [&](std::size_t j) {
    double x = static_cast<double>(j) / static_cast<double>(n);
    double psi_x = coh.psi_hat.evaluate(x).real();
    double psi_xa = coh.psi_hat.evaluate(x + p.frequency).real();
    Mat2d B_x = rotation(-psi_x) * g.C_at[j];
    Mat2d B_xa = rotation(-psi_xa) * g.C_shift[j];
    Mat2d conj = B_xa * cocycle::transfer_matrix(p, x) * inverse(B_x);
    errs[j] = sup_entry_diff(conj, target);
  });
  out.residual = *std::max_element(errs.begin(), errs.end());
  return out;
}

}  // namespace amo::mfunction
