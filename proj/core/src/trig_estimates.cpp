#include "amo/trig_estimates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "amo/cocycle.hpp"
#include "amo/errors.hpp"
#include "amo/localization.hpp"
#include "amo/parallel.hpp"

namespace amo::trig {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLn2 = 0.6931471805599453094;

// Index (1-based) of the minimal |values|, lowest on ties; tie flag set when
// the minimum is attained more than once.
long long argmin_abs(const std::vector<double>& values, bool* tie) {
  long long k0 = 1;
  double best = std::abs(values[0]);
  *tie = false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    double a = std::abs(values[i]);
    if (a < best) {
      best = a;
      k0 = static_cast<long long>(i) + 1;
      *tie = false;
    } else if (a == best) {
      *tie = true;
    }
  }
  return k0;
}

double sum_log_excluding(const std::vector<double>& sines, long long k0) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sines.size(); ++i) {
    if (static_cast<long long>(i) + 1 == k0) continue;
    double a = std::abs(sines[i]);
    if (a < 1e-15)
      throw DegenerateNode("trigonometric sum: non-excluded sine at k = " +
                           std::to_string(i + 1) + " is " + std::to_string(a));
    sum += std::log(a);
  }
  return sum;
}

long long to_ll(const BigInt& v, const char* what) {
  if (v > BigInt(std::numeric_limits<long long>::max() / 4))
    throw std::invalid_argument(std::string(what) +
                                " does not fit the summation range");
  return static_cast<long long>(v);
}

// Deterministic maximization of a smooth f over [-1, 1]: best seed among the
// candidates, then golden-section refinement on the bracket around it.
double maximize_on_interval(const std::vector<double>& candidates,
                            double bracket,
                            const std::function<double(double)>& f,
                            double* arg_out) {
  double best_z = candidates[0];
  double best = f(best_z);
  for (double z : candidates) {
    double v = f(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  double lo = std::max(-1.0, best_z - bracket);
  double hi = std::min(1.0, best_z + bracket);
  const double inv_phi = 0.6180339887498948482;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int it = 0; it < 80; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = f(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = f(a);
    }
  }
  double z = 0.5 * (lo + hi);
  double v = f(z);
  if (best > v) {
    v = best;
    z = best_z;
  }
  *arg_out = z;
  return v;
}

std::vector<double> z_candidates(const std::vector<double>& cos_nodes) {
  std::vector<double> sorted = cos_nodes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cand;
  cand.reserve(sorted.size() + 514);
  cand.push_back(-1.0);
  cand.push_back(1.0);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    cand.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  for (int i = 0; i < 512; ++i)
    cand.push_back(-1.0 + 2.0 * static_cast<double>(i) / 511.0);
  return cand;
}

std::vector<double> cos_values(const std::vector<double>& thetas) {
  std::vector<double> c(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    c[i] = std::cos(kTwoPi * thetas[i]);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (std::abs(c[i] - c[j]) < 1e-13)
        throw CoincidentNodes("nodes " + std::to_string(i) + " and " +
                              std::to_string(j) +
                              " have coinciding cos values");
  return c;
}

}  // namespace

RationalSumReport log_sin_sum_rational(double x, long long p, long long q) {
  if (q < 1) throw std::invalid_argument("log_sin_sum_rational: q < 1");
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("log_sin_sum_rational: p, q not coprime");
  std::vector<double> sines(static_cast<std::size_t>(q));
  for (long long k = 1; k <= q; ++k)
    sines[static_cast<std::size_t>(k - 1)] = std::sin(
        kTwoPi * (x + static_cast<double>(k * p) / (2.0 * static_cast<double>(q))));
  RationalSumReport rep;
  rep.k0 = argmin_abs(sines, &rep.tie);
  rep.sum_excluding_min = sum_log_excluding(sines, rep.k0);
  rep.combined =
      rep.sum_excluding_min + static_cast<double>(q - 1) * kLn2;
  rep.lower = std::log(static_cast<double>(q)) + std::log(2.0 / 3.14159265358979323846);
  rep.upper = std::log(static_cast<double>(q));
  rep.bounds_pass = rep.combined > rep.lower && rep.combined <= rep.upper;
  return rep;
}

double rat0_deviation(long long p, long long q) {
  if (q < 1) throw std::invalid_argument("rat0_deviation: q < 1");
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("rat0_deviation: p, q not coprime");
  double sum = 0.0;
  for (long long k = 1; k < q; ++k)
    sum += std::log(std::abs(
        std::sin(3.14159265358979323846 * static_cast<double>(k * p) /
                 static_cast<double>(q))));
  double target = -static_cast<double>(q - 1) * kLn2 +
                  std::log(static_cast<double>(q));
  return std::abs(sum - target);
}

BigFloat rat0_deviation_hiprec(long long p, long long q, unsigned bits) {
  if (q < 1) throw std::invalid_argument("rat0_deviation_hiprec: q < 1");
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("rat0_deviation_hiprec: p, q not coprime");
  PrecisionGuard guard(bits);
  BigFloat sum = 0;
  for (long long k = 1; k < q; ++k) {
    // sin(pi k p / q) = sin(2 pi t) with t = k p / (2 q), reduced exactly.
    BigFloat t = BigFloat(k) * BigFloat(p) / (2 * BigFloat(q));
    sum += log(abs(bf_sin2pi(t)));
  }
  BigFloat target = -BigFloat(q - 1) * log(BigFloat(2)) + log(BigFloat(q));
  return abs(sum - target);
}

IrrationalSumReport log_sin_sum_irrational(
    double x, const arith::ContinuedFractionExpansion& cf, std::size_t n) {
  if (n >= cf.order())
    throw std::invalid_argument("log_sin_sum_irrational: convergent index "
                                "out of range");
  long long qn = to_ll(cf.q(n), "q_n");
  double alpha = static_cast<double>(cf.value);
  std::vector<double> sines(static_cast<std::size_t>(qn));
  for (long long k = 1; k <= qn; ++k)
    sines[static_cast<std::size_t>(k - 1)] =
        std::sin(kTwoPi * (x + static_cast<double>(k) * alpha / 2.0));
  IrrationalSumReport rep;
  rep.q_n = qn;
  bool tie = false;
  rep.k0 = argmin_abs(sines, &tie);
  rep.sum_excluding_min = sum_log_excluding(sines, rep.k0);
  rep.deviation = std::abs(rep.sum_excluding_min +
                           static_cast<double>(qn - 1) * kLn2);
  rep.empirical_C =
      qn > 1 ? rep.deviation / std::log(static_cast<double>(qn)) : 0.0;
  return rep;
}

ShiftedSumReport shifted_sum_check(double x,
                                   const arith::ContinuedFractionExpansion& cf,
                                   std::size_t n, std::size_t r, long long ell,
                                   const std::vector<long long>& ell_ks,
                                   double C) {
  if (r < n) throw std::invalid_argument("shifted_sum_check: r < n");
  if (r + 1 >= cf.order())
    throw std::invalid_argument("shifted_sum_check: q_{r+1} not available");
  if (r >= cf.delta.size() || n >= cf.delta.size())
    throw std::invalid_argument("shifted_sum_check: delta depth too shallow");
  if (ell < 1) throw std::invalid_argument("shifted_sum_check: ell < 1");

  long long qn = to_ll(cf.q(n), "q_n");
  long long qr = to_ll(cf.q(r), "q_r");
  if (static_cast<long long>(ell_ks.size()) != qn)
    throw std::invalid_argument("shifted_sum_check: need one shift per term");
  for (long long lk : ell_ks)
    if (std::llabs(lk) > ell - 1)
      throw std::invalid_argument("shifted_sum_check: |ell_k| > ell - 1");
  if (10 * BigInt(ell) * cf.q(n) >= cf.q(r + 1))
    throw PreconditionViolated("shifted_sum_check: 10 ell q_n >= q_{r+1}");

  double alpha = static_cast<double>(cf.value);
  std::vector<double> sines(static_cast<std::size_t>(qn));
  for (long long k = 1; k <= qn; ++k) {
    double shift =
        static_cast<double>(k) +
        static_cast<double>(ell_ks[static_cast<std::size_t>(k - 1)]) *
            static_cast<double>(qr);
    sines[static_cast<std::size_t>(k - 1)] =
        std::sin(kTwoPi * (x + shift * alpha / 2.0));
  }
  ShiftedSumReport rep;
  rep.q_n = qn;
  bool tie = false;
  rep.k0 = argmin_abs(sines, &tie);
  double sum = sum_log_excluding(sines, rep.k0);
  rep.deviation = std::abs(sum + static_cast<double>(qn - 1) * kLn2);
  double ln_q = std::log(static_cast<double>(qn));
  double dn = static_cast<double>(cf.delta[n]);
  double dr = static_cast<double>(cf.delta[r]);
  rep.bound = ln_q + C * (dn + static_cast<double>(ell - 1) * dr) *
                         static_cast<double>(qn) * ln_q;
  rep.pass = rep.deviation <= rep.bound;
  return rep;
}

UniformitySample uniformity_measure(const std::vector<double>& thetas) {
  if (thetas.size() < 2)
    throw std::invalid_argument("uniformity_measure: need at least 2 nodes");
  std::vector<double> c = cos_values(thetas);
  std::size_t m = c.size();
  long long k = static_cast<long long>(m) - 1;
  std::vector<double> cand = z_candidates(c);

  std::vector<double> best_val(m), best_arg(m);
  parallel_for(m, [&](std::size_t j) {
    auto f = [&](double z) {
      double s = 0.0;
      for (std::size_t l = 0; l < m; ++l) {
        if (l == j) continue;
        s += std::log(std::abs(z - c[l]));
      }
      return s;
    };
    double denom = 0.0;
    for (std::size_t l = 0; l < m; ++l)
      if (l != j) denom += std::log(std::abs(c[j] - c[l]));
    double arg = 0.0;
    best_val[j] = maximize_on_interval(cand, 2.0 / 511.0, f, &arg) - denom;
    best_arg[j] = arg;
  });

  UniformitySample s;
  s.thetas = thetas;
  std::size_t jm = 0;
  for (std::size_t j = 1; j < m; ++j)
    if (best_val[j] > best_val[jm]) jm = j;
  s.epsilon_measured = best_val[jm] / static_cast<double>(k);
  s.attaining_j = static_cast<long long>(jm);
  s.attaining_z = best_arg[jm];
  return s;
}

BlowupReport lagrange_blowup_check(const OperatorParams& params, long long k,
                                   const std::vector<double>& thetas,
                                   double eps, double eps1) {
  if (k < 1) throw std::invalid_argument("lagrange_blowup_check: k < 1");
  if (static_cast<long long>(thetas.size()) != k + 1)
    throw std::invalid_argument("lagrange_blowup_check: need k + 1 nodes");
  double L = std::log(std::abs(params.coupling));

  BlowupReport rep;
  rep.log_target = static_cast<double>(k) * L;
  bool all_members = true;
  for (double th : thetas) {
    auto mem = localization::A_kr_membership(params, k, L - eps, th);
    rep.node_log_margin.push_back(mem.log_margin);
    all_members = all_members && mem.member;
  }
  rep.uniformity = uniformity_measure(thetas).epsilon_measured;
  if (!all_members) {
    rep.verdict = BlowupVerdict::NotApplicable;
    return rep;
  }

  // ln of the triangle-inequality envelope of the Lagrange reconstruction,
  // maximized over z. The envelope dominates |Q_k| pointwise, so it must
  // reach the Herman floor e^{kL}; if the node set were eps1-uniform the
  // envelope would be capped below that floor, which is the contradiction.
  std::vector<double> c = cos_values(thetas);
  std::size_t m = c.size();
  std::vector<double> g(m);
  for (std::size_t j = 0; j < m; ++j) {
    OperatorParams q = params;
    q.phase = thetas[j] - 0.5 * static_cast<double>(k - 1) * params.frequency;
    double log_Q = cocycle::determinant_P_log(q, k).log_abs;
    double denom = 0.0;
    for (std::size_t l = 0; l < m; ++l)
      if (l != j) denom += std::log(std::abs(c[j] - c[l]));
    g[j] = log_Q - denom;
  }
  auto envelope = [&](double z) {
    double hi = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(m);
    for (std::size_t j = 0; j < m; ++j) {
      double s = g[j];
      for (std::size_t l = 0; l < m; ++l) {
        if (l == j) continue;
        s += std::log(std::abs(z - c[l]));
      }
      terms[j] = s;
      hi = std::max(hi, s);
    }
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - hi);
    return hi + std::log(acc);
  };
  std::vector<double> cand = z_candidates(c);
  double arg = 0.0;
  rep.log_interp_max = maximize_on_interval(cand, 2.0 / 511.0, envelope, &arg);
  rep.verdict = rep.uniformity > eps1 ? BlowupVerdict::Contradiction
                                      : BlowupVerdict::NoContradiction;
  return rep;
}

}  // namespace amo::trig
