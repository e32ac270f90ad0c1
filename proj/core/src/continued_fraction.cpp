#include "amo/continued_fraction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "amo/errors.hpp"

namespace amo::arith {

namespace {

// Appends a_n and extends the convergent recurrence.
void push_quotient(ContinuedFractionExpansion& cf, const BigInt& a) {
  const std::size_t n = cf.convergents.size();
  BigInt p, q;
  if (n == 0) {
    p = a;
    q = 1;
  } else if (n == 1) {
    p = a * cf.convergents[0].p + 1;
    q = a * cf.convergents[0].q;
  } else {
    p = a * cf.convergents[n - 1].p + cf.convergents[n - 2].p;
    q = a * cf.convergents[n - 1].q + cf.convergents[n - 2].q;
  }
  cf.partial_quotients.push_back(a);
  cf.convergents.push_back({std::move(p), std::move(q)});
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// floor((P + sqrt(D)) / Q) for non-square D > 0, Q != 0, exact.
BigInt floor_surd(const BigInt& P, const BigInt& D, const BigInt& Q) {
  const BigInt s = boost::multiprecision::sqrt(D);  // floor(sqrt(D))
  if (Q > 0) return floor_div(P + s, Q);
  // (P + sqrt(D)) / Q = (-P - sqrt(D)) / (-Q) with -sqrt(D) in (-s-1, -s).
  return floor_div(-P - s - 1, -Q);
}

void compute_deltas_from_value(ContinuedFractionExpansion& cf,
                               std::size_t count) {
  cf.delta.clear();
  cf.delta.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    BigFloat d = static_cast<BigFloat>(cf.convergents[n].q) * cf.value -
                 static_cast<BigFloat>(cf.convergents[n].p);
    cf.delta.push_back(abs(d));
  }
}

nlohmann::json int_to_json(const BigInt& v) {
  static const BigInt kMax = std::numeric_limits<long long>::max();
  static const BigInt kMin = std::numeric_limits<long long>::min();
  if (v >= kMin && v <= kMax) return v.convert_to<long long>();
  return v.str();
}

}  // namespace

std::string ContinuedFractionExpansion::to_json() const {
  nlohmann::json j;
  j["partial_quotients"] = nlohmann::json::array();
  for (const auto& a : partial_quotients)
    j["partial_quotients"].push_back(int_to_json(a));
  j["convergents"] = nlohmann::json::array();
  for (const auto& c : convergents)
    j["convergents"].push_back({int_to_json(c.p), int_to_json(c.q)});
  j["precision_bits"] = precision_bits;
  return j.dump();
}

ContinuedFractionExpansion expand_rational(const BigInt& num, const BigInt& den,
                                           std::size_t max_terms) {
  if (den == 0) throw std::invalid_argument("expand_rational: zero denominator");
  if (max_terms == 0) throw std::invalid_argument("expand_rational: max_terms == 0");

  ContinuedFractionExpansion cf;
  cf.precision_bits = 256;
  PrecisionGuard guard(cf.precision_bits);

  BigInt a = den > 0 ? num : -num;
  BigInt b = den > 0 ? den : -den;
  while (cf.partial_quotients.size() < max_terms) {
    BigInt quot = floor_div(a, b);
    push_quotient(cf, quot);
    BigInt rem = a - quot * b;
    if (rem == 0) {
      cf.terminated = true;
      break;
    }
    a = b;
    b = rem;
  }
  cf.certified = true;
  cf.value = static_cast<BigFloat>(num) / static_cast<BigFloat>(den);
  compute_deltas_from_value(cf, cf.order());
  if (cf.terminated && !cf.delta.empty()) cf.delta.back() = 0;
  return cf;
}

QuadraticSurd golden_mean() { return {-1, 1, 5, 2}; }

ContinuedFractionExpansion expand_surd(const QuadraticSurd& s,
                                       std::size_t max_terms,
                                       unsigned precision_bits) {
  if (s.d <= 0) throw std::invalid_argument("expand_surd: need d > 0");
  if (s.q == 0 || s.r == 0)
    throw std::invalid_argument("expand_surd: need q != 0 and r != 0");
  if (max_terms == 0) throw std::invalid_argument("expand_surd: max_terms == 0");

  // Normalize to (P + sqrt(D)) / Q with Q | (D - P^2).
  BigInt D = s.q * s.q * s.d;
  BigInt P = s.q > 0 ? s.p : -s.p;
  BigInt Q = s.q > 0 ? s.r : -s.r;
  {
    const BigInt root = boost::multiprecision::sqrt(D);
    if (root * root == D)
      throw std::invalid_argument(
          "expand_surd: perfect-square radicand; use expand_rational");
  }
  if ((D - P * P) % Q != 0) {
    BigInt aq = abs(Q);
    P *= aq;
    D *= aq * aq;
    Q *= aq;
  }

  ContinuedFractionExpansion cf;
  cf.precision_bits = precision_bits;
  PrecisionGuard guard(precision_bits + 64);

  for (std::size_t n = 0; n < max_terms; ++n) {
    BigInt a = floor_surd(P, D, Q);
    push_quotient(cf, a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  cf.certified = true;
  cf.value = (static_cast<BigFloat>(s.p) +
              static_cast<BigFloat>(s.q) * sqrt(static_cast<BigFloat>(s.d))) /
             static_cast<BigFloat>(s.r);
  compute_deltas_from_value(cf, cf.order());
  return cf;
}

ContinuedFractionExpansion expand_golden(std::size_t max_terms,
                                         unsigned precision_bits) {
  return expand_surd(golden_mean(), max_terms, precision_bits);
}

namespace {

ContinuedFractionExpansion expand_ball(const BigFloat& x, const BigFloat& radius,
                                       std::size_t max_terms,
                                       unsigned precision_bits) {
  ContinuedFractionExpansion cf;
  cf.precision_bits = precision_bits;
  const unsigned work_bits = precision_bits + 64;
  PrecisionGuard guard(work_bits);

  BigFloat lo = x - radius;
  BigFloat hi = x + radius;
  const BigFloat slop = ldexp(BigFloat(1), -static_cast<int>(work_bits - 8));

  while (cf.partial_quotients.size() < max_terms) {
    BigFloat flo = floor(lo);
    BigFloat fhi = floor(hi);
    if (flo != fhi) {
      cf.certified = false;  // quotient no longer determined by the ball
      break;
    }
    push_quotient(cf, static_cast<BigInt>(flo));
    BigFloat r_lo = lo - flo;
    BigFloat r_hi = hi - flo;
    if (r_lo <= 0) {
      // The ball touches an integer: cannot certify an inversion.
      cf.certified = false;
      break;
    }
    BigFloat new_lo = 1 / r_hi;
    BigFloat new_hi = 1 / r_lo;
    BigFloat pad = slop * (abs(new_hi) + 1);
    lo = new_lo - pad;
    hi = new_hi + pad;
  }
  cf.value = x;
  compute_deltas_from_value(cf, cf.order());
  return cf;
}

}  // namespace

ContinuedFractionExpansion expand_real(const BigFloat& x, std::size_t max_terms,
                                       unsigned precision_bits) {
  if (max_terms == 0) throw std::invalid_argument("expand_real: max_terms == 0");
  PrecisionGuard guard(precision_bits + 64);
  // One ulp at the input's own precision.
  const auto digits10 = x.precision();
  const int input_bits = static_cast<int>(digits10 * 3.3219280948873623) - 1;
  BigFloat mag = abs(x);
  if (mag < 1) mag = 1;
  BigFloat radius = ldexp(mag, -std::max(8, input_bits));
  return expand_ball(BigFloat(x), radius, max_terms, precision_bits);
}

ContinuedFractionExpansion expand_real(double x, std::size_t max_terms,
                                       unsigned precision_bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("expand_real: non-finite input");
  PrecisionGuard guard(precision_bits + 64);
  double up = std::nextafter(x, std::numeric_limits<double>::infinity());
  BigFloat radius = BigFloat((up - x) * 0.5);
  if (radius <= 0) radius = ldexp(BigFloat(1), -1074);
  return expand_ball(BigFloat(x), radius, max_terms, precision_bits);
}

ContinuedFractionExpansion from_partial_quotients(
    const std::vector<BigInt>& quotients, unsigned precision_bits) {
  if (quotients.empty())
    throw std::invalid_argument("from_partial_quotients: empty list");
  for (std::size_t n = 1; n < quotients.size(); ++n)
    if (quotients[n] < 1)
      throw std::invalid_argument(
          "from_partial_quotients: a_n must be >= 1 for n >= 1");

  ContinuedFractionExpansion cf;
  cf.precision_bits = precision_bits;
  PrecisionGuard guard(precision_bits + 64);
  for (const auto& a : quotients) push_quotient(cf, a);
  const auto& last = cf.convergents.back();
  cf.value = static_cast<BigFloat>(last.p) / static_cast<BigFloat>(last.q);
  // The two deepest deltas depend on the unknown tail of the expansion, so
  // they are omitted for prefix objects.
  compute_deltas_from_value(cf, cf.order() >= 2 ? cf.order() - 2 : 0);
  return cf;
}

BetaEstimate beta_estimate(const ContinuedFractionExpansion& cf) {
  BetaEstimate est;
  if (cf.terminated || cf.order() < 2) {
    est.defined = false;
    return est;
  }
  PrecisionGuard guard(128);
  const std::size_t count = cf.order() - 1;
  est.ratios.reserve(count);
  for (std::size_t n = 0; n + 1 < cf.order(); ++n) {
    BigFloat lq = log(static_cast<BigFloat>(cf.q(n + 1)));
    est.ratios.push_back(
        (lq / static_cast<BigFloat>(cf.q(n))).convert_to<double>());
  }
  est.tail_sup.assign(est.ratios.size(), 0.0);
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t i = est.ratios.size(); i-- > 0;) {
    running = std::max(running, est.ratios[i]);
    est.tail_sup[i] = running;
  }
  est.value = est.tail_sup[est.tail_sup.size() / 2];
  est.defined = true;
  return est;
}

namespace {

// x <= b_n exactly: x <= q_n^{8/9} is x^9 <= q_n^8 over the integers, and
// x <= q_{n-1}/20 is 20 x <= q_{n-1}. Doubles only ever report b_n.
bool below_scale_bound(const BigInt& x, const ContinuedFractionExpansion& cf,
                       std::size_t n) {
  if (pow(x, 9) <= pow(cf.q(n), 8)) return true;
  return n >= 1 && 20 * x <= cf.q(n - 1);
}

double scale_bound(const ContinuedFractionExpansion& cf, std::size_t n) {
  double b = std::pow(cf.q(n).convert_to<double>(), 8.0 / 9.0);
  if (n >= 1) {
    double prev = cf.q(n - 1).convert_to<double>() / 20.0;
    if (prev > b) b = prev;
  }
  return b;
}

ResonanceReport resonance_at(const BigInt& k,
                             const ContinuedFractionExpansion& cf,
                             std::size_t n, double b_next) {
  ResonanceReport rep;
  rep.scale_index = n;
  rep.q_scale = cf.q(n);
  rep.b_n = scale_bound(cf, n);
  rep.b_next = b_next;

  const BigInt& qn = rep.q_scale;
  BigInt l = k / qn;
  if (l < 1) l = 1;
  BigInt d_lo = abs(k - l * qn);
  BigInt d_hi = abs(k - (l + 1) * qn);
  if (d_hi < d_lo) {
    rep.nearest_multiple_distance = d_hi;
    rep.attaining_l = l + 1;
  } else {
    rep.nearest_multiple_distance = d_lo;
    rep.attaining_l = l;
  }
  rep.resonant = below_scale_bound(rep.nearest_multiple_distance, cf, n);
  return rep;
}

}  // namespace

ResonanceReport classify_resonance(const BigInt& k,
                                   const ContinuedFractionExpansion& cf) {
  if (k < 1) throw std::invalid_argument("classify_resonance: need k >= 1");
  if (cf.order() < 2)
    throw ScaleOutOfRange("classify_resonance: expansion too short");
  if (below_scale_bound(k, cf, 0))
    throw ScaleOutOfRange("classify_resonance: k <= b_0");
  for (std::size_t n = 0; n + 1 < cf.order(); ++n) {
    if (!below_scale_bound(k, cf, n) && below_scale_bound(k, cf, n + 1))
      return resonance_at(k, cf, n, scale_bound(cf, n + 1));
  }
  throw ScaleOutOfRange(
      "classify_resonance: k beyond the deepest computed scale; expand "
      "further");
}

ResonanceReport classify_resonance_at_scale(const BigInt& k,
                                            const ContinuedFractionExpansion& cf,
                                            std::size_t scale_index) {
  if (k < 1) throw std::invalid_argument("classify_resonance: need k >= 1");
  if (scale_index >= cf.order())
    throw ScaleOutOfRange("classify_resonance_at_scale: no such scale");
  double b_next = scale_index + 1 < cf.order()
                      ? scale_bound(cf, scale_index + 1)
                      : std::numeric_limits<double>::infinity();
  return resonance_at(k, cf, scale_index, b_next);
}

ThetaScanReport theta_membership_scan(const BigFloat& theta,
                                      const BigFloat& alpha, long long k_max,
                                      long long s_max, double tol) {
  if (k_max < 1) throw std::invalid_argument("theta_membership_scan: k_max < 1");
  if (s_max < 0) s_max = k_max;
  PrecisionGuard guard(256);
  ThetaScanReport rep;

  const BigFloat half_alpha = bf_frac(alpha / 2);
  const BigFloat theta_f = bf_frac(theta);

  BigFloat r = theta_f;
  for (long long k = 1; k <= k_max; ++k) {
    r = bf_frac(r + half_alpha);
    double v = std::abs(std::sin(2.0 * M_PI * r.convert_to<double>()));
    double thr = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
    if (v < thr) rep.witnesses.push_back({k, v, thr});
  }

  auto scan_branch = [&](const BigFloat& step, bool& flag, long long& s_out,
                         double& dist_out) {
    BigFloat u = 0;
    double best = std::numeric_limits<double>::infinity();
    long long best_s = 0;
    for (long long s = 0; s <= s_max; ++s) {
      double d1 = torus_norm(theta_f - u).convert_to<double>();
      double d2 = torus_norm(theta_f + u).convert_to<double>();
      double d = std::min(d1, d2);
      if (d < best) {
        best = d;
        best_s = s;
        if (best < tol) break;  // smallest |s| witness
      }
      u = bf_frac(u + step);
    }
    flag = best < tol;
    s_out = best_s;
    dist_out = best;
  };

  scan_branch(half_alpha, rep.branch_half_alpha, rep.s_half_alpha,
              rep.dist_half_alpha);
  scan_branch(bf_frac(bf_pi() * alpha / 2), rep.branch_pi_half_alpha,
              rep.s_pi_half_alpha, rep.dist_pi_half_alpha);
  return rep;
}

}  // namespace amo::arith
