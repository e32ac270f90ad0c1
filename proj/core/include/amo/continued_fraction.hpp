#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "amo/bigfloat.hpp"

namespace amo::arith {

struct Convergent {
  BigInt p;
  BigInt q;
};

// Continued fraction expansion x = [a_0; a_1, a_2, ...]. a_0 = floor(x) may
// be any integer; a_n >= 1 for n >= 1. Convergents p_n/q_n follow the usual
// recurrence p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2} with
// exact integers, so q_0 = 1 <= q_1 < q_2 < ...
//
// delta[n] = |q_n x - p_n|. For expansions built from a finite list of
// partial quotients the two deepest indices are omitted (they depend on the
// unknown tail); for exact rational input the final delta is exactly zero.
struct ContinuedFractionExpansion {
  std::vector<BigInt> partial_quotients;
  std::vector<Convergent> convergents;
  std::vector<BigFloat> delta;
  BigFloat value;               // the expanded number at working precision
  unsigned precision_bits = 256;
  bool terminated = false;      // exact rational: expansion is complete
  bool certified = true;        // false once interval certification failed;
                                // the stored prefix is still certified

  std::size_t order() const { return convergents.size(); }
  const BigInt& p(std::size_t n) const { return convergents[n].p; }
  const BigInt& q(std::size_t n) const { return convergents[n].q; }

  // {"partial_quotients": [...], "convergents": [[p, q], ...],
  //  "precision_bits": N}; integers that do not fit in 64 bits are emitted
  // as decimal strings.
  std::string to_json() const;
};

// Exact expansion of num/den (den != 0) by Euclid's algorithm. Terminates;
// the last partial quotient is >= 2 unless the expansion has a single term.
ContinuedFractionExpansion expand_rational(const BigInt& num, const BigInt& den,
                                           std::size_t max_terms = 64);

// (p + q sqrt(d)) / r with d > 0 not a perfect square, q != 0, r != 0.
struct QuadraticSurd {
  BigInt p;
  BigInt q;
  BigInt d;
  BigInt r;
};

// Exact expansion by the integer recurrence on (P + sqrt(D))/Q; every
// partial quotient is certified. precision_bits only affects delta/value.
ContinuedFractionExpansion expand_surd(const QuadraticSurd& s,
                                       std::size_t max_terms,
                                       unsigned precision_bits = 256);

// Interval-certified expansion of a numeric constant. The input is treated
// as a ball of radius one ulp at its own precision; expansion stops (with
// certified = false) as soon as a partial quotient is no longer determined
// by the ball. Pass a constant computed at >= precision_bits for full depth.
ContinuedFractionExpansion expand_real(const BigFloat& x,
                                       std::size_t max_terms,
                                       unsigned precision_bits = 256);
ContinuedFractionExpansion expand_real(double x, std::size_t max_terms,
                                       unsigned precision_bits = 256);

// Expansion with the given partial quotients (a_0 free, a_n >= 1 for n >= 1),
// treated as the prefix of an infinite expansion: delta omits its final
// index and terminated stays false.
ContinuedFractionExpansion from_partial_quotients(
    const std::vector<BigInt>& quotients, unsigned precision_bits = 256);

// (sqrt(5) - 1) / 2 = [0; 1, 1, 1, ...].
QuadraticSurd golden_mean();
ContinuedFractionExpansion expand_golden(std::size_t max_terms,
                                         unsigned precision_bits = 256);

// Finite-depth proxy for beta(alpha) = limsup ln(q_{n+1})/q_n.
struct BetaEstimate {
  std::vector<double> ratios;    // ratios[n] = ln(q_{n+1}) / q_n
  std::vector<double> tail_sup;  // tail_sup[n] = max_{m >= n} ratios[m]
  double value = 0.0;            // tail sup over the deeper half of the list
  bool defined = false;          // false for terminated (rational) input
};
BetaEstimate beta_estimate(const ContinuedFractionExpansion& cf);

// Scale selection b_n = max(q_n^{8/9}, q_{n-1}/20): the unique n with
// b_n < k <= b_{n+1}. k is resonant iff |k - l q_n| <= b_n for some l >= 1
// (ties resonant); the l = 0 case cannot fire since k > b_n.
struct ResonanceReport {
  std::size_t scale_index = 0;  // n
  BigInt q_scale;               // q_n
  double b_n = 0.0;
  double b_next = 0.0;
  BigInt nearest_multiple_distance;  // min over l >= 1 of |k - l q_n|
  BigInt attaining_l;
  bool resonant = false;
};

// Throws ScaleOutOfRange if k <= b_0 or k exceeds every computed bracket.
ResonanceReport classify_resonance(const BigInt& k,
                                   const ContinuedFractionExpansion& cf);

// Same dichotomy at a caller-pinned scale index (diagnostic use).
ResonanceReport classify_resonance_at_scale(const BigInt& k,
                                            const ContinuedFractionExpansion& cf,
                                            std::size_t scale_index);

// Scan for witnesses of |sin 2 pi (theta + (k/2) alpha)| < 1/k^2, plus two
// readings of the exceptional set's second branch: theta = (s/2) alpha mod 1
// and the literal theta = s pi alpha / 2 mod 1, both within tol.
struct ThetaWitness {
  long long k = 0;
  double value = 0.0;      // |sin 2 pi (theta + (k/2) alpha)|
  double threshold = 0.0;  // 1/k^2
};

struct ThetaScanReport {
  std::vector<ThetaWitness> witnesses;
  bool branch_half_alpha = false;
  long long s_half_alpha = 0;
  double dist_half_alpha = 0.0;
  bool branch_pi_half_alpha = false;
  long long s_pi_half_alpha = 0;
  double dist_pi_half_alpha = 0.0;
};

ThetaScanReport theta_membership_scan(const BigFloat& theta,
                                      const BigFloat& alpha, long long k_max,
                                      long long s_max = -1,
                                      double tol = 1e-12);

}  // namespace amo::arith
