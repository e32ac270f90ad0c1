#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <vector>

#include "amo/bigfloat.hpp"
#include "amo/continued_fraction.hpp"
#include "amo/errors.hpp"

using namespace amo;
using namespace amo::arith;

namespace {

std::vector<long long> quotients_ll(const ContinuedFractionExpansion& cf,
                                    std::size_t n) {
  std::vector<long long> out;
  for (std::size_t i = 0; i < n && i < cf.partial_quotients.size(); ++i)
    out.push_back(cf.partial_quotients[i].convert_to<long long>());
  return out;
}

}  // namespace

TEST_CASE("rational expansion terminates with exact tail") {
  auto cf = expand_rational(2, 7);
  CHECK(cf.terminated);
  CHECK(quotients_ll(cf, 8) == std::vector<long long>{0, 3, 2});
  CHECK(cf.p(cf.order() - 1) == 2);
  CHECK(cf.q(cf.order() - 1) == 7);
  CHECK(cf.delta.back() == 0);

  auto neg = expand_rational(-22, 7);
  CHECK(neg.terminated);
  CHECK(quotients_ll(neg, 8) == std::vector<long long>{-4, 1, 6});
  CHECK(neg.p(neg.order() - 1) == -22);
  CHECK(neg.q(neg.order() - 1) == 7);
}

TEST_CASE("pi expansion matches the classical quotient list") {
  PrecisionGuard guard(320);
  BigFloat pi = bf_pi();
  auto cf = expand_real(pi, 20, 320);
  CHECK(cf.certified);
  CHECK(quotients_ll(cf, 20) ==
        std::vector<long long>{3, 7, 15, 1, 292, 1, 1, 1, 2, 1,
                               3, 1, 14, 2, 1, 1, 2, 2, 2, 2});
  CHECK(cf.p(1) == 22);
  CHECK(cf.q(1) == 7);
  CHECK(cf.p(3) == 355);
  CHECK(cf.q(3) == 113);
}

TEST_CASE("double input is treated as a one-ulp ball") {
  // 0.5 +- ulp straddles the 1/2 boundary: nothing after a_0 is certified.
  auto half = expand_real(0.5, 10);
  CHECK_FALSE(half.certified);
  CHECK(quotients_ll(half, 4) == std::vector<long long>{0});

  // fl(pi) carries ~16 correct digits; the early quotients survive.
  auto cf = expand_real(M_PI, 12);
  auto got = quotients_ll(cf, 8);
  std::vector<long long> want{3, 7, 15, 1, 292, 1, 1, 1};
  REQUIRE(got.size() >= 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(got[i] == want[i]);
}

TEST_CASE("golden mean expansion is all ones with Fibonacci denominators") {
  auto cf = expand_golden(25);
  CHECK(cf.partial_quotients[0] == 0);
  for (std::size_t i = 1; i < cf.partial_quotients.size(); ++i)
    CHECK(cf.partial_quotients[i] == 1);
  long long fib[] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233};
  for (std::size_t n = 0; n < 13; ++n) CHECK(cf.q(n) == fib[n]);
  CHECK(cf.p(10) == 55);  // p_n = q_{n-1} for the golden mean
}

TEST_CASE("surd expansions are exact") {
  auto rt2 = expand_surd(QuadraticSurd{0, 1, 2, 1}, 12);
  CHECK(rt2.partial_quotients[0] == 1);
  for (std::size_t i = 1; i < rt2.partial_quotients.size(); ++i)
    CHECK(rt2.partial_quotients[i] == 2);
  CHECK(rt2.p(3) == 17);
  CHECK(rt2.q(3) == 12);

  // (1 - sqrt 5) / (-2) is the golden mean written with negative q and r.
  auto g = expand_surd(QuadraticSurd{1, -1, 5, -2}, 10);
  CHECK(g.partial_quotients[0] == 0);
  for (std::size_t i = 1; i < g.partial_quotients.size(); ++i)
    CHECK(g.partial_quotients[i] == 1);
}

TEST_CASE("delta obeys the two-sided convergent bounds") {
  PrecisionGuard guard(256);
  auto golden = expand_golden(22);
  auto pi = expand_real(bf_pi(), 16, 256);
  for (const auto* cf : {&golden, &pi}) {
    REQUIRE(cf->delta.size() >= 10);
    for (std::size_t n = 0; n + 1 < cf->delta.size(); ++n) {
      BigFloat lo = BigFloat(1) / BigFloat(cf->q(n + 1) + cf->q(n));
      BigFloat hi = BigFloat(1) / BigFloat(cf->q(n + 1));
      CHECK(cf->delta[n] > lo);
      CHECK(cf->delta[n] < hi);
    }
  }
}

TEST_CASE("convergents are best approximations below the next denominator") {
  PrecisionGuard guard(256);
  auto cf = expand_golden(24);
  // q_6 = 13, q_7 = 21: no k < 21 beats delta_6, and k = 13 attains it.
  BigFloat d6 = cf.delta[6];
  for (long long k = 1; k < 21; ++k) {
    BigFloat dist = torus_norm(k * cf.value);
    if (k == 13)
      CHECK(abs(dist - d6) < 1e-40);
    else
      CHECK(dist > d6);
  }
}

TEST_CASE("prefix expansions reconstruct their value") {
  auto cf = from_partial_quotients({3, 7, 16});
  CHECK(cf.order() == 3);
  CHECK(cf.p(2) == 355);
  CHECK(cf.q(2) == 113);
  CHECK_FALSE(cf.terminated);
  double v = cf.value.convert_to<double>();
  CHECK(v == doctest::Approx(355.0 / 113.0).epsilon(1e-15));
  // two deepest deltas depend on the unknown tail and are omitted
  CHECK(cf.delta.size() + 2 == cf.order());
}

TEST_CASE("beta estimate separates golden from a Liouville-type tail") {
  auto golden = expand_golden(30);
  auto bg = beta_estimate(golden);
  CHECK(bg.defined);
  CHECK(bg.value < 0.02);

  // a_{n+1} = 2^{q_n} while q_n <= 4096 gives ln q_{n+1} ~ q_n ln 2.
  std::vector<BigInt> quot{0};
  BigInt q_prev = 0, q_cur = 1;
  while (q_cur <= 4096) {
    BigInt a = pow(BigInt(2), q_cur.convert_to<unsigned>());
    quot.push_back(a);
    BigInt q_next = a * q_cur + q_prev;
    q_prev = q_cur;
    q_cur = q_next;
  }
  auto liou = beta_estimate(from_partial_quotients(quot, 512));
  CHECK(liou.defined);
  CHECK(liou.value >= 0.8 * 0.6931471805599453);

  auto rat = beta_estimate(expand_rational(22, 7));
  CHECK_FALSE(rat.defined);
}

TEST_CASE("resonance classification at the bracketed and pinned scales") {
  auto cf = expand_golden(25);

  auto rep = classify_resonance(180, cf);
  CHECK(rep.q_scale == 233);  // b_n = 233^{8/9} ~ 127.2 < 180 <= 195.0
  CHECK(rep.resonant);
  CHECK(rep.attaining_l == 1);
  CHECK(rep.nearest_multiple_distance == 53);

  // pinned at q_n = 89 the classical window |180 - 2*89| = 2 <= 89^{8/9}
  auto pinned = classify_resonance_at_scale(180, cf, 10);
  CHECK(pinned.q_scale == 89);
  CHECK(pinned.resonant);
  CHECK(pinned.attaining_l == 2);
  CHECK(pinned.nearest_multiple_distance == 2);

  CHECK_THROWS_AS(classify_resonance(1, cf), ScaleOutOfRange);
}

TEST_CASE("resonant and nonresonant integers partition a large-quotient scale") {
  // q: 1, 1000, 1000001; b_1 = 1000^{8/9} ~ 464.16
  auto cf = from_partial_quotients({0, 1000, 1000});
  auto far = classify_resonance(1465, cf);
  CHECK(far.q_scale == 1000);
  CHECK_FALSE(far.resonant);
  CHECK(far.nearest_multiple_distance == 465);

  auto near = classify_resonance(1464, cf);
  CHECK(near.q_scale == 1000);
  CHECK(near.resonant);
  CHECK(near.attaining_l == 1);
}

TEST_CASE("resonance dichotomy is exhaustive on a sample range") {
  auto cf = expand_golden(25);
  for (long long k = 100; k <= 400; k += 7) {
    auto rep = classify_resonance(k, cf);
    // the report is internally consistent either way
    CHECK(rep.b_n < static_cast<double>(k));
    CHECK(static_cast<double>(k) <= rep.b_next);
    bool within = rep.nearest_multiple_distance.convert_to<double>() <= rep.b_n;
    CHECK(rep.resonant == within);
  }
}

TEST_CASE("theta scan finds engineered witnesses and branch hits") {
  PrecisionGuard guard(256);
  BigFloat alpha = BigFloat(100) / 201;

  // theta = 1/2 - 2 alpha + 1e-9: at k = 4 the argument is 1/2 + 1e-9.
  BigFloat theta = bf_frac(BigFloat(1) / 2 - 2 * alpha + BigFloat("1e-9"));
  auto rep = theta_membership_scan(theta, alpha, 16);
  bool found = false;
  for (const auto& w : rep.witnesses)
    if (w.k == 4 && w.value < 1e-7) found = true;
  CHECK(found);
  CHECK_FALSE(rep.branch_half_alpha);
  CHECK_FALSE(rep.branch_pi_half_alpha);

  // theta on the alpha/2 line
  auto on_branch = theta_membership_scan(bf_frac(alpha / 2), alpha, 16);
  CHECK(on_branch.branch_half_alpha);
  CHECK(on_branch.s_half_alpha == 1);
  CHECK(on_branch.dist_half_alpha < 1e-12);

  // theta on the literal pi alpha / 2 line
  auto on_pi = theta_membership_scan(bf_frac(bf_pi() * alpha / 2), alpha, 16);
  CHECK(on_pi.branch_pi_half_alpha);
  CHECK(on_pi.s_pi_half_alpha == 1);
}

TEST_CASE("json serialization round-trips through a parser") {
  auto cf = expand_rational(355, 113);
  auto j = nlohmann::json::parse(cf.to_json());
  CHECK(j["partial_quotients"].size() == cf.partial_quotients.size());
  CHECK(j["partial_quotients"][0] == 3);
  CHECK(j["convergents"].back()[0] == 355);
  CHECK(j["convergents"].back()[1] == 113);
  CHECK(j["precision_bits"] == 256);

  // oversized integers fall back to decimal strings
  auto big = from_partial_quotients({0, pow(BigInt(2), 100)});
  auto jb = nlohmann::json::parse(big.to_json());
  CHECK(jb["partial_quotients"][1].is_string());
}
