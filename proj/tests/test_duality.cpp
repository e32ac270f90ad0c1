#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "amo/duality.hpp"
#include "amo/errors.hpp"
#include "amo/localization.hpp"
#include "amo/params.hpp"

using namespace amo;
using namespace amo::duality;

namespace {

constexpr double kGolden = 0.61803398874989484820;
constexpr double kTwoPi = 6.2831853071795864769;

// Mid-window state whose peak sits closest to site 0.
localization::EigenSystem centered_state(const localization::TruncatedOperator& op,
                                         long long spread, std::size_t* pick) {
  long long nn = op.dimension();
  auto sys = localization::eigen_tridiagonal(op, nn / 2 - spread,
                                             nn / 2 + spread);
  long long best = 1ll << 40;
  for (std::size_t s = 0; s < sys.values.size(); ++s) {
    const auto& v = sys.vectors[s];
    std::size_t am = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[am])) am = i;
    long long center = op.lo + (long long)am;
    if (std::llabs(center) < std::llabs(best)) {
      best = center;
      *pick = s;
    }
  }
  return sys;
}

}  // namespace

TEST_CASE("point mass dualizes to the constant function") {
  OperatorParams p{2.0, kGolden, 0.3, 0.7};
  auto pair = build_dual({1.0}, 0, p, 4);
  CHECK(pair.tail_mass == 0.0);
  for (double x : {0.0, 0.3, 0.77}) {
    CHECK(std::abs(pair.U.evaluate(x) - std::complex<double>{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(pair.W1(x) - std::polar(1.0, kTwoPi * 0.3)) < 1e-14);
    CHECK(std::abs(pair.W2(x) - std::complex<double>{1.0, 0.0}) < 1e-14);
  }
  // det M = 2 i sin(2 pi theta) everywhere
  auto dm = det_M_constancy(pair, 256);
  CHECK(dm.c == doctest::Approx(2.0 * std::sin(kTwoPi * 0.3)).epsilon(1e-12));
  CHECK(dm.variation < 1e-12);
  CHECK(dm.re_sup == 0.0);
  CHECK(dm.sign == 1);
  CHECK_FALSE(dm.degenerate);
}

TEST_CASE("symmetric triple dualizes to a cosine") {
  std::vector<double> u{0.6, 0.8, 0.6};
  OperatorParams p{3.0, kGolden, 0.2, 0.1};
  auto pair = build_dual(u, -1, p, 3);
  double nrm = std::sqrt(0.6 * 0.6 * 2 + 0.8 * 0.8);
  for (double x : {0.1, 0.45, 0.9}) {
    std::complex<double> want{(0.8 + 1.2 * std::cos(kTwoPi * x)) / nrm, 0.0};
    CHECK(std::abs(pair.U.evaluate(x) - want) < 1e-14);
  }
  // real symmetric coefficients: U(-x) = conj U(x) exactly
  CHECK(pair.U.reality_defect() == 0.0);
}

TEST_CASE("a non-eigenvector leaves an order-one defect") {
  OperatorParams p{2.0, kGolden, 0.3, 0.7};
  auto pair = build_dual({1.0}, 0, p, 4);
  CHECK(duality_residual(pair, 128) > 0.05);
}

TEST_CASE("localized eigenvector passes to its dual cocycle solution") {
  OperatorParams p{3.0, kGolden, 0.1, 0.0};
  localization::TruncatedOperator op{p, -400, 400};
  std::size_t pick = 0;
  auto sys = centered_state(op, 10, &pick);
  REQUIRE(sys.residuals[pick] < 1e-9);
  OperatorParams pe = p;
  pe.energy = sys.values[pick];
  auto pair = build_dual(sys.vectors[pick], op.lo, pe, 80);
  CHECK(pair.tail_mass < 1e-12);
  CHECK(duality_residual(pair, 512) < 1e-10);
  auto dm = det_M_constancy(pair, 512);
  CHECK(dm.variation < 1e-8);
  CHECK_FALSE(dm.degenerate);
  CHECK(dm.c != 0.0);
}

TEST_CASE("dual defect shrinks as box and order grow") {
  OperatorParams p{3.0, kGolden, 0.1, 0.0};
  double coarse, fine;
  {
    localization::TruncatedOperator op{p, -150, 150};
    std::size_t pick = 0;
    auto sys = centered_state(op, 20, &pick);
    OperatorParams pe = p;
    pe.energy = sys.values[pick];
    coarse = duality_residual(build_dual(sys.vectors[pick], op.lo, pe, 15), 256);
  }
  {
    localization::TruncatedOperator op{p, -450, 450};
    std::size_t pick = 0;
    auto sys = centered_state(op, 20, &pick);
    OperatorParams pe = p;
    pe.energy = sys.values[pick];
    fine = duality_residual(build_dual(sys.vectors[pick], op.lo, pe, 120), 256);
  }
  // the truncated order leaves a visible defect; the refined pair sits at
  // the rounding floor
  CHECK(coarse > 1e-9);
  CHECK(fine < coarse);
}

TEST_CASE("slow tails outside the order are rejected") {
  std::vector<double> u(101);
  for (int i = 0; i <= 100; ++i) u[i] = 1.0 / (1.0 + std::abs(i - 50));
  OperatorParams p{2.0, kGolden, 0.3, 0.0};
  CHECK_THROWS_AS(build_dual(u, -50, p, 10), InsufficientDecay);
}

TEST_CASE("phase resonance degenerates the wronskian") {
  // theta = 1/2 makes 2 theta integral, and det M of the point mass vanishes
  OperatorParams p{2.0, kGolden, 0.5, 0.7};
  auto pair = build_dual({1.0}, 0, p, 4);
  auto dm = det_M_constancy(pair, 128);
  CHECK(dm.degenerate);
  CHECK(dm.k_fit == 0);
  CHECK(dm.fit_distance < 1e-12);
  CHECK(std::abs(dm.c) < 1e-12);
}
