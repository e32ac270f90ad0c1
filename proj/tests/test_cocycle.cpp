#include <doctest.h>

#include <cmath>
#include <vector>

#include "amo/cocycle.hpp"
#include "amo/mat2.hpp"
#include "amo/params.hpp"

using namespace amo;
using namespace amo::cocycle;

namespace {

constexpr double kGolden = 0.61803398874989484820;
constexpr double kTwoPi = 6.2831853071795864769;

Mat2d to_dense(const ScaledMat2d& m) {
  double s = std::exp(m.log_scale);
  return Mat2d{m.unit.a * s, m.unit.b * s, m.unit.c * s, m.unit.d * s};
}

// LU determinant with partial pivoting, as an independent oracle.
double lu_det(std::vector<double> m, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
      det = -det;
    }
    det *= m[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      double f = m[r * n + c] / m[c * n + c];
      for (int j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("one-step transfer matrix entries") {
  OperatorParams p{0.5, kGolden, 0.0, 1.5};
  Mat2d a = transfer_matrix(p, 0.25);  // cos(pi/2) = 0
  CHECK(a.a == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(a.b == -1.0);
  CHECK(a.c == 1.0);
  CHECK(a.d == 0.0);
}

TEST_CASE("transfer products lie in SL(2,R)") {
  // Subcritical coupling near the band center: any gap there is
  // exponentially thin, so the product stays well conditioned and the
  // determinant drift is measurable directly.
  OperatorParams p{0.5, kGolden, 0.2, 0.0};
  auto m = transfer_product(p, 0.3, 1000);
  CHECK(std::abs(m.log_abs_det()) < 1e-9 * 1000);

  // Hyperbolic regime: det(unit) decays like exp(-2 log_scale); keep the
  // product short enough that cancellation noise stays below the signal.
  OperatorParams q{1.3, kGolden, 0.2, 0.7};
  auto h = transfer_product(q, 0.3, 12);
  CHECK(std::abs(h.log_abs_det()) < 1e-8);
}

TEST_CASE("cocycle additivity A_{n+m}(x) = A_n(x + m alpha) A_m(x)") {
  OperatorParams p{1.2, kGolden, 0.1, 0.9};
  double x = 0.37;
  long long n = 10, m = 7;
  Mat2d lhs = to_dense(transfer_product(p, x, n + m));
  Mat2d right = to_dense(transfer_product(p, x, m));
  Mat2d left = to_dense(transfer_product(p, x + m * p.frequency, n));
  Mat2d prod = left * right;
  CHECK(lhs.a == doctest::Approx(prod.a).epsilon(1e-10));
  CHECK(lhs.b == doctest::Approx(prod.b).epsilon(1e-10));
  CHECK(lhs.c == doctest::Approx(prod.c).epsilon(1e-10));
  CHECK(lhs.d == doctest::Approx(prod.d).epsilon(1e-10));
}

TEST_CASE("free cocycle Lyapunov exponents match the closed form") {
  // lambda = 0: constant matrix [[E, -1], [1, 0]].
  OperatorParams hyper{0.0, kGolden, 0.0, 3.0};
  auto est = lyapunov_exponent(hyper, 4000, 4, 7);
  double expected = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  CHECK(est.value == doctest::Approx(expected).epsilon(2e-3));
  CHECK(est.spread < 1e-9);  // phase plays no role at lambda = 0

  OperatorParams elliptic{0.0, kGolden, 0.0, 1.0};
  auto zero = lyapunov_exponent(elliptic, 4000, 4, 7);
  CHECK(std::abs(zero.value) < 5e-3);
}

TEST_CASE("lyapunov estimates are deterministic for a fixed seed") {
  OperatorParams p{2.0, kGolden, 0.0, 1.1};
  auto a = lyapunov_exponent(p, 2000, 6, 42);
  auto b = lyapunov_exponent(p, 2000, 6, 42);
  CHECK(a.value == b.value);
  CHECK(a.spread == b.spread);
  auto c = lyapunov_exponent(p, 2000, 6, 43);
  CHECK(a.value != c.value);  // the phase offset moved
}

TEST_CASE("rotation number of a rigid rotation is exact") {
  double t = 0.3;
  Mat2d rot{std::cos(kTwoPi * t), -std::sin(kTwoPi * t),
            std::sin(kTwoPi * t), std::cos(kTwoPi * t)};
  auto hook = [rot](double) { return rot; };
  double rho = rotation_number(kGolden, hook, 2000, 0.1);
  CHECK(rho == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("fibered rotation number at lambda = 0 gives the free IDS") {
  double e = 2.0 * std::cos(kTwoPi * 0.2);
  OperatorParams p{0.0, kGolden, 0.0, e};
  auto rep = fibered_rotation_number(p, 20000);
  CHECK(rep.rho == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(rep.ids == doctest::Approx(0.6).epsilon(1e-3));
}

TEST_CASE("ids clamps strictly outside the spectrum bound") {
  OperatorParams above{1.0, kGolden, 0.2, 10.0};
  CHECK(fibered_rotation_number(above, 100).ids == 1.0);
  OperatorParams below{1.0, kGolden, 0.2, -10.0};
  CHECK(fibered_rotation_number(below, 100).ids == 0.0);
}

TEST_CASE("ids is monotone across the spectrum") {
  OperatorParams p{1.0, kGolden, 0.123, 0.0};
  auto at = [&](double e) {
    OperatorParams q = p;
    q.energy = e;
    return fibered_rotation_number(q, 4000).ids;
  };
  double lo = at(-3.0), mid = at(0.0), hi = at(3.0);
  CHECK(lo < mid);
  CHECK(mid < hi);
  CHECK(mid == doctest::Approx(0.5).epsilon(2e-2));
}

TEST_CASE("window determinants match dense LU") {
  OperatorParams p{0.7, kGolden, 0.3, 0.9};
  int k = 10;
  std::vector<double> m(k * k, 0.0);
  for (int j = 0; j < k; ++j) {
    m[j * k + j] =
        p.energy - 2.0 * p.coupling * std::cos(kTwoPi * (p.phase + j * p.frequency));
    if (j + 1 < k) {
      m[j * k + j + 1] = -1.0;
      m[(j + 1) * k + j] = -1.0;
    }
  }
  double oracle = lu_det(m, k);
  CHECK(determinant_P(p, k) == doctest::Approx(oracle).epsilon(1e-10));

  auto sl = determinant_P_log(p, k);
  CHECK(sl.sign * std::exp(sl.log_abs) ==
        doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("log determinants stay finite far beyond double range") {
  OperatorParams p{3.0, kGolden, 0.05, 1.7};
  auto sl = determinant_P_log(p, 1000);
  CHECK(std::isfinite(sl.log_abs));
  CHECK(std::abs(sl.sign) == 1);
  CHECK(sl.log_abs > 500.0);  // grows at least like k ln lambda - O(k)
}

TEST_CASE("herman lower bound holds for the log determinant average") {
  auto rep = herman_bound_check(2.0, kGolden, 0.5, 8, 4096);
  CHECK(rep.pass);
  CHECK(rep.estimate >= rep.lower_bound - 1e-6);
  CHECK(rep.lower_bound == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-12));

  auto unit = herman_bound_check(1.0, kGolden, 0.3, 10, 4096);
  CHECK(unit.pass);
  CHECK(unit.lower_bound == 0.0);
}

TEST_CASE("herman quadrature is deterministic") {
  auto a = herman_bound_check(1.5, kGolden, 0.2, 6, 2048);
  auto b = herman_bound_check(1.5, kGolden, 0.2, 6, 2048);
  CHECK(a.estimate == b.estimate);
  CHECK(a.jittered_nodes == b.jittered_nodes);
}

TEST_CASE("thouless residual excludes atoms at the evaluation energy") {
  std::vector<double> atoms{1.0, 2.0};
  std::vector<double> w{0.5, 0.5};
  auto rep = thouless_residual(1.0, atoms, w, 4.0);
  double sum = 0.5 * (std::log(3.0) + std::log(2.0));
  CHECK(rep.thouless_sum == doctest::Approx(sum).epsilon(1e-14));
  CHECK(rep.residual == doctest::Approx(1.0 - sum).epsilon(1e-12));
  CHECK_FALSE(rep.singular);
  CHECK(rep.excluded_atoms.empty());

  auto hit = thouless_residual(1.0, {4.0, 1.0}, w, 4.0);
  CHECK(hit.singular);
  REQUIRE(hit.excluded_atoms.size() == 1);
  CHECK(hit.excluded_atoms[0] == 0);
  CHECK(hit.thouless_sum == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
}
