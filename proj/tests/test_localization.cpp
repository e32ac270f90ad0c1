#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "amo/cocycle.hpp"
#include "amo/errors.hpp"
#include "amo/localization.hpp"
#include "amo/params.hpp"

using namespace amo;
using namespace amo::localization;

namespace {

constexpr double kGolden = 0.61803398874989484820;
constexpr double kTwoPi = 6.2831853071795864769;

struct Rng {
  std::uint64_t s;
  double next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return double((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  long long integer(long long lo, long long hi) {
    return lo + (long long)(next() * double(hi - lo + 1));
  }
};

// Dense Gaussian elimination with partial pivoting: solves (H - E) g = rhs
// for the full window, as an oracle independent of the Cramer route.
std::vector<double> dense_resolvent_column(const TruncatedOperator& op,
                                           double energy, long long y) {
  long long n = op.dimension();
  std::vector<double> m(n * n, 0.0);
  for (long long i = 0; i < n; ++i) {
    m[i * n + i] = op.diagonal(op.lo + i) - energy;
    if (i + 1 < n) {
      m[i * n + i + 1] = 1.0;
      m[(i + 1) * n + i] = 1.0;
    }
  }
  std::vector<double> g(n, 0.0);
  g[y - op.lo] = 1.0;
  for (long long c = 0; c < n; ++c) {
    long long piv = c;
    for (long long r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (piv != c) {
      for (long long j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
      std::swap(g[c], g[piv]);
    }
    for (long long r = c + 1; r < n; ++r) {
      double f = m[r * n + c] / m[c * n + c];
      if (f == 0.0) continue;
      for (long long j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
      g[r] -= f * g[c];
    }
  }
  for (long long r = n - 1; r >= 0; --r) {
    double acc = g[r];
    for (long long j = r + 1; j < n; ++j) acc -= m[r * n + j] * g[j];
    g[r] = acc / m[r * n + r];
  }
  return g;
}

double min_eig_distance(const TruncatedOperator& op, double energy) {
  auto evs = eigenvalues(op);
  double best = 1e300;
  for (double e : evs) best = std::min(best, std::abs(e - energy));
  return best;
}

}  // namespace

TEST_CASE("zero coupling window has the free eigenvalues") {
  OperatorParams p{0.0, kGolden, 0.37, 0.0};
  TruncatedOperator op{p, 0, 11};
  auto evs = eigenvalues(op);
  REQUIRE(evs.size() == 12);
  std::vector<double> want;
  for (int j = 1; j <= 12; ++j) want.push_back(2.0 * std::cos(M_PI * j / 13.0));
  std::sort(want.begin(), want.end());
  for (int j = 0; j < 12; ++j)
    CHECK(evs[j] == doctest::Approx(want[j]).epsilon(1e-10));
}

TEST_CASE("one-site window is its own diagonal") {
  OperatorParams p{1.3, kGolden, 0.21, 0.0};
  TruncatedOperator op{p, 7, 7};
  auto evs = eigenvalues(op);
  REQUIRE(evs.size() == 1);
  CHECK(evs[0] == doctest::Approx(op.diagonal(7)).epsilon(1e-12));
  CHECK(op.diagonal(7) ==
        doctest::Approx(2.0 * 1.3 * std::cos(kTwoPi * (0.21 + 7 * kGolden)))
            .epsilon(1e-12));
}

TEST_CASE("eigenvalues of nested windows interlace") {
  OperatorParams p{1.5, kGolden, 0.37, 0.0};
  auto big = eigenvalues(TruncatedOperator{p, 0, 29});
  auto small = eigenvalues(TruncatedOperator{p, 0, 28});
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(big[i] < small[i] + 1e-12);
    CHECK(small[i] < big[i + 1] + 1e-12);
  }
}

TEST_CASE("negative-index counting agrees with the spectrum list") {
  OperatorParams p{0.8, kGolden, 0.11, 0.0};
  TruncatedOperator op{p, -5, 14};
  auto evs = eigenvalues(op);
  CHECK(index_count_below(op, evs.front() - 1.0) == 0);
  CHECK(index_count_below(op, evs.back() + 1.0) == op.dimension());
  for (std::size_t i = 0; i + 1 < evs.size(); ++i) {
    double mid = 0.5 * (evs[i] + evs[i + 1]);
    CHECK(index_count_below(op, mid) == (long long)i + 1);
  }
}

TEST_CASE("eigenvector solve meets its residual contract") {
  OperatorParams p{2.0, kGolden, 0.4, 0.0};
  TruncatedOperator op{p, 0, 59};
  auto sys = eigen_tridiagonal(op, 20, 29);
  REQUIRE(sys.values.size() == 10);
  for (std::size_t s = 0; s < sys.values.size(); ++s) {
    CHECK(sys.residuals[s] < 1e-8);
    const auto& v = sys.vectors[s];
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    // independent residual: ||(H - E) v|| over the window
    double worst = 0.0;
    for (long long i = 0; i < op.dimension(); ++i) {
      double hv = (op.diagonal(op.lo + i) - sys.values[s]) * v[i];
      if (i > 0) hv += v[i - 1];
      if (i + 1 < op.dimension()) hv += v[i + 1];
      worst = std::max(worst, std::abs(hv));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("single-site resolvent is the scalar formula") {
  OperatorParams p{1.1, kGolden, 0.23, 0.6};
  double d = 2.0 * 1.1 * std::cos(kTwoPi * (0.23 + 3 * kGolden));
  CHECK(green_function(p, 3, 3, 3, 3) ==
        doctest::Approx(1.0 / (d - 0.6)).epsilon(1e-12));
}

TEST_CASE("ratio-of-determinants resolvent matches dense elimination") {
  Rng rng{2026};
  int done = 0;
  while (done < 200) {
    OperatorParams p{rng.uniform(0.3, 3.0), kGolden, rng.next(),
                     rng.uniform(-4.0, 4.0)};
    long long lo = rng.integer(-50, 50);
    long long hi = lo + rng.integer(0, 29);
    TruncatedOperator op{p, lo, hi};
    if (min_eig_distance(op, p.energy) < 1e-3) continue;  // conditioning guard
    long long y = rng.integer(lo, hi);
    auto col = dense_resolvent_column(op, p.energy, y);
    long long x = rng.integer(lo, hi);
    double got = green_function(p, lo, hi, x, y);
    double want = col[x - lo];
    CHECK(std::abs(got - want) < 1e-8 * (1.0 + std::abs(want)));
    ++done;
  }
}

TEST_CASE("log-form resolvent carries the sign of the plain one") {
  OperatorParams p{0.9, kGolden, 0.05, 1.2};
  for (long long x = -4; x <= 6; ++x) {
    double g = green_function(p, -4, 6, x, 2);
    auto lg = green_log(p, -4, 6, x, 2);
    CHECK(lg.sign == (g > 0.0 ? 1 : -1));
    CHECK(std::exp(lg.log_abs) ==
          doctest::Approx(std::abs(g)).epsilon(1e-10));
  }
}

TEST_CASE("corner resolvent is the reciprocal window determinant") {
  OperatorParams p{1.4, kGolden, 0.31, 0.52};
  long long lo = -3, hi = 16;
  long long n = hi - lo + 1;
  auto lg = green_log(p, lo, hi, lo, hi);
  OperatorParams q = p;
  q.phase = p.phase + double(lo) * p.frequency;
  auto pk = cocycle::determinant_P_log(q, n);
  CHECK(lg.log_abs == doctest::Approx(-pk.log_abs).epsilon(1e-9));
  CHECK(lg.sign == -pk.sign);
}

TEST_CASE("exact window eigenvalue is rejected as near singular") {
  OperatorParams p{1.5, kGolden, 0.07, 0.0};
  TruncatedOperator op{p, 0, 0};
  p.energy = op.diagonal(0);
  CHECK_THROWS_AS(green_function(p, 0, 0, 0, 0), NearSingularWindow);
}

TEST_CASE("interior values decompose through the boundary resolvent") {
  Rng rng{77};
  int done = 0;
  while (done < 50) {
    OperatorParams p{rng.uniform(0.3, 3.0), kGolden, rng.next(),
                     rng.uniform(-4.0, 4.0)};
    long long lo = rng.integer(-40, 40);
    long long hi = lo + rng.integer(3, 39);
    if (min_eig_distance(TruncatedOperator{p, lo, hi}, p.energy) < 1e-3)
      continue;
    double res = poisson_residual(p, lo, hi, rng.uniform(-1.0, 1.0),
                                  rng.uniform(-1.0, 1.0));
    CHECK(res < 1e-8);
    ++done;
  }
}

TEST_CASE("planted exponential profile is fitted exactly") {
  std::vector<double> v(401);
  for (int i = 0; i <= 400; ++i) v[i] = std::exp(-0.7 * std::abs(i - 200));
  auto fit = decay_rate(v);
  CHECK(fit.center == 200);
  CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-3));
  CHECK(fit.r2 > 0.999);
}

TEST_CASE("profiles without exponential trend are rejected") {
  std::vector<double> flat(200, 1.0);
  CHECK_THROWS_AS(decay_rate(flat), NoDecayDetected);
  Rng rng{5};
  std::vector<double> noise(200);
  for (auto& x : noise) x = 0.5 + rng.next();
  CHECK_THROWS_AS(decay_rate(noise), NoDecayDetected);
}

TEST_CASE("localized state is singular at its peak and regular far away") {
  OperatorParams p{3.0, kGolden, 0.1, 0.0};
  TruncatedOperator op{p, 0, 200};
  auto sys = eigen_tridiagonal(op, 100, 100);
  const auto& v = sys.vectors[0];
  std::size_t peak = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
  long long center = op.lo + (long long)peak;
  OperatorParams pe = p;
  pe.energy = sys.values[0];
  double m = 0.8 * std::log(3.0);
  auto at_peak = regularity_classify(pe, center, 40, m);
  CHECK(at_peak.classification == Regularity::Singular);
  for (long long y : {center - 60, center + 60}) {
    auto far = regularity_classify(pe, y, 40, m);
    CHECK(far.classification == Regularity::Regular);
    CHECK(far.has_witness);
    CHECK(far.witness_lo <= y);
    CHECK(y <= far.witness_hi);
  }
}

TEST_CASE("regularity scan rejects short scales") {
  OperatorParams p{3.0, kGolden, 0.1, 0.0};
  CHECK_THROWS_AS(regularity_classify(p, 0, 39, 1.0), std::invalid_argument);
}

TEST_CASE("membership threshold matches its own margin") {
  Rng rng{11};
  OperatorParams p{2.0, kGolden, 0.0, 0.5};
  for (int t = 0; t < 40; ++t) {
    double theta = rng.next();
    double r = rng.uniform(-0.5, 1.5);
    auto rep = A_kr_membership(p, 50, r, theta);
    CHECK(rep.member == (rep.log_margin >= 0.0));
    // membership is monotone in the radius
    auto wider = A_kr_membership(p, 50, r + 0.3, theta);
    if (rep.member) CHECK(wider.member);
  }
}

TEST_CASE("membership saturates at extreme radii") {
  OperatorParams p{2.0, kGolden, 0.0, 0.5};
  int in_small = 0;
  for (int j = 0; j < 256; ++j) {
    double theta = double(j) / 256.0;
    CHECK(A_kr_membership(p, 60, std::log(2.0) + 1.5, theta).member);
    if (A_kr_membership(p, 60, std::log(2.0) - 0.1, theta).member) ++in_small;
  }
  // the phase average of log|P_k|/k sits at ln(lambda), so a radius below
  // that cannot hold every phase
  CHECK(in_small < 256);
}

TEST_CASE("polynomial growth bound is checked against the tightest constant") {
  std::vector<double> flat(51, 1.0);
  auto ok = generalized_bound_check(flat, 0, 1.0);
  CHECK(ok.within);
  CHECK(ok.tightest_C == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> quad(51);
  for (int i = 0; i <= 50; ++i) quad[i] = double(i) * double(i);
  auto bad = generalized_bound_check(quad, 0, 2.0);
  CHECK_FALSE(bad.within);
  CHECK(bad.tightest_C > 2.0);
}
