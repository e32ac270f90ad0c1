#include <doctest.h>

#include <cmath>
#include <vector>

#include "amo/dense_eig.hpp"

using amo::symmetric_eigenvalues;

namespace {

// Similarity-transform a by a Givens rotation in plane (i, j).
void rotate(std::vector<double>& a, int n, int i, int j, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  for (int k = 0; k < n; ++k) {
    double ri = a[i * n + k], rj = a[j * n + k];
    a[i * n + k] = c * ri - s * rj;
    a[j * n + k] = s * ri + c * rj;
  }
  for (int k = 0; k < n; ++k) {
    double ci = a[k * n + i], cj = a[k * n + j];
    a[k * n + i] = c * ci - s * cj;
    a[k * n + j] = s * ci + c * cj;
  }
}

}  // namespace

TEST_CASE("trivial sizes") {
  CHECK(symmetric_eigenvalues({7.0}, 1) == std::vector<double>{7.0});
  auto two = symmetric_eigenvalues({2.0, 1.0, 1.0, 2.0}, 2);
  CHECK(two[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(two[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("diagonal matrices come back sorted") {
  std::vector<double> d{0, 0, 0, 0, 0, 0, 0, 0, 0};
  d[0] = 5.0;
  d[4] = -1.0;
  d[8] = 2.0;
  auto ev = symmetric_eigenvalues(d, 3);
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(5.0));
}

TEST_CASE("free chain eigenvalues are 2 cos(pi j / (n+1))") {
  int n = 12;
  std::vector<double> a(n * n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    a[i * n + i + 1] = 1.0;
    a[(i + 1) * n + i] = 1.0;
  }
  auto ev = symmetric_eigenvalues(a, n);
  for (int j = 0; j < n; ++j) {
    double expect = 2.0 * std::cos(M_PI * (n - j) / (n + 1));
    CHECK(ev[j] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues survive orthogonal conjugation") {
  int n = 5;
  std::vector<double> a(n * n, 0.0);
  for (int i = 0; i < n; ++i) a[i * n + i] = i + 1;
  rotate(a, n, 0, 1, 0.3);
  rotate(a, n, 2, 4, 0.7);
  rotate(a, n, 1, 3, 1.1);
  auto ev = symmetric_eigenvalues(a, n);
  for (int i = 0; i < n; ++i)
    CHECK(ev[i] == doctest::Approx(i + 1.0).epsilon(1e-12));
}

TEST_CASE("double eigenvalues are reported with multiplicity") {
  // 2x2 zero matrix plus a decoupled 1: eigenvalues {0, 0, 1}
  std::vector<double> a{0, 0, 0, 0, 0, 0, 0, 0, 1};
  auto ev = symmetric_eigenvalues(a, 3);
  CHECK(ev[0] == doctest::Approx(0.0));
  CHECK(ev[1] == doctest::Approx(0.0));
  CHECK(ev[2] == doctest::Approx(1.0));
}
