#include "amo/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amo {

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  if (n < 0 || a.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("symmetric_eigenvalues: bad dimensions");
  if (n == 0) return {};
  auto at = [&](int i, int j) -> double& { return a[i * n + j]; };

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    double diag = 0.0;
    for (int i = 0; i < n; ++i) diag += at(i, i) * at(i, i);
    if (off <= 1e-30 * (diag + off) || off == 0.0) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (apq == 0.0) continue;
        double app = at(p, p), aqq = at(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(p, k) = at(k, p);
          at(k, q) = s * akp + c * akq;
          at(q, k) = at(k, q);
        }
      }
    }
  }

  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace amo
