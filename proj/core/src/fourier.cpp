#include "amo/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amo::fourier {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::complex<double> FourierSeries::evaluate(double x) const {
  long long K = order();
  if (K < 0) return {0.0, 0.0};
  // Horner in z = exp(2 pi i x): sum_k c_k z^k = z^{-K} * sum_j c_{j-K} z^j.
  std::complex<double> z = std::polar(1.0, kTwoPi * x);
  std::complex<double> acc{0.0, 0.0};
  for (long long j = static_cast<long long>(coeff.size()) - 1; j >= 0; --j)
    acc = acc * z + coeff[static_cast<std::size_t>(j)];
  return acc * std::polar(1.0, -kTwoPi * static_cast<double>(K) * x);
}

double FourierSeries::reality_defect() const {
  long long K = order();
  double worst = 0.0;
  for (long long k = 0; k <= K; ++k) {
    double d = std::abs(get(-k) - std::conj(get(k)));
    if (d > worst) worst = d;
  }
  return worst;
}

void fft_pow2(std::vector<std::complex<double>>& a) {
  std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -kTwoPi / static_cast<double>(len);
    std::complex<double> wlen = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

FourierSeries analyze_samples(std::vector<std::complex<double>> samples,
                              long long K) {
  long long n = static_cast<long long>(samples.size());
  if (n < 2 * K + 1)
    throw std::invalid_argument("analyze: grid too coarse for requested order");
  fft_pow2(samples);
  FourierSeries s(K);
  double inv_n = 1.0 / static_cast<double>(n);
  for (long long k = -K; k <= K; ++k) {
    long long idx = ((k % n) + n) % n;
    s.at(k) = samples[static_cast<std::size_t>(idx)] * inv_n;
  }
  return s;
}

FourierSeries analyze(const std::function<std::complex<double>(double)>& f,
                      long long K, long long grid_n) {
  std::vector<std::complex<double>> samples(static_cast<std::size_t>(grid_n));
  for (long long j = 0; j < grid_n; ++j)
    samples[static_cast<std::size_t>(j)] =
        f(static_cast<double>(j) / static_cast<double>(grid_n));
  return analyze_samples(std::move(samples), K);
}

}  // namespace amo::fourier
