#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace amo::fourier {

// Truncated Fourier series f(x) = sum_{|k| <= K} c_k exp(2 pi i k x).
// Coefficients are stored densely at index k + K.
struct FourierSeries {
  std::vector<std::complex<double>> coeff;

  FourierSeries() = default;
  explicit FourierSeries(long long K)
      : coeff(static_cast<std::size_t>(2 * K + 1)) {}

  long long order() const {
    return coeff.empty() ? -1 : (static_cast<long long>(coeff.size()) - 1) / 2;
  }

  std::complex<double>& at(long long k) {
    return coeff[static_cast<std::size_t>(k + order())];
  }
  // Coefficients beyond the truncation read as zero.
  std::complex<double> get(long long k) const {
    long long K = order();
    if (k < -K || k > K) return {0.0, 0.0};
    return coeff[static_cast<std::size_t>(k + K)];
  }

  std::complex<double> evaluate(double x) const;

  // Largest |c_{-k} - conj(c_k)| over k; zero for series of real functions.
  double reality_defect() const;
};

// In-place radix-2 decimation-in-time FFT, forward sign convention
// X_k = sum_j x_j exp(-2 pi i j k / N). N must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a);

// Fourier coefficients of f sampled on the uniform N-point grid, truncated
// to |k| <= K. N must be a power of two with N >= 2K + 1; aliasing of modes
// above N - K is the caller's responsibility (analytic inputs decay fast).
FourierSeries analyze(const std::function<std::complex<double>(double)>& f,
                      long long K, long long grid_n);
FourierSeries analyze_samples(std::vector<std::complex<double>> samples,
                              long long K);

}  // namespace amo::fourier
