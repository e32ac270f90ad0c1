#pragma once

#include <complex>
#include <vector>

#include "amo/fourier.hpp"
#include "amo/params.hpp"

namespace amo::duality {

// A localized eigenvector re-expressed as the Fourier data of its dual
// cocycle solution. params carries coupling lambda, frequency alpha, phase
// theta, and the eigenvalue in params.energy; U holds coefficient n = u_n
// with n an absolute lattice site.
struct DualPair {
  OperatorParams params;
  fourier::FourierSeries U;
  double tail_mass = 0.0;  // l2 mass of the dropped coefficients

  // W(x) = (U(x) e^{2 pi i theta}; U(x - alpha)).
  std::complex<double> W1(double x) const;
  std::complex<double> W2(double x) const;
};

// Builds the pair from eigenvector values on the absolute sites
// [first_site, first_site + u.size()); u is normalized internally and
// coefficients are retained for |n| <= K. Throws InsufficientDecay when the
// dropped l2 mass exceeds 1e-8.
DualPair build_dual(const std::vector<double>& u, long long first_site,
                    const OperatorParams& params, long long K);

// sup over the grid of |S_{1/lambda, E/lambda}(x) W(x) - e^{2 pi i theta}
// W(x + alpha)|, normalized by sup |W|. Small exactly when u solves the
// eigenvalue equation termwise.
double duality_residual(const DualPair& pair, long long grid_size);

struct DetMReport {
  double c = 0.0;          // det M(x) = c i for an exact pair
  double variation = 0.0;  // max |det M(x) - c i| over the grid
  double re_sup = 0.0;     // max |Re det M(x)|
  int sign = 0;            // sign of c
  bool degenerate = false; // |c| below 1e-6 of the natural scale
  long long k_fit = 0;     // best k in 2 theta = k alpha + l when degenerate
  double fit_distance = 0.0;
};

// Constancy probe of det M(x), M having columns W(x) and conj(W(x)). A
// vanishing c signals the 2 theta = k alpha + l branch, reported with the
// closest such relation.
DetMReport det_M_constancy(const DualPair& pair, long long grid_size);

}  // namespace amo::duality
