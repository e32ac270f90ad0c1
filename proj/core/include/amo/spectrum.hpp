#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amo/continued_fraction.hpp"

namespace amo::spectrum {

// Phase-independent discriminant Phi(E) = tr A_q(theta) + 2 lambda^q cos(2 pi q theta)
// for frequency p/q, evaluated at a phase where the cosine term vanishes so
// no cancellation is introduced. |Phi(E)| <= 2 + 2|lambda|^q cuts out the
// spectrum.
double discriminant(double coupling, long long p, long long q, double energy);

// Evaluates Phi at n_phases probe phases in 256-bit arithmetic and checks
// that the spread stays below 1e-9 * max(1, |Phi|). Throws
// ThetaDependenceDetected otherwise.
struct DiscriminantProbe {
  double value = 0.0;
  double spread = 0.0;
  int n_phases = 0;
};
DiscriminantProbe discriminant_probe(double coupling, long long p, long long q,
                                     double energy, int n_phases = 32);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct BandList {
  double coupling = 0.0;
  long long p = 0;
  long long q = 1;
  std::vector<Band> bands;        // exactly q, ascending, disjoint interiors
  double edge_tolerance = 1e-12;
};

// The 2q band edges, i.e. the roots of Phi(E) = +-(2 + 2|lambda|^q).
// Sign-change brackets from a 16q grid are bisected to tol; edges the grid
// cannot see (touching bands, gaps thinner than the grid) are completed
// from the eigenvalues of the two extremal-phase Floquet matrices, whose
// union is exactly that root set. The two routes must agree wherever both
// produce a root, else RootCountMismatch.
BandList band_edges(double coupling, long long p, long long q,
                    double tol = 1e-12);

struct Gap {
  double lo = 0.0;
  double hi = 0.0;
  double size = 0.0;
  long long index = 0;     // number of bands below the gap
  long long ids_num = 0;   // ids on the gap = index/q
  long long ids_den = 1;
  long long label_k = 0;   // argmin_{|k| <= q/2} ||ids - k alpha||, if alpha given
  long long label_l = 0;
  double label_dist = 0.0;
};

struct GapCatalog {
  std::vector<Gap> gaps;   // bounded gaps with size > 10 * edge_tolerance
  int touching_count = 0;  // consecutive-band separations below that cutoff
  bool labeled = false;
};

// Bounded gaps only; the unbounded components outside the spectrum are
// never emitted. Gaps no wider than 10 * edge_tolerance count as touchings.
GapCatalog gap_catalog(const BandList& bands,
                       std::optional<double> alpha_target = std::nullopt);

struct GapBoundScale {
  long long p = 0;
  long long q = 0;
  double min_gap = 0.0;    // +inf when the spectrum has no bounded gap
  double bound = 0.0;      // exp(-eps q) lambda^{q/2}
  double log_margin = 0.0; // ln(min_gap) - ln(bound)
  bool pass = false;
};

// Checks min bounded-gap size >= e^{-eps q_n} lambda^{q_n / 2} along
// convergents n in [n_lo, n_hi] of cf. Requires 0 < lambda <= 1.
std::vector<GapBoundScale> gap_bound_check(
    double coupling, const arith::ContinuedFractionExpansion& cf,
    std::size_t n_lo, std::size_t n_hi, double eps);

struct CeyReport {
  double min_log_margin = 0.0;  // min_i [ sum_{j != i} ln|a_j - a_i| - m ln lambda ]
  bool pass = false;
  bool fallback_used = false;
  std::vector<double> points;   // the a_i that achieve the reported margin
  long long m = 0;              // q = 2m+1 or 2m+2
};

// Product lower bound over per-band points: prod_{j != i} |a_j - a_i| >=
// lambda^m. Midpoints first; on failure a coordinate-ascent search over
// per-band Chebyshev points runs before declaring failure. Diagnostic.
CeyReport cey_product_check(const BandList& bands);

struct ButterflyTile {
  long long p = 0;
  long long q = 1;
  BandList bands;
  std::string error;  // nonempty when this fraction's edge solve failed
};

// BandLists for every reduced p/q with q <= q_max, ordered by (q, p).
// Fractions are computed in parallel; ordering is by index, not completion.
// A failure on one fraction is recorded on its tile, the rest continue.
std::vector<ButterflyTile> butterfly(double coupling, long long q_max);

struct DosAtoms {
  std::vector<double> positions;  // band midpoints
  std::vector<double> weights;    // 1/q each
  double max_band_length = 0.0;   // M(lambda, p/q)
};
DosAtoms dos_atoms(const BandList& bands);

// Hausdorff distance between two finite unions of closed intervals.
double hausdorff_distance(const std::vector<Band>& a,
                          const std::vector<Band>& b);

struct DualityCheck {
  double hausdorff = 0.0;
  BandList direct;       // spectrum at lambda
  BandList scaled_dual;  // lambda * spectrum at 1/lambda
};

// Verifies Sigma(lambda, p/q) = lambda * Sigma(1/lambda, p/q) numerically.
DualityCheck spectra_duality_check(double coupling, long long p, long long q);

}  // namespace amo::spectrum
