#include "amo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "amo/bigfloat.hpp"
#include "amo/cocycle.hpp"
#include "amo/dense_eig.hpp"
#include "amo/errors.hpp"
#include "amo/parallel.hpp"

namespace amo::spectrum {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_fraction(long long p, long long q) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  if (std::gcd(p < 0 ? -p : p, q) != 1)
    throw std::invalid_argument("p/q must be in lowest terms");
}

// tr A_q at the given phase, as sign * exp(log_abs). Infinities are fine
// here: callers only compare against thresholds of the same scale.
double trace_at(double coupling, double alpha, double theta, long long q,
                double energy) {
  OperatorParams op{coupling, alpha, theta, energy};
  ScaledMat2d m = cocycle::transfer_product(op, theta, q);
  double u = m.unit.a + m.unit.d;
  if (u == 0.0) return 0.0;  // avoid 0 * exp(huge) = NaN
  return u * std::exp(m.log_scale);
}

}  // namespace

double discriminant(double coupling, long long p, long long q, double energy) {
  check_fraction(p, q);
  double alpha = static_cast<double>(p) / static_cast<double>(q);
  // At theta* = 1/(4q) the cosine factor cos(2 pi q theta*) vanishes
  // exactly, so the phase term is dropped instead of evaluated; computing
  // it at the rounded theta* would reintroduce a lambda^q-sized artifact.
  double theta_star = 1.0 / (4.0 * static_cast<double>(q));
  return trace_at(coupling, alpha, theta_star, q, energy);
}

DiscriminantProbe discriminant_probe(double coupling, long long p, long long q,
                                     double energy, int n_phases) {
  check_fraction(p, q);
  if (n_phases < 2) throw std::invalid_argument("need at least two phases");
  PrecisionGuard guard(256);

  BigFloat lam(coupling), en(energy);
  BigFloat alpha = BigFloat(p) / BigFloat(q);
  BigFloat lam_q = pow(lam, static_cast<int>(q));
  BigFloat lo, hi, sum = 0;
  for (int i = 0; i < n_phases; ++i) {
    BigFloat theta = (BigFloat(i) + BigFloat("0.1378")) / n_phases;
    // 2x2 product A(theta + (q-1) alpha) ... A(theta), no rescaling needed:
    // the mpfr exponent range dwarfs any desk-scale growth.
    BigFloat a = 1, b = 0, c = 0, d = 1;
    for (long long j = 0; j < q; ++j) {
      BigFloat x = theta + j * alpha;
      BigFloat t = en - 2 * lam * bf_cos2pi(x);
      BigFloat na = t * a - c, nb = t * b - d;
      c = a;
      d = b;
      a = na;
      b = nb;
    }
    BigFloat phi = a + d + 2 * lam_q * bf_cos2pi(q * theta);
    if (i == 0) {
      lo = phi;
      hi = phi;
    } else {
      if (phi < lo) lo = phi;
      if (phi > hi) hi = phi;
    }
    sum += phi;
  }

  DiscriminantProbe out;
  out.value = static_cast<double>(sum / n_phases);
  out.spread = static_cast<double>(hi - lo);
  out.n_phases = n_phases;
  double scale = std::max(1.0, std::abs(out.value));
  if (!(out.spread <= 1e-9 * scale))
    throw ThetaDependenceDetected("discriminant varies over probe phases");
  return out;
}

namespace {

// Eigenvalues of the period-q wrap matrix: diagonal 2 lambda cos(2 pi
// (theta + j p/q)), unit hops, corner entries wrap (+1 periodic, -1
// antiperiodic). det(E - H) = tr A_q(theta) -+ 2, so the periodic matrix at
// theta = 0 carries the roots of Phi = +(2+2 lambda^q) and the antiperiodic
// one at theta = 1/(2q) the roots of Phi = -(2+2 lambda^q).
std::vector<double> floquet_eigenvalues(double coupling, long long p,
                                        long long q, bool periodic) {
  double qd = static_cast<double>(q);
  double theta0 = periodic ? 0.0 : 0.5 / qd;
  auto site = [&](long long j) {
    long long m = ((j * p) % q + q) % q;
    return 2.0 * coupling *
           std::cos(kTwoPi * (theta0 + static_cast<double>(m) / qd));
  };
  double wrap = periodic ? 1.0 : -1.0;
  if (q == 1) return {site(0) + 2.0 * wrap};

  std::size_t n = static_cast<std::size_t>(q);
  std::vector<double> h(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    h[j * n + j] = site(static_cast<long long>(j));
    if (j + 1 < n) {
      h[j * n + j + 1] = 1.0;
      h[(j + 1) * n + j] = 1.0;
    }
  }
  h[0 * n + (n - 1)] += wrap;
  h[(n - 1) * n + 0] += wrap;
  return symmetric_eigenvalues(std::move(h), static_cast<int>(q));
}

double bisect_to(const std::function<double(double)>& f, double lo, double hi,
                 double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// One Phi = target family: cross-validate bisected grid roots against the
// Floquet eigenvalues for that family, then emit the eigenvalues. Every
// grid root must sit on an eigenvalue; eigenvalues the grid missed are
// double roots or sub-grid twin pairs. Near a double root the discriminant
// rounds to the target on a plateau of width ~sqrt(ulp) and bisection can
// only localize to that plateau, while the symmetric eigenvalue stays
// accurate to ~eps * ||H|| at any multiplicity, so the eigenvalue route is
// the one reported.
std::vector<double> reconcile_family(std::vector<double> roots,
                                     std::vector<double> cands) {
  const double match_tol = 1e-7;
  std::sort(roots.begin(), roots.end());
  std::sort(cands.begin(), cands.end());
  std::size_t ri = 0;
  for (double e : cands) {
    if (ri < roots.size() && roots[ri] < e - match_tol)
      throw RootCountMismatch("grid root matches no Floquet eigenvalue");
    if (ri < roots.size() && std::abs(roots[ri] - e) <= match_tol) ++ri;
  }
  if (ri != roots.size())
    throw RootCountMismatch("more grid roots than Floquet eigenvalues");
  return cands;
}

}  // namespace

BandList band_edges(double coupling, long long p, long long q, double tol) {
  check_fraction(p, q);
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  double al = std::abs(coupling);  // the band set depends on |lambda| only
  double radius = spectrum_bound(coupling);

  std::vector<double> cand_plus = floquet_eigenvalues(al, p, q, true);
  std::vector<double> cand_minus = floquet_eigenvalues(al, p, q, false);

  // Grid pass: brackets of Phi -+ T over 16q nodes, bisected to tol. For
  // couplings where the threshold T = 2 + 2 lambda^q itself overflows a
  // double, the grid route is meaningless and the eigenvalue route (whose
  // entries stay O(lambda)) stands alone.
  bool grid_ok = al == 0.0 || static_cast<double>(q) * std::log(al) < 700.0;
  std::vector<double> roots_plus, roots_minus;
  if (grid_ok) {
    double capital = 2.0 + 2.0 * std::pow(al, static_cast<double>(q));
    double alpha = static_cast<double>(p) / static_cast<double>(q);
    double theta_star = 1.0 / (4.0 * static_cast<double>(q));
    auto phi = [&](double e) {
      return trace_at(al, alpha, theta_star, q, e);
    };
    double lo0 = -radius - 0.5, hi0 = radius + 0.5;
    long long nn = 16 * q;
    std::vector<double> node(nn + 1), val(nn + 1);
    for (long long i = 0; i <= nn; ++i) {
      node[i] = lo0 + (hi0 - lo0) * static_cast<double>(i) /
                          static_cast<double>(nn);
      val[i] = phi(node[i]);
    }
    for (int s : {+1, -1}) {
      double target = s * capital;
      auto g = [&](double e) { return phi(e) - target; };
      std::vector<double>& out = s > 0 ? roots_plus : roots_minus;
      for (long long i = 0; i < nn; ++i) {
        double ga = val[i] - target, gb = val[i + 1] - target;
        if (ga == 0.0) {
          out.push_back(node[i]);
        } else if (gb != 0.0 && (ga < 0.0) != (gb < 0.0)) {
          // gb == 0 is deferred to the next node's ga == 0 branch so an
          // exact hit is not counted twice.
          out.push_back(bisect_to(g, node[i], node[i + 1], ga, tol));
        }
      }
      if (val[nn] == target) out.push_back(node[nn]);
    }
  }

  std::vector<double> edges;
  if (grid_ok) {
    auto ep = reconcile_family(roots_plus, cand_plus);
    auto em = reconcile_family(roots_minus, cand_minus);
    edges.insert(edges.end(), ep.begin(), ep.end());
    edges.insert(edges.end(), em.begin(), em.end());
  } else {
    edges = cand_plus;
    edges.insert(edges.end(), cand_minus.begin(), cand_minus.end());
  }
  if (edges.size() != static_cast<std::size_t>(2 * q))
    throw RootCountMismatch("expected 2q band edges");
  std::sort(edges.begin(), edges.end());
  if (edges.front() < -radius - 1e-6 || edges.back() > radius + 1e-6)
    throw RootCountMismatch("band edge outside the containment interval");

  BandList out;
  out.coupling = coupling;
  out.p = p;
  out.q = q;
  out.edge_tolerance = tol;
  out.bands.reserve(static_cast<std::size_t>(q));
  for (long long j = 0; j < q; ++j)
    out.bands.push_back(Band{edges[2 * j], edges[2 * j + 1]});
  return out;
}

GapCatalog gap_catalog(const BandList& bands,
                       std::optional<double> alpha_target) {
  GapCatalog out;
  double cutoff = 10.0 * bands.edge_tolerance;
  for (std::size_t j = 0; j + 1 < bands.bands.size(); ++j) {
    double sep = bands.bands[j + 1].lo - bands.bands[j].hi;
    if (sep <= cutoff) {
      ++out.touching_count;
      continue;
    }
    Gap g;
    g.lo = bands.bands[j].hi;
    g.hi = bands.bands[j + 1].lo;
    g.size = sep;
    g.index = static_cast<long long>(j) + 1;
    g.ids_num = g.index;
    g.ids_den = bands.q;
    out.gaps.push_back(g);
  }
  if (!alpha_target) return out;

  out.labeled = true;
  for (Gap& g : out.gaps) {
    double ids = static_cast<double>(g.ids_num) / static_cast<double>(g.ids_den);
    long long kmax = bands.q / 2;
    long long best_k = 0;
    double best_d = kInf;
    for (long long k = -kmax; k <= kmax; ++k) {
      double d = torus_norm(ids - static_cast<double>(k) * *alpha_target);
      bool better = d < best_d - 1e-15;
      if (!better && std::abs(d - best_d) <= 1e-15) {
        long long ak = k < 0 ? -k : k, ab = best_k < 0 ? -best_k : best_k;
        better = ak < ab || (ak == ab && k > best_k);
      }
      if (better) {
        best_k = k;
        best_d = d;
      }
    }
    g.label_k = best_k;
    g.label_l = std::llround(ids - static_cast<double>(best_k) * *alpha_target);
    g.label_dist = best_d;
  }
  return out;
}

std::vector<GapBoundScale> gap_bound_check(
    double coupling, const arith::ContinuedFractionExpansion& cf,
    std::size_t n_lo, std::size_t n_hi, double eps) {
  if (!(coupling > 0.0 && coupling <= 1.0))
    throw std::invalid_argument("coupling must lie in (0, 1]");
  if (n_hi >= cf.order() || n_lo > n_hi)
    throw ScaleOutOfRange("convergent range outside expansion");

  std::vector<GapBoundScale> out;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    if (cf.q(n) > 2000)
      throw std::invalid_argument("denominator too large for a band solve");
    long long p = cf.p(n).convert_to<long long>();
    long long q = cf.q(n).convert_to<long long>();
    BandList bl = band_edges(coupling, p, q);
    GapCatalog gc = gap_catalog(bl);

    GapBoundScale s;
    s.p = p;
    s.q = q;
    s.min_gap = kInf;
    for (const Gap& g : gc.gaps) s.min_gap = std::min(s.min_gap, g.size);
    double qd = static_cast<double>(q);
    double log_bound = -eps * qd + 0.5 * qd * std::log(coupling);
    s.bound = std::exp(log_bound);
    s.log_margin = std::log(s.min_gap) - log_bound;  // +inf when gapless
    s.pass = !(s.log_margin < 0.0);
    out.push_back(s);
  }
  return out;
}

namespace {

// min over i of sum_{j != i} ln|a_j - a_i| - m ln lambda.
double cey_margin(const std::vector<double>& pts, long long m, double al) {
  double best = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) s += std::log(std::abs(pts[j] - pts[i]));
    best = std::min(best, s - static_cast<double>(m) * std::log(al));
  }
  return best;
}

}  // namespace

CeyReport cey_product_check(const BandList& bands) {
  double al = std::abs(bands.coupling);
  if (!(al > 0.0 && al <= 1.0))
    throw std::invalid_argument("|coupling| must lie in (0, 1]");
  long long q = bands.q;
  CeyReport out;
  out.m = (q - 1) / 2;  // q = 2m+1 or 2m+2

  std::vector<double> pts;
  pts.reserve(bands.bands.size());
  for (const Band& b : bands.bands) pts.push_back(b.midpoint());
  out.min_log_margin = cey_margin(pts, out.m, al);
  out.points = pts;
  if (out.min_log_margin >= 0.0) {
    out.pass = true;
    return out;
  }

  // Midpoints failed; coordinate ascent over five Chebyshev points per band.
  out.fallback_used = true;
  std::vector<std::vector<double>> cands(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double mid = bands.bands[i].midpoint(), half = 0.5 * bands.bands[i].length();
    for (int t = 0; t < 5; ++t)
      cands[i].push_back(mid + half * std::cos(M_PI * (2 * t + 1) / 10.0));
  }
  double best = out.min_log_margin;
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double keep = pts[i];
      for (double c : cands[i]) {
        pts[i] = c;
        double r = cey_margin(pts, out.m, al);
        if (r > best) {
          best = r;
          keep = c;
        }
      }
      pts[i] = keep;
    }
  }
  out.min_log_margin = best;
  out.points = pts;
  out.pass = best >= 0.0;
  return out;
}

std::vector<ButterflyTile> butterfly(double coupling, long long q_max) {
  if (q_max < 1) throw std::invalid_argument("q_max must be >= 1");
  std::vector<ButterflyTile> tiles;
  tiles.push_back(ButterflyTile{0, 1, {}, {}});
  for (long long q = 2; q <= q_max; ++q)
    for (long long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) tiles.push_back(ButterflyTile{p, q, {}, {}});

  parallel_for(tiles.size(), [&](std::size_t i) {
    try {
      tiles[i].bands = band_edges(coupling, tiles[i].p, tiles[i].q);
    } catch (const std::exception& e) {
      tiles[i].error = e.what();
    }
  });
  return tiles;
}

DosAtoms dos_atoms(const BandList& bands) {
  DosAtoms out;
  double w = 1.0 / static_cast<double>(bands.q);
  for (const Band& b : bands.bands) {
    out.positions.push_back(b.midpoint());
    out.weights.push_back(w);
    out.max_band_length = std::max(out.max_band_length, b.length());
  }
  return out;
}

namespace {

double point_to_set(double x, const std::vector<Band>& s) {
  double best = kInf;
  for (const Band& b : s) {
    if (x >= b.lo && x <= b.hi) return 0.0;
    best = std::min(best, x < b.lo ? b.lo - x : x - b.hi);
  }
  return best;
}

// sup_{x in A} dist(x, B). dist(., B) is piecewise linear with peaks at
// midpoints of B's gaps, so the sup over the closed union A is attained at
// an endpoint of A or at such a midpoint that lies inside A.
double directed_hausdorff(const std::vector<Band>& a,
                          const std::vector<Band>& b) {
  double best = 0.0;
  for (const Band& band : a) {
    best = std::max(best, point_to_set(band.lo, b));
    best = std::max(best, point_to_set(band.hi, b));
  }
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    double mid = 0.5 * (b[j].hi + b[j + 1].lo);
    if (point_to_set(mid, a) == 0.0)
      best = std::max(best, point_to_set(mid, b));
  }
  return best;
}

}  // namespace

double hausdorff_distance(const std::vector<Band>& a,
                          const std::vector<Band>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

DualityCheck spectra_duality_check(double coupling, long long p, long long q) {
  double al = std::abs(coupling);
  if (!(al > 0.0)) throw std::invalid_argument("coupling must be nonzero");

  DualityCheck out;
  out.direct = band_edges(coupling, p, q);
  BandList dual = band_edges(1.0 / al, p, q);
  out.scaled_dual = dual;
  out.scaled_dual.coupling = coupling;
  out.scaled_dual.edge_tolerance = al * dual.edge_tolerance;
  for (Band& b : out.scaled_dual.bands) {
    b.lo *= al;
    b.hi *= al;
  }
  out.hausdorff = hausdorff_distance(out.direct.bands, out.scaled_dual.bands);
  return out;
}

}  // namespace amo::spectrum
