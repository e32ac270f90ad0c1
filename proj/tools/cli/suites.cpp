#include <algorithm>
#include <cmath>
#include <numeric>

#include "amo/cocycle.hpp"
#include "amo/errors.hpp"
#include "amo/localization.hpp"
#include "amo/parallel.hpp"
#include "amo/params.hpp"
#include "amo/spectrum.hpp"
#include "amo/trig_estimates.hpp"
#include "common.hpp"

namespace amo::cli {

namespace {

constexpr double kGolden = 0.61803398874989484820;

struct Identity {
  std::string name;
  long long checked = 0;
  long long passed = 0;
  double worst = 0.0;  // deviation in the identity's own units; see name
  json worst_at;
};

void record(Identity& id, bool pass, double deviation, json at) {
  ++id.checked;
  if (pass) ++id.passed;
  if (id.checked == 1 || deviation > id.worst) {
    id.worst = deviation;
    id.worst_at = std::move(at);
  }
}

long long random_coprime(long long q, std::uint64_t& s) {
  for (;;) {
    long long p = 1 + (long long)(splitmix64(s) % (std::uint64_t)(q - 1));
    if (std::gcd(p, q) == 1) return p;
  }
}

// --- trig: the exact rational log-sin identity and the two-sided bounds ---

std::vector<Identity> suite_trig(long long qmax, std::uint64_t seed) {
  Identity rat{"rational-log-sin"};
  std::uint64_t s = seed;
  for (long long q = 2; q <= qmax; ++q) {
    std::vector<long long> ps{1};
    for (int t = 0; t < 3 && q > 2; ++t) ps.push_back(random_coprime(q, s));
    for (long long p : ps) {
      double dev = trig::rat0_deviation(p, q);
      record(rat, dev <= 1e-9 * double(q), dev / double(q),
             {{"p", p}, {"q", q}, {"deviation", dev}});
    }
  }

  Identity bounds{"node-sum-bounds"};
  long long qcap = std::min<long long>(qmax, 200);
  for (int i = 0; i < 100; ++i) {
    for (int attempt = 0;; ++attempt) {
      long long q = 2 + (long long)(splitmix64(s) % (std::uint64_t)(qcap - 1));
      long long p = q == 2 ? 1 : random_coprime(q, s);
      double x = uniform01(s);
      try {
        auto rep = trig::log_sin_sum_rational(x, p, q);
        double over = std::max(rep.lower - rep.combined,
                               rep.combined - rep.upper);
        record(bounds, rep.bounds_pass, over,
               {{"x", x}, {"p", p}, {"q", q}});
        break;
      } catch (const DegenerateNode&) {
        if (attempt > 20) throw;
      }
    }
  }
  return {rat, bounds};
}

// --- chambers: phase independence of the rational discriminant ---

std::vector<Identity> suite_chambers(long long n, std::uint64_t seed) {
  Identity id{"discriminant-phase-independence"};
  std::uint64_t s = seed;
  for (long long i = 0; i < n; ++i) {
    double lambda = 0.2 + 2.8 * uniform01(s);
    long long q = 2 + (long long)(splitmix64(s) % 39);
    long long p = q == 2 ? 1 : random_coprime(q, s);
    double bound = spectrum_bound(lambda);
    double energy = (2.0 * uniform01(s) - 1.0) * bound;
    json at{{"lambda", lambda}, {"p", p}, {"q", q}, {"E", energy}};
    try {
      auto probe = spectrum::discriminant_probe(lambda, p, q, energy);
      record(id, true,
             probe.spread / std::max(1.0, std::abs(probe.value)), at);
    } catch (const ThetaDependenceDetected&) {
      record(id, false, 1.0, at);
    }
  }
  return {id};
}

// --- cramer: closed-form Green entries against a dense solve ---

std::vector<double> dense_column(const localization::TruncatedOperator& op,
                                 double energy, long long y) {
  const long long n = op.dimension();
  std::vector<double> a(std::size_t(n * n), 0.0), g(std::size_t(n), 0.0);
  for (long long i = 0; i < n; ++i) {
    a[std::size_t(i * n + i)] = op.diagonal(op.lo + i) - energy;
    if (i + 1 < n) {
      a[std::size_t(i * n + i + 1)] = 1.0;
      a[std::size_t((i + 1) * n + i)] = 1.0;
    }
  }
  g[std::size_t(y - op.lo)] = 1.0;
  for (long long k = 0; k < n; ++k) {
    long long piv = k;
    for (long long r = k + 1; r < n; ++r)
      if (std::abs(a[std::size_t(r * n + k)]) >
          std::abs(a[std::size_t(piv * n + k)]))
        piv = r;
    if (piv != k) {
      for (long long c = k; c < n; ++c)
        std::swap(a[std::size_t(k * n + c)], a[std::size_t(piv * n + c)]);
      std::swap(g[std::size_t(k)], g[std::size_t(piv)]);
    }
    double d = a[std::size_t(k * n + k)];
    for (long long r = k + 1; r < n; ++r) {
      double f = a[std::size_t(r * n + k)] / d;
      if (f == 0.0) continue;
      for (long long c = k; c < n; ++c)
        a[std::size_t(r * n + c)] -= f * a[std::size_t(k * n + c)];
      g[std::size_t(r)] -= f * g[std::size_t(k)];
    }
  }
  for (long long i = n - 1; i >= 0; --i) {
    double acc = g[std::size_t(i)];
    for (long long c = i + 1; c < n; ++c)
      acc -= a[std::size_t(i * n + c)] * g[std::size_t(c)];
    g[std::size_t(i)] = acc / a[std::size_t(i * n + i)];
  }
  return g;
}

double min_eig_distance(const localization::TruncatedOperator& op, double e) {
  double best = 1e300;
  for (double v : localization::eigenvalues(op))
    best = std::min(best, std::abs(v - e));
  return best;
}

std::vector<Identity> suite_cramer(long long n, std::uint64_t seed) {
  Identity id{"green-cramer-vs-dense"};
  std::uint64_t s = seed;
  for (long long i = 0; i < n; ++i) {
    for (;;) {
      long long size = 2 + (long long)(splitmix64(s) % 29);
      long long lo = -(long long)(splitmix64(s) % 50);
      long long hi = lo + size - 1;
      double lambda = 0.3 + 2.7 * uniform01(s);
      double theta = uniform01(s);
      OperatorParams p{lambda, kGolden, theta, 0.0};
      localization::TruncatedOperator op{p, lo, hi};
      double energy =
          (2.0 * uniform01(s) - 1.0) * (spectrum_bound(lambda) + 1.0);
      if (min_eig_distance(op, energy) < 1e-3) continue;
      p.energy = energy;
      long long x = lo + (long long)(splitmix64(s) % (std::uint64_t)size);
      long long y = lo + (long long)(splitmix64(s) % (std::uint64_t)size);
      double want = dense_column(op, energy, y)[std::size_t(x - lo)];
      double got = localization::green_function(p, lo, hi, x, y);
      double err = std::abs(got - want) / (1.0 + std::abs(want));
      record(id, err <= 1e-8, err,
             {{"lambda", lambda}, {"lo", lo}, {"hi", hi}, {"x", x},
              {"y", y}, {"E", energy}});
      break;
    }
  }
  return {id};
}

// --- duality: Sigma(lambda) = lambda Sigma(1/lambda) across fractions ---

std::vector<Identity> suite_duality(const std::vector<double>& lambdas,
                                    long long qmax) {
  Identity id{"spectra-coupling-duality"};
  std::vector<std::pair<long long, long long>> fr{{0, 1}};
  for (long long q = 2; q <= qmax; ++q)
    for (long long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) fr.push_back({p, q});
  struct Case {
    double lambda;
    long long p, q;
    double h = 0.0;
  };
  std::vector<Case> cases;
  for (double l : lambdas)
    for (auto [p, q] : fr) cases.push_back({l, p, q});
  parallel_for(cases.size(), [&](std::size_t i) {
    cases[i].h = spectrum::spectra_duality_check(cases[i].lambda, cases[i].p,
                                                 cases[i].q)
                     .hausdorff;
  });
  for (const auto& c : cases)
    record(id, c.h <= 1e-8, c.h,
           {{"lambda", c.lambda}, {"p", c.p}, {"q", c.q}});
  return {id};
}

// --- herman: quadrature of the determinant integral against k ln lambda ---

std::vector<Identity> suite_herman(const std::vector<double>& lambdas,
                                   long long n, std::uint64_t seed) {
  Identity id{"determinant-integral-lower-bound"};
  std::uint64_t s = seed;
  const long long ks[] = {10, 20, 50};
  for (double lambda : lambdas) {
    for (long long i = 0; i < n; ++i) {
      double energy = (2.0 * uniform01(s) - 1.0) * spectrum_bound(lambda);
      for (long long k : ks) {
        auto rep =
            cocycle::herman_bound_check(lambda, kGolden, energy, k, 2048);
        double margin_per_k = rep.margin / double(k);
        record(id, margin_per_k >= -0.05, -margin_per_k,
               {{"lambda", lambda}, {"E", energy}, {"k", k},
                {"estimate", rep.estimate}});
      }
    }
  }
  return {id};
}

// --- poi: boundary reconstruction of eigenvalue-equation solutions ---

std::vector<Identity> suite_poi(long long n, std::uint64_t seed) {
  Identity id{"resolvent-boundary-reconstruction"};
  std::uint64_t s = seed;
  for (long long i = 0; i < n; ++i) {
    for (;;) {
      long long size = 4 + (long long)(splitmix64(s) % 37);
      long long lo = -(long long)(splitmix64(s) % 60);
      long long hi = lo + size - 1;
      double lambda = 0.3 + 2.7 * uniform01(s);
      double theta = uniform01(s);
      OperatorParams p{lambda, kGolden, theta, 0.0};
      localization::TruncatedOperator op{p, lo, hi};
      double energy =
          (2.0 * uniform01(s) - 1.0) * (spectrum_bound(lambda) + 1.0);
      if (min_eig_distance(op, energy) < 1e-3) continue;
      p.energy = energy;
      double psi_a = 2.0 * uniform01(s) - 1.0;
      double psi_b = 2.0 * uniform01(s) - 1.0;
      double res = localization::poisson_residual(p, lo, hi, psi_a, psi_b);
      record(id, res <= 1e-8, res,
             {{"lambda", lambda}, {"lo", lo}, {"hi", hi}, {"E", energy}});
      break;
    }
  }
  return {id};
}

struct VerifyOpts {
  IoOpts io;
  std::string suite;
  long long qmax = 0;
  long long n = 0;
  unsigned long long seed = 1;
  std::vector<double> lambdas;
};

}  // namespace

void register_verify(CLI::App& app, std::vector<Runner>& out) {
  auto o = std::make_shared<VerifyOpts>();
  auto* c = app.add_subcommand(
      "verify", "Self-contained identity suites with a JSON report");
  c->add_option("--suite", o->suite, "trig|chambers|cramer|duality|herman|poi")
      ->required();
  c->add_option("--qmax", o->qmax, "Denominator bound (trig, duality)");
  c->add_option("--n", o->n, "Instance count (chambers, cramer, herman, poi)");
  c->add_option("--seed", o->seed, "Instance generator seed");
  c->add_option("--lambda", o->lambdas,
                "Couplings (duality, herman; default 2,3)")
      ->delimiter(',');
  add_io(c, o->io, "json");
  out.push_back({c, [o] {
                   check_format(o->io, "json");
                   std::vector<double> ls =
                       o->lambdas.empty() ? std::vector<double>{2.0, 3.0}
                                          : o->lambdas;
                   json params{{"suite", o->suite}, {"seed", o->seed}};
                   std::vector<Identity> ids;
                   if (o->suite == "trig") {
                     long long qmax = o->qmax > 0 ? o->qmax : 200;
                     params["qmax"] = qmax;
                     ids = suite_trig(qmax, o->seed);
                   } else if (o->suite == "chambers") {
                     long long n = o->n > 0 ? o->n : 50;
                     params["n"] = n;
                     ids = suite_chambers(n, o->seed);
                   } else if (o->suite == "cramer") {
                     long long n = o->n > 0 ? o->n : 200;
                     params["n"] = n;
                     ids = suite_cramer(n, o->seed);
                   } else if (o->suite == "duality") {
                     long long qmax = o->qmax > 0 ? o->qmax : 12;
                     params["qmax"] = qmax;
                     params["lambda"] = ls;
                     ids = suite_duality(ls, qmax);
                   } else if (o->suite == "herman") {
                     long long n = o->n > 0 ? o->n : 10;
                     params["n"] = n;
                     params["lambda"] = ls;
                     ids = suite_herman(ls, n, o->seed);
                   } else if (o->suite == "poi") {
                     long long n = o->n > 0 ? o->n : 50;
                     params["n"] = n;
                     ids = suite_poi(n, o->seed);
                   } else {
                     throw std::invalid_argument("unknown suite: " + o->suite);
                   }
                   bool all = true;
                   json idj = json::array();
                   for (const auto& id : ids) {
                     all = all && id.passed == id.checked;
                     idj.push_back({{"name", id.name},
                                    {"checked", id.checked},
                                    {"passed", id.passed},
                                    {"worst_deviation", id.worst},
                                    {"worst_at", id.worst_at}});
                   }
                   json j;
                   j["suite"] = o->suite;
                   j["parameters"] = params;
                   j["identities"] = idj;
                   j["pass"] = all;
                   emit_json(o->io, j);
                   return all ? 0 : 2;
                 }});
}

}  // namespace amo::cli
