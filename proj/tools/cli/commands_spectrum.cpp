#include <cstdio>
#include <numeric>

#include "amo/spectrum.hpp"
#include "cache.hpp"
#include "common.hpp"
#include "emit.hpp"
#include "svg.hpp"

namespace amo::cli {

namespace {

struct FractionOpts {
  IoOpts io;
  double coupling = 0.0;
  long long p = 0, q = 0;
};

void add_fraction_flags(CLI::App* c, FractionOpts& o) {
  c->add_option("--lambda", o.coupling, "Coupling")->required();
  c->add_option("--p", o.p, "Frequency numerator")->required();
  c->add_option("--q", o.q, "Frequency denominator")->required();
}

void cache_note(const BandCache& c) {
  if (!c.enabled()) return;
  std::fprintf(stderr,
               "cache: %lld hits, %lld misses, %lld corrupt, "
               "%lld spot-checks (%lld failed)\n",
               c.hits, c.misses, c.corrupt, c.spot_checks, c.spot_failures);
}

// Reduced fractions in [0, 1) with denominator at most q_max, ordered by
// (q, p): 0/1 first, then the coprime p for each q.
std::vector<std::pair<long long, long long>> reduced_fractions(
    long long q_max) {
  std::vector<std::pair<long long, long long>> fr{{0, 1}};
  for (long long q = 2; q <= q_max; ++q)
    for (long long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) fr.push_back({p, q});
  return fr;
}

struct GapBoundOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double eps = 0.1;
  long long n_lo = 3, n_hi = 8;
};

struct ButterflyOpts {
  IoOpts io;
  double coupling = 0.0;
  long long q_max = 0;
};

}  // namespace

void register_spectrum(CLI::App& app, std::vector<Runner>& out,
                       const GlobalFlags* g) {
  {
    auto o = std::make_shared<FractionOpts>();
    auto* c = app.add_subcommand("bands",
                                 "Band intervals of a rational spectrum (CSV)");
    add_fraction_flags(c, *o);
    add_io(c, o->io, "csv");
    out.push_back({c, [o, g] {
                     check_format(o->io, "csv");
                     BandCache cache(resolve_cache_dir(g->cache_dir));
                     auto bl = cache.band_edges(o->coupling, o->p, o->q);
                     std::string csv = "lambda,p,q,band_index,E_low,E_high\n";
                     for (std::size_t i = 0; i < bl.bands.size(); ++i)
                       csv += num17(o->coupling) + "," +
                              std::to_string(o->p) + "," +
                              std::to_string(o->q) + "," + std::to_string(i) +
                              "," + num17(bl.bands[i].lo) + "," +
                              num17(bl.bands[i].hi) + "\n";
                     emit_text(o->io, csv);
                     cache_note(cache);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<FractionOpts>();
    auto label = std::make_shared<double>(-1.0);
    auto* c = app.add_subcommand(
        "gaps", "Bounded gaps with ids labels of a rational spectrum (CSV)");
    add_fraction_flags(c, *o);
    auto* lopt = c->add_option("--label-alpha", *label,
                               "Frequency for the k alpha labelling "
                               "(default: p/q itself)");
    add_io(c, o->io, "csv");
    out.push_back({c, [o, g, label, lopt] {
                     check_format(o->io, "csv");
                     BandCache cache(resolve_cache_dir(g->cache_dir));
                     auto bl = cache.band_edges(o->coupling, o->p, o->q);
                     double la = lopt->count() ? *label
                                               : double(o->p) / double(o->q);
                     auto cat = spectrum::gap_catalog(bl, la);
                     std::string csv =
                         "lambda,p,q,gap_index,a,b,size,ids_num,ids_den,"
                         "label_k,label_dist\n";
                     for (const auto& gp : cat.gaps)
                       csv += num17(o->coupling) + "," +
                              std::to_string(o->p) + "," +
                              std::to_string(o->q) + "," +
                              std::to_string(gp.index) + "," + num17(gp.lo) +
                              "," + num17(gp.hi) + "," + num17(gp.size) +
                              "," + std::to_string(gp.ids_num) + "," +
                              std::to_string(gp.ids_den) + "," +
                              std::to_string(gp.label_k) + "," +
                              num17(gp.label_dist) + "\n";
                     emit_text(o->io, csv);
                     cache_note(cache);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<GapBoundOpts>();
    auto* c = app.add_subcommand(
        "gap-bound",
        "Minimal gap against e^{-eps q} lambda^{q/2} along convergents (CSV)");
    c->add_option("--lambda", o->coupling, "Coupling in (0, 1]")->required();
    o->a.attach(c);
    c->add_option("--eps", o->eps, "Exponential slack");
    c->add_option("--n-lo", o->n_lo, "First convergent index");
    c->add_option("--n-hi", o->n_hi, "Last convergent index");
    add_io(c, o->io, "csv");
    out.push_back({c, [o] {
                     check_format(o->io, "csv");
                     auto al = o->a.resolve();
                     auto scales = spectrum::gap_bound_check(
                         o->coupling, al.cf, std::size_t(o->n_lo),
                         std::size_t(o->n_hi), o->eps);
                     std::string csv = "p,q,min_gap,bound,log_margin,pass\n";
                     for (const auto& s : scales)
                       csv += std::to_string(s.p) + "," +
                              std::to_string(s.q) + "," + num17(s.min_gap) +
                              "," + num17(s.bound) + "," +
                              num17(s.log_margin) + "," +
                              (s.pass ? "1" : "0") + "\n";
                     emit_text(o->io, csv);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<ButterflyOpts>();
    auto* c = app.add_subcommand(
        "butterfly", "Band segments over every reduced fraction (SVG)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    c->add_option("--qmax", o->q_max, "Largest denominator")->required();
    c->add_option("--svg,--out,--output-path", o->io.out,
                  "Output file (stdout when omitted)");
    c->add_option("--format", o->io.format, "Output format")
        ->default_str("svg");
    o->io.format = "svg";
    out.push_back({c, [o, g] {
                     check_format(o->io, "svg");
                     if (o->q_max < 1)
                       throw std::invalid_argument("--qmax must be >= 1");
                     BandCache cache(resolve_cache_dir(g->cache_dir));
                     auto fr = reduced_fractions(o->q_max);
                     std::vector<spectrum::ButterflyTile> tiles;
                     bool assembled = false;
                     if (cache.enabled()) {
                       std::vector<std::optional<spectrum::BandList>> got(
                           fr.size());
                       bool all = true;
                       for (std::size_t i = 0; i < fr.size(); ++i) {
                         got[i] =
                             cache.peek(o->coupling, fr[i].first,
                                        fr[i].second);
                         all = all && got[i].has_value();
                       }
                       if (all) {
                         tiles.resize(fr.size());
                         for (std::size_t i = 0; i < fr.size(); ++i) {
                           tiles[i].p = fr[i].first;
                           tiles[i].q = fr[i].second;
                           tiles[i].bands = std::move(*got[i]);
                         }
                         assembled = true;
                       }
                     }
                     if (!assembled) {
                       tiles = spectrum::butterfly(o->coupling, o->q_max);
                       for (const auto& t : tiles)
                         if (t.error.empty()) cache.put(t.bands);
                     }
                     emit_text(o->io,
                               butterfly_svg(o->coupling, o->q_max, tiles));
                     cache_note(cache);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<FractionOpts>();
    auto* c = app.add_subcommand(
        "dos", "Atomic density-of-states measure of a rational spectrum");
    add_fraction_flags(c, *o);
    add_io(c, o->io, "json");
    out.push_back({c, [o, g] {
                     check_format(o->io, "json");
                     BandCache cache(resolve_cache_dir(g->cache_dir));
                     auto bl = cache.band_edges(o->coupling, o->p, o->q);
                     auto atoms = spectrum::dos_atoms(bl);
                     json j;
                     j["lambda"] = o->coupling;
                     j["p"] = o->p;
                     j["q"] = o->q;
                     j["positions"] = atoms.positions;
                     j["weights"] = atoms.weights;
                     j["max_band_length"] = atoms.max_band_length;
                     emit_json(o->io, j);
                     cache_note(cache);
                     return 0;
                   }});
  }
}

}  // namespace amo::cli
