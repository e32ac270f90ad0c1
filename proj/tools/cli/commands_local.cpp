#include <algorithm>
#include <cmath>
#include <set>

#include "amo/duality.hpp"
#include "amo/errors.hpp"
#include "amo/localization.hpp"
#include "amo/parallel.hpp"
#include "amo/params.hpp"
#include "common.hpp"
#include "emit.hpp"

namespace amo::cli {

namespace {

struct LocalizeOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double theta = 0.0;
  long long box = 500;
  long long n_states = 20;
  unsigned long long seed = 1;
};

struct GreenOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double theta = 0.0;
  double energy = 0.0;
  long long lo = 0, hi = 0, x = 0, y = 0;
};

struct RegularityOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double theta = 0.0;
  double energy = 0.0;
  long long y = 0;
  long long k = 0;
  double m = 0.0;
};

struct DualOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double theta = 0.3;
  long long box = 400;
  long long K = 80;
  long long state_offset = 0;
  long long grid = 512;
};

// Distinct ascending eigenvalue indices from the middle third of the window
// spectrum, deterministic in the seed.
std::vector<long long> middle_states(long long dim, long long n,
                                     unsigned long long seed) {
  long long lo = dim / 3, span = dim / 3;
  if (span < 1) span = 1;
  if (n > span) n = span;
  std::set<long long> pick;
  std::uint64_t s = seed;
  while ((long long)pick.size() < n)
    pick.insert(lo + (long long)(splitmix64(s) % (std::uint64_t)span));
  return {pick.begin(), pick.end()};
}

}  // namespace

void register_local(CLI::App& app, std::vector<Runner>& out) {
  {
    auto o = std::make_shared<LocalizeOpts>();
    auto* c = app.add_subcommand(
        "localize", "Decay-slope fits of box eigenvectors (CSV)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    c->add_option("--box", o->box, "Half width: window is [-box, box]");
    c->add_option("--n-states", o->n_states, "States sampled mid-spectrum");
    c->add_option("--seed", o->seed, "State sampling seed");
    add_io(c, o->io, "csv");
    out.push_back({c, [o] {
                     check_format(o->io, "csv");
                     if (o->box < 2 || o->n_states < 1)
                       throw std::invalid_argument(
                           "--box must be >= 2 and --n-states >= 1");
                     auto al = o->a.resolve();
                     localization::TruncatedOperator op{
                         {o->coupling, al.value, o->theta, 0.0},
                         -o->box,
                         o->box};
                     auto idx = middle_states(op.dimension(), o->n_states,
                                              o->seed);
                     std::vector<std::string> rows(idx.size());
                     parallel_for(idx.size(), [&](std::size_t i) {
                       auto es = localization::eigen_tridiagonal(op, idx[i],
                                                                 idx[i]);
                       const auto& v = es.vectors[0];
                       long long peak =
                           std::max_element(v.begin(), v.end(),
                                            [](double a, double b) {
                                              return std::abs(a) <
                                                     std::abs(b);
                                            }) -
                           v.begin();
                       double slope = std::nan(""), r2 = std::nan("");
                       long long center = op.lo + peak;
                       try {
                         auto fit = localization::decay_rate(v);
                         slope = fit.slope;
                         r2 = fit.r2;
                         center = op.lo + fit.center;
                       } catch (const NoDecayDetected&) {
                         // row keeps nan slope/r2; the state is extended
                       }
                       rows[i] = std::to_string(idx[i]) + "," +
                                 num17(es.values[0]) + "," + num17(slope) +
                                 "," + num17(r2) + "," +
                                 std::to_string(center) + "\n";
                     });
                     std::string csv = "state_index,E,slope,r2,center\n";
                     for (const auto& r : rows) csv += r;
                     emit_text(o->io, csv);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<GreenOpts>();
    auto* c = app.add_subcommand(
        "green", "Green's function entry of a window resolvent (JSON)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    c->add_option("--energy", o->energy, "Energy")->required();
    c->add_option("--lo", o->lo, "Window start")->required();
    c->add_option("--hi", o->hi, "Window end")->required();
    c->add_option("--x", o->x, "Row site")->required();
    c->add_option("--y", o->y, "Column site")->required();
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams p{o->coupling, al.value, o->theta,
                                      o->energy};
                     auto lg = localization::green_log(p, o->lo, o->hi, o->x,
                                                       o->y);
                     double value = localization::green_function(
                         p, o->lo, o->hi, o->x, o->y);
                     json j;
                     j["lambda"] = o->coupling;
                     j["alpha"] = al.value;
                     j["theta"] = o->theta;
                     j["E"] = o->energy;
                     j["lo"] = o->lo;
                     j["hi"] = o->hi;
                     j["x"] = o->x;
                     j["y"] = o->y;
                     j["value"] = value;
                     j["sign"] = lg.sign;
                     j["log_abs"] = lg.log_abs;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<RegularityOpts>();
    auto* c = app.add_subcommand(
        "regularity",
        "Regular/Singular classification of a site by Green decay (JSON)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    c->add_option("--energy", o->energy, "Energy")->required();
    c->add_option("--y", o->y, "Site to classify")->required();
    c->add_option("--k", o->k, "Window length scale")->required();
    c->add_option("--m", o->m, "Decay rate in the defining inequality")
        ->required();
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams p{o->coupling, al.value, o->theta,
                                      o->energy};
                     auto rep = localization::regularity_classify(p, o->y,
                                                                  o->k, o->m);
                     json j;
                     j["y"] = rep.y;
                     j["k"] = rep.k;
                     j["m"] = rep.m;
                     j["classification"] =
                         rep.classification ==
                                 localization::Regularity::Regular
                             ? "Regular"
                             : "Singular";
                     j["has_witness"] = rep.has_witness;
                     j["witness_lo"] = rep.witness_lo;
                     j["witness_hi"] = rep.witness_hi;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<DualOpts>();
    auto* c = app.add_subcommand(
        "dual",
        "Dual cocycle solution from a box eigenvector, with det M constancy");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    c->add_option("--box", o->box, "Half width: window is [-box, box]");
    c->add_option("--K", o->K, "Fourier truncation of the dual solution");
    c->add_option("--state-offset", o->state_offset,
                  "Eigenvalue index offset from the middle of the window");
    c->add_option("--grid", o->grid, "Evaluation grid for the probes");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams base{o->coupling, al.value, o->theta, 0.0};
                     localization::TruncatedOperator op{base, -o->box, o->box};
                     long long mid = op.dimension() / 2 + o->state_offset;
                     if (mid < 0 || mid >= op.dimension())
                       throw std::invalid_argument(
                           "--state-offset leaves the window spectrum");
                     auto es = localization::eigen_tridiagonal(op, mid, mid);
                     OperatorParams pe = base;
                     pe.energy = es.values[0];
                     auto pair = duality::build_dual(es.vectors[0], -o->box,
                                                     pe, o->K);
                     double res = duality::duality_residual(pair, o->grid);
                     auto dm = duality::det_M_constancy(pair, o->grid);
                     json j;
                     j["lambda"] = o->coupling;
                     j["E"] = pe.energy;
                     j["theta"] = o->theta;
                     j["residual"] = res;
                     j["c"] = dm.c;
                     j["variation"] = dm.variation;
                     j["sign"] = dm.sign;
                     j["degenerate_flag"] = dm.degenerate;
                     if (dm.degenerate) {
                       j["k_fit"] = dm.k_fit;
                       j["fit_distance"] = dm.fit_distance;
                     }
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
}

}  // namespace amo::cli
