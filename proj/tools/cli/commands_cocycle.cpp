#include "amo/cocycle.hpp"
#include "amo/parallel.hpp"
#include "amo/params.hpp"
#include "amo/spectrum.hpp"
#include "cache.hpp"
#include "common.hpp"
#include "emit.hpp"

namespace amo::cli {

namespace {

struct SweepOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double theta = 0.0;
  std::vector<double> energies;
  double emin = 0.0, emax = 0.0;
  long long ne = 0;
  long long steps = 100000;
  int phases = 8;
  unsigned long long seed = 1;
};

void add_energy_flags(CLI::App* c, SweepOpts& o) {
  c->add_option("--energy", o.energies, "Energies (comma-separated)")
      ->delimiter(',');
  c->add_option("--emin", o.emin, "Energy grid start");
  c->add_option("--emax", o.emax, "Energy grid end");
  c->add_option("--ne", o.ne, "Energy grid size");
}

std::vector<double> energy_list(const SweepOpts& o) {
  std::vector<double> es = o.energies;
  for (long long i = 0; i < o.ne; ++i)
    es.push_back(o.ne == 1 ? o.emin
                           : o.emin + double(i) * (o.emax - o.emin) /
                                          double(o.ne - 1));
  if (es.empty())
    throw std::invalid_argument(
        "no energies: pass --energy or --emin/--emax/--ne");
  return es;
}

struct ThoulessOpts {
  SweepOpts s;
  long long p = 0, q = 0;
  double exclusion_tol = 1e-9;
};

}  // namespace

void register_cocycle(CLI::App& app, std::vector<Runner>& out,
                      const GlobalFlags* g) {
  {
    auto o = std::make_shared<SweepOpts>();
    auto* c = app.add_subcommand(
        "lyapunov", "Lyapunov exponent / rotation number sweep (CSV)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    add_energy_flags(c, *o);
    c->add_option("--steps", o->steps, "Cocycle iterations per estimate");
    c->add_option("--phases", o->phases, "Phase count for the average");
    c->add_option("--seed", o->seed, "Phase sequence seed");
    add_io(c, o->io, "csv");
    out.push_back({c, [o] {
                     check_format(o->io, "csv");
                     auto al = o->a.resolve();
                     auto es = energy_list(*o);
                     std::vector<std::string> rows(es.size());
                     parallel_for(es.size(), [&](std::size_t i) {
                       OperatorParams p{o->coupling, al.value, o->theta,
                                        es[i]};
                       auto ly = cocycle::lyapunov_exponent(
                           p, o->steps, o->phases, o->seed);
                       auto rot =
                           cocycle::fibered_rotation_number(p, o->steps);
                       rows[i] = num17(es[i]) + "," + num17(ly.value) + "," +
                                 num17(rot.rho) + "," + num17(rot.ids) + "," +
                                 num17(ly.spread) + "\n";
                     });
                     std::string csv = "E,L,rho,ids,spread\n";
                     for (const auto& r : rows) csv += r;
                     emit_text(o->io, csv);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<SweepOpts>();
    auto* c = app.add_subcommand(
        "rotation", "Fibered rotation number at one energy (JSON)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    c->add_option("--energy", o->energies, "Energy")->required();
    c->add_option("--steps", o->steps, "Cocycle iterations");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams p{o->coupling, al.value, o->theta,
                                      o->energies.at(0)};
                     auto rot = cocycle::fibered_rotation_number(p, o->steps);
                     json j;
                     j["lambda"] = o->coupling;
                     j["alpha"] = al.value;
                     j["theta"] = o->theta;
                     j["E"] = p.energy;
                     j["rho"] = rot.rho;
                     j["ids"] = rot.ids;
                     j["raw_mean"] = rot.raw_mean;
                     j["n_steps"] = rot.n_steps;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<SweepOpts>();
    auto* c = app.add_subcommand(
        "ids", "Integrated density of states at one energy (JSON)");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase");
    c->add_option("--energy", o->energies, "Energy")->required();
    c->add_option("--steps", o->steps, "Cocycle iterations");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams p{o->coupling, al.value, o->theta,
                                      o->energies.at(0)};
                     auto rot = cocycle::fibered_rotation_number(p, o->steps);
                     json j;
                     j["lambda"] = o->coupling;
                     j["alpha"] = al.value;
                     j["theta"] = o->theta;
                     j["E"] = p.energy;
                     j["ids"] = rot.ids;
                     j["rho"] = rot.rho;
                     j["n_steps"] = rot.n_steps;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<ThoulessOpts>();
    auto* c = app.add_subcommand(
        "thouless",
        "Lyapunov value against the Thouless integral of a rational DOS");
    c->add_option("--lambda", o->s.coupling, "Coupling")->required();
    o->s.a.attach(c);
    c->add_option("--theta", o->s.theta, "Phase");
    c->add_option("--p", o->p, "DOS approximant numerator")->required();
    c->add_option("--q", o->q, "DOS approximant denominator")->required();
    add_energy_flags(c, o->s);
    c->add_option("--steps", o->s.steps, "Cocycle iterations per estimate");
    c->add_option("--phases", o->s.phases, "Phase count for the average");
    c->add_option("--seed", o->s.seed, "Phase sequence seed");
    c->add_option("--exclusion-tol", o->exclusion_tol,
                  "Atom exclusion radius around E");
    add_io(c, o->s.io, "json");
    out.push_back({c, [o, g] {
                     check_format(o->s.io, "json");
                     auto al = o->s.a.resolve();
                     BandCache cache(resolve_cache_dir(g->cache_dir));
                     auto bands =
                         cache.band_edges(o->s.coupling, o->p, o->q);
                     auto atoms = spectrum::dos_atoms(bands);
                     auto es = energy_list(o->s);
                     std::vector<json> results(es.size());
                     parallel_for(es.size(), [&](std::size_t i) {
                       OperatorParams p{o->s.coupling, al.value, o->s.theta,
                                        es[i]};
                       auto ly = cocycle::lyapunov_exponent(
                           p, o->s.steps, o->s.phases, o->s.seed);
                       auto rep = cocycle::thouless_residual(
                           ly.value, atoms.positions, atoms.weights, es[i],
                           o->exclusion_tol);
                       json r;
                       r["E"] = es[i];
                       r["lyapunov"] = rep.lyapunov;
                       r["thouless_sum"] = rep.thouless_sum;
                       r["residual"] = rep.residual;
                       r["excluded_atoms"] = rep.excluded_atoms;
                       r["singular"] = rep.singular;
                       results[i] = std::move(r);
                     });
                     json j;
                     j["lambda"] = o->s.coupling;
                     j["alpha"] = al.value;
                     j["p"] = o->p;
                     j["q"] = o->q;
                     j["n_atoms"] = atoms.positions.size();
                     j["results"] = results;
                     emit_json(o->s.io, j);
                     return 0;
                   }});
  }
}

}  // namespace amo::cli
