#include <complex>

#include "amo/mfunction.hpp"
#include "amo/params.hpp"
#include "common.hpp"

namespace amo::cli {

namespace {

struct MfunOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double x = 0.0;
  double energy = 0.0;
  double im = 0.0;
  long long n = 40000;
};

struct ReduceOpts {
  AlphaOption a;
  IoOpts io;
  double coupling = 0.0;
  double energy = 0.0;
  long long K = 32;
  long long n = 40000;
  long long grid = 256;
  long long k_min = 8;
};

}  // namespace

void register_mfun(CLI::App& app, std::vector<Runner>& out) {
  {
    auto o = std::make_shared<MfunOpts>();
    auto* c = app.add_subcommand(
        "mfun",
        "Half-line m-function: iterated at Im E > 0, extrapolated at Im E = 0");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--x", o->x, "Phase point");
    c->add_option("--energy", o->energy, "Re E")->required();
    c->add_option("--im", o->im, "Im E (0 selects the boundary limit)");
    c->add_option("--n", o->n, "Iteration depth / convergence budget");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     if (o->im < 0)
                       throw std::invalid_argument("--im must be >= 0");
                     auto al = o->a.resolve();
                     json j;
                     j["lambda"] = o->coupling;
                     j["alpha"] = al.value;
                     j["x"] = o->x;
                     j["energy_re"] = o->energy;
                     j["energy_im"] = o->im;
                     OperatorParams p{o->coupling, al.value, 0.0, o->energy};
                     if (o->im > 0) {
                       auto m = mfunction::m_iterate(
                           p, {o->energy, o->im}, {o->x, 0.0}, o->n);
                       j["m_re"] = m.m.real();
                       j["m_im"] = m.m.imag();
                       j["invariance_residual"] = m.invariance_residual;
                       j["n_steps"] = m.n_steps;
                     } else {
                       auto b = mfunction::boundary_m(p, o->x, o->n);
                       j["m_re"] = b.m.real();
                       j["m_im"] = b.m.imag();
                       j["instability"] = b.instability;
                       j["n_steps"] = o->n;
                     }
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<ReduceOpts>();
    auto* c = app.add_subcommand(
        "reduce",
        "Conjugate the cocycle toward a constant rotation and measure the "
        "defect");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--energy", o->energy, "Energy")->required();
    c->add_option("--K", o->K, "Fourier truncation of the conjugation");
    c->add_option("--n", o->n, "Boundary-m convergence budget");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams p{o->coupling, al.value, 0.0, o->energy};
                     auto rep = mfunction::reducibility_probe(p, o->K, o->n);
                     json j;
                     j["E"] = o->energy;
                     j["theta_E"] = rep.theta;
                     j["residual"] = rep.residual;
                     j["dropped_modes"] = rep.dropped_modes;
                     j["a_truncated"] = finite_json(rep.a_truncated);
                     j["K"] = rep.K;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<ReduceOpts>();
    auto* c = app.add_subcommand(
        "adecay",
        "Growth exponent of the cohomological solution for the rotation "
        "angle");
    c->add_option("--lambda", o->coupling, "Coupling")->required();
    o->a.attach(c);
    c->add_option("--energy", o->energy, "Energy")->required();
    c->add_option("--grid", o->grid, "Angle grid size (power of two)");
    c->add_option("--n", o->n, "Boundary-m convergence budget");
    c->add_option("--kmin", o->k_min, "Smallest mode entering the exponent");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto al = o->a.resolve();
                     OperatorParams p{o->coupling, al.value, 0.0, o->energy};
                     auto ps = mfunction::rotation_angle_phi(p, o->grid, o->n);
                     auto de = mfunction::decay_exponent_a(ps.phi_hat,
                                                           al.value, o->k_min);
                     json j;
                     j["E"] = o->energy;
                     j["value"] = finite_json(de.value);
                     j["k_at"] = de.k_at;
                     j["theta"] = ps.theta;
                     j["residual"] = ps.residual;
                     j["instability"] = ps.instability;
                     j["grid_size"] = ps.grid_size;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
}

}  // namespace amo::cli
