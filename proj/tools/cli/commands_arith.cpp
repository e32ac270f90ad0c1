#include "amo/continued_fraction.hpp"
#include "common.hpp"

namespace amo::cli {

namespace {

struct CfOpts {
  AlphaOption a;
  IoOpts io;
  unsigned bits = 256;
};

struct ResonanceOpts {
  AlphaOption a;
  IoOpts io;
  unsigned bits = 256;
  std::string k;
  long long scale = -1;
};

struct ThetaScanOpts {
  AlphaOption a;
  IoOpts io;
  unsigned bits = 256;
  std::string theta;
  long long k_max = 0;
  long long s_max = -1;
  double tol = 1e-12;
};

}  // namespace

void register_arith(CLI::App& app, std::vector<Runner>& out) {
  {
    auto o = std::make_shared<CfOpts>();
    auto* c = app.add_subcommand(
        "cf", "Continued fraction expansion with exact convergents");
    o->a.attach(c);
    c->add_option("--precision-bits", o->bits, "Working precision in bits");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto r = o->a.resolve(o->bits);
                     emit_text(o->io, r.cf.to_json() + "\n");
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<CfOpts>();
    auto* c = app.add_subcommand(
        "beta", "Finite-depth estimate of limsup ln(q_{n+1})/q_n");
    o->a.attach(c);
    c->add_option("--precision-bits", o->bits, "Working precision in bits");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto r = o->a.resolve(o->bits);
                     auto b = arith::beta_estimate(r.cf);
                     json j;
                     j["value"] = b.value;
                     j["defined"] = b.defined;
                     j["ratios"] = b.ratios;
                     j["tail_sup"] = b.tail_sup;
                     j["order"] = r.cf.order();
                     j["precision_bits"] = o->bits;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<ResonanceOpts>();
    auto* c = app.add_subcommand(
        "resonance", "Resonant/non-resonant dichotomy for a Fourier mode k");
    o->a.attach(c);
    c->add_option("--k", o->k, "Mode index, decimal (any size)")->required();
    c->add_option("--scale", o->scale, "Pin the scale index instead");
    c->add_option("--precision-bits", o->bits, "Working precision in bits");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     BigInt k;
                     try {
                       k = BigInt(o->k);
                     } catch (const std::exception&) {
                       throw std::invalid_argument("--k is not an integer: " +
                                                   o->k);
                     }
                     auto r = o->a.resolve(o->bits);
                     auto rep =
                         o->scale >= 0
                             ? arith::classify_resonance_at_scale(
                                   k, r.cf, std::size_t(o->scale))
                             : arith::classify_resonance(k, r.cf);
                     json j;
                     j["k"] = big_json(k);
                     j["scale_index"] = rep.scale_index;
                     j["q_scale"] = big_json(rep.q_scale);
                     j["b_n"] = rep.b_n;
                     j["b_next"] = rep.b_next;
                     j["nearest_multiple_distance"] =
                         big_json(rep.nearest_multiple_distance);
                     j["attaining_l"] = big_json(rep.attaining_l);
                     j["resonant"] = rep.resonant;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
  {
    auto o = std::make_shared<ThetaScanOpts>();
    auto* c = app.add_subcommand(
        "theta-scan",
        "Scan |sin 2pi(theta + (k/2) alpha)| < 1/k^2 witnesses");
    o->a.attach(c);
    c->add_option("--theta", o->theta, "Phase, decimal string")->required();
    c->add_option("--kmax", o->k_max, "Largest k scanned")->required();
    c->add_option("--smax", o->s_max, "Branch scan bound (-1: derived)");
    c->add_option("--tol", o->tol, "Branch match tolerance");
    c->add_option("--precision-bits", o->bits, "Working precision in bits");
    add_io(c, o->io, "json");
    out.push_back({c, [o] {
                     check_format(o->io, "json");
                     auto r = o->a.resolve(o->bits);
                     PrecisionGuard guard(o->bits);
                     BigFloat theta(o->theta);
                     auto rep = arith::theta_membership_scan(
                         theta, r.cf.value, o->k_max, o->s_max, o->tol);
                     json ws = json::array();
                     for (const auto& w : rep.witnesses)
                       ws.push_back({{"k", w.k},
                                     {"value", w.value},
                                     {"threshold", w.threshold}});
                     json j;
                     j["theta"] = static_cast<double>(theta);
                     j["alpha"] = static_cast<double>(r.cf.value);
                     j["k_max"] = o->k_max;
                     j["s_max"] = o->s_max;
                     j["tol"] = o->tol;
                     j["witnesses"] = ws;
                     j["branch_half_alpha"] = rep.branch_half_alpha;
                     j["s_half_alpha"] = rep.s_half_alpha;
                     j["dist_half_alpha"] = rep.dist_half_alpha;
                     j["branch_pi_half_alpha"] = rep.branch_pi_half_alpha;
                     j["s_pi_half_alpha"] = rep.s_pi_half_alpha;
                     j["dist_pi_half_alpha"] = rep.dist_pi_half_alpha;
                     emit_json(o->io, j);
                     return 0;
                   }});
  }
}

}  // namespace amo::cli
