#include "common.hpp"

#include <climits>
#include <cmath>

#include "emit.hpp"

namespace amo::cli {

void add_io(CLI::App* cmd, IoOpts& io, const std::string& natural) {
  io.format = natural;
  cmd->add_option("--out,--output-path", io.out,
                  "Output file (stdout when omitted)");
  cmd->add_option("--format", io.format, "Output format")
      ->default_str(natural);
}

void check_format(const IoOpts& io, const std::string& natural) {
  if (io.format != natural)
    throw std::invalid_argument("this command emits " + natural +
                                ", not " + io.format);
}

void emit_text(const IoOpts& io, const std::string& s) {
  Sink sink(io.out);
  sink.write(s);
  sink.close();
}

void emit_json(const IoOpts& io, const json& j) {
  emit_text(io, j.dump(2) + "\n");
}

void AlphaOption::attach(CLI::App* cmd) {
  opt_alpha = cmd->add_option("--alpha", alpha, "Frequency as a real number");
  opt_p = cmd->add_option("--alpha-p", p, "Frequency numerator");
  opt_q = cmd->add_option("--alpha-q", q, "Frequency denominator");
  opt_cf = cmd->add_option("--cf-terms", cf_terms,
                           "Frequency as partial quotients a0,a1,...")
               ->delimiter(',');
  cmd->add_flag("--golden", golden, "Golden mean frequency (the default)");
  cmd->add_option("--terms", terms, "Expansion depth for non-rational input");
  opt_alpha->excludes(opt_p)->excludes(opt_q)->excludes(opt_cf);
  opt_cf->excludes(opt_p)->excludes(opt_q);
  opt_p->needs(opt_q);
  opt_q->needs(opt_p);
}

AlphaOption::Resolved AlphaOption::resolve(unsigned precision_bits) const {
  Resolved r;
  if (opt_p && opt_p->count() > 0) {
    if (q <= 0) throw std::invalid_argument("--alpha-q must be positive");
    r.cf = arith::expand_rational(BigInt(p), BigInt(q));
    r.value = double(p) / double(q);
    r.rational = true;
    r.p = p;
    r.q = q;
    return r;
  }
  if (opt_cf && opt_cf->count() > 0) {
    std::vector<BigInt> as(cf_terms.begin(), cf_terms.end());
    r.cf = arith::from_partial_quotients(as, precision_bits);
    r.value = static_cast<double>(r.cf.value);
    return r;
  }
  if (opt_alpha && opt_alpha->count() > 0) {
    r.cf = arith::expand_real(alpha, std::size_t(terms), precision_bits);
    r.value = alpha;
    return r;
  }
  r.cf = arith::expand_golden(std::size_t(terms), precision_bits);
  r.value = static_cast<double>(r.cf.value);
  return r;
}

json big_json(const BigInt& v) {
  if (v >= BigInt(LLONG_MIN) && v <= BigInt(LLONG_MAX))
    return v.convert_to<long long>();
  return v.str();
}

json finite_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace amo::cli
