#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amo/bigfloat.hpp"
#include "amo/continued_fraction.hpp"

namespace amo::cli {

using nlohmann::json;

// Config file problems: missing/incompatible command, malformed JSON,
// unsupported value shapes. Exits with the validation code.
struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Merges a --config manifest into the argument list: the file's "command"
// becomes the subcommand when none was given, and each other key becomes a
// --key=value token unless the user already passed that flag. args excludes
// the program name.
std::vector<std::string> apply_config(std::vector<std::string> args);

// App-level state shared by the subcommand runners.
struct GlobalFlags {
  std::string cache_dir;  // --cache-dir; AMO_CACHE_DIR / $HOME fallback
  int threads = 0;        // --threads; exported as AMO_THREADS when > 0
};

struct Runner {
  CLI::App* cmd = nullptr;
  std::function<int()> fn;
};

// --out/--output-path and --format. Each command emits one format; asking
// for another is a validation error, not a conversion.
struct IoOpts {
  std::string out;
  std::string format;
};
void add_io(CLI::App* cmd, IoOpts& io, const std::string& natural);
void check_format(const IoOpts& io, const std::string& natural);
void emit_text(const IoOpts& io, const std::string& s);
void emit_json(const IoOpts& io, const json& j);

// Frequency selection: --alpha-p/--alpha-q (exact rational), --cf-terms
// (partial quotients), --alpha (numeric, expanded with interval
// certification), or the default golden mean.
struct AlphaOption {
  double alpha = 0.0;
  long long p = 0;
  long long q = 0;
  std::vector<long long> cf_terms;
  bool golden = false;
  long long terms = 40;

  CLI::Option* opt_alpha = nullptr;
  CLI::Option* opt_p = nullptr;
  CLI::Option* opt_q = nullptr;
  CLI::Option* opt_cf = nullptr;

  void attach(CLI::App* cmd);

  struct Resolved {
    double value = 0.0;
    arith::ContinuedFractionExpansion cf;
    bool rational = false;
    long long p = 0;
    long long q = 1;
  };
  Resolved resolve(unsigned precision_bits = 256) const;
};

// Deterministic 64-bit stream; the same generator the test suites use.
inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
inline double uniform01(std::uint64_t& s) {
  return double(splitmix64(s) >> 11) * 0x1.0p-53;
}

// BigInt to JSON: a number when it fits in 64 bits, a decimal string beyond.
json big_json(const BigInt& v);

// JSON has no non-finite numbers; infinities and NaN become strings
// ("inf", "-inf", "nan") instead of silently turning into null.
json finite_json(double v);

// Subcommand registration, one translation unit per module family.
void register_arith(CLI::App& app, std::vector<Runner>& out);
void register_cocycle(CLI::App& app, std::vector<Runner>& out,
                      const GlobalFlags* g);
void register_spectrum(CLI::App& app, std::vector<Runner>& out,
                       const GlobalFlags* g);
void register_mfun(CLI::App& app, std::vector<Runner>& out);
void register_local(CLI::App& app, std::vector<Runner>& out);
void register_verify(CLI::App& app, std::vector<Runner>& out);

}  // namespace amo::cli
