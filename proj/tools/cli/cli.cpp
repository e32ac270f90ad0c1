#include "cli.hpp"

#include <cstdio>
#include <cstdlib>

#include "amo/errors.hpp"
#include "amo/version.hpp"
#include "common.hpp"

namespace amo::cli {

namespace {

int run_app(std::vector<std::string> args) {
  CLI::App app{"almost Mathieu operator toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  auto g = std::make_shared<GlobalFlags>();
  app.add_option("--cache-dir", g->cache_dir,
                 "Band cache directory (default: AMO_CACHE_DIR, then "
                 "~/.cache/amo)");
  app.add_option("--threads", g->threads,
                 "Worker threads, exported as AMO_THREADS");

  std::vector<Runner> runners;
  register_arith(app, runners);
  register_cocycle(app, runners, g.get());
  register_spectrum(app, runners, g.get());
  register_mfun(app, runners);
  register_local(app, runners);
  register_verify(app, runners);

  // A leading token that names no subcommand is the one error CLI11 would
  // report obliquely; name it before parsing.
  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    bool known = false;
    for (const auto& r : runners) known = known || r.cmd->get_name() == args[0];
    if (!known) {
      std::fprintf(stderr, "error: UnknownCommand: %s\n", args[0].c_str());
      return 1;
    }
  }

  std::vector<std::string> argv_s;
  argv_s.reserve(args.size() + 1);
  argv_s.push_back("amo");
  for (auto& a : args) argv_s.push_back(std::move(a));
  std::vector<char*> argv_p;
  argv_p.reserve(argv_s.size());
  for (auto& s : argv_s) argv_p.push_back(s.data());

  try {
    app.parse(int(argv_p.size()), argv_p.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (g->threads > 0)
    setenv("AMO_THREADS", std::to_string(g->threads).c_str(), 1);
  for (const auto& r : runners)
    if (app.got_subcommand(r.cmd)) return r.fn();
  return 1;  // unreachable: require_subcommand(1)
}

}  // namespace

int run(std::vector<std::string> args) {
  try {
    return run_app(apply_config(std::move(args)));
  } catch (const ConfigInvalid& e) {
    std::fprintf(stderr, "error: ConfigInvalid: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(std::size_t(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args));
}

}  // namespace amo::cli
