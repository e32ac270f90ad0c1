#include <fstream>

#include "common.hpp"
#include "emit.hpp"

namespace amo::cli {

namespace {

std::string render_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return num17(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ConfigInvalid("unsupported config value: " + v.dump());
}

std::string render(const json& v) {
  if (!v.is_array()) return render_scalar(v);
  if (v.empty()) throw ConfigInvalid("empty array in config");
  std::string s;
  for (const auto& e : v) {
    if (!s.empty()) s += ',';
    s += render_scalar(e);
  }
  return s;
}

std::string flag_for(const std::string& key) {
  std::string f = "--" + key;
  for (char& c : f)
    if (c == '_') c = '-';
  return f;
}

}  // namespace

std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigInvalid("--config needs a path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigInvalid("cannot read config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config must be a JSON object");
  if (!j.contains("command") || !j["command"].is_string())
    throw ConfigInvalid("config needs a string \"command\" field");
  const std::string cmd = j["command"].get<std::string>();

  // The subcommand, when given on the command line, is the leading token.
  if (rest.empty() || rest[0].empty() || rest[0][0] == '-')
    rest.insert(rest.begin(), cmd);
  else if (rest[0] != cmd)
    throw ConfigInvalid("config command \"" + cmd +
                        "\" conflicts with subcommand \"" + rest[0] + "\"");

  auto has_flag = [&rest](const std::string& name) {
    for (const auto& a : rest)
      if (a == name || a.rfind(name + "=", 0) == 0) return true;
    return false;
  };
  auto has_any = [&](std::initializer_list<const char*> names) {
    for (const char* n : names)
      if (has_flag(n)) return true;
    return false;
  };

  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    if (key == "alpha" && value.is_object()) {
      if (has_any({"--alpha", "--alpha-p", "--alpha-q", "--cf-terms",
                   "--golden"}))
        continue;
      for (const auto& [kk, vv] : value.items()) {
        (void)vv;
        if (kk != "p" && kk != "q" && kk != "cf_terms")
          throw ConfigInvalid("unknown key alpha." + kk);
      }
      if (value.contains("p") && value.contains("q") &&
          !value.contains("cf_terms")) {
        extra.push_back("--alpha-p=" + render(value["p"]));
        extra.push_back("--alpha-q=" + render(value["q"]));
      } else if (value.contains("cf_terms") && value.size() == 1) {
        extra.push_back("--cf-terms=" + render(value["cf_terms"]));
      } else {
        throw ConfigInvalid("alpha needs {p,q} or {cf_terms}");
      }
      continue;
    }
    if (value.is_object())
      throw ConfigInvalid("nested config value for \"" + key + "\"");
    std::string flag = flag_for(key);
    if (flag == "--output-path" || flag == "--out") {
      if (has_any({"--out", "--output-path"})) continue;
    } else if (has_flag(flag)) {
      continue;  // explicit flags beat file values
    }
    extra.push_back(flag + "=" + render(value));
  }
  rest.insert(rest.begin() + 1, extra.begin(), extra.end());
  return rest;
}

}  // namespace amo::cli
