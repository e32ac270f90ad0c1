#include "cache.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "amo/version.hpp"
#include "emit.hpp"

namespace amo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

unsigned long long fnv1a(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("AMO_CACHE_DIR")) return env;
  if (const char* home = std::getenv("HOME"))
    return std::string(home) + "/.cache/amo";
  return {};
}

BandCache::BandCache(std::string dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) fs::create_directories(dir_);
}

std::string BandCache::key_string(double coupling, long long p,
                                  long long q) const {
  char lam[40];
  std::snprintf(lam, sizeof lam, "%.12g", coupling);
  return std::string("bands|v=") + kVersion + "|lambda=" + lam +
         "|p=" + std::to_string(p) + "|q=" + std::to_string(q);
}

std::string BandCache::path_for(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", fnv1a(key));
  return dir_ + "/" + name;
}

std::optional<spectrum::BandList> BandCache::load(const std::string& path,
                                                  double coupling, long long p,
                                                  long long q) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;  // plain miss
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CacheCorrupt(std::string("unparseable cache entry: ") + e.what());
  }
  if (!j.is_object() || !j.contains("bands") || !j["bands"].is_array() ||
      j.value("p", -1ll) != p || j.value("q", -1ll) != q ||
      j.value("version", std::string{}) != kVersion)
    throw CacheCorrupt("cache entry fails validation: " + path);
  char lam[40];
  std::snprintf(lam, sizeof lam, "%.12g", coupling);
  if (j.value("lambda_key", std::string{}) != lam)
    throw CacheCorrupt("cache entry coupling mismatch: " + path);
  if ((long long)j["bands"].size() != q)
    throw CacheCorrupt("cache entry band count mismatch: " + path);

  spectrum::BandList out;
  out.coupling = coupling;
  out.p = p;
  out.q = q;
  out.edge_tolerance = j.value("edge_tolerance", 1e-12);
  for (const auto& b : j["bands"]) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() ||
        !b[1].is_number())
      throw CacheCorrupt("cache entry band shape: " + path);
    out.bands.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  return out;
}

void BandCache::store(const std::string& path,
                      const spectrum::BandList& bands) {
  char lam[40];
  std::snprintf(lam, sizeof lam, "%.12g", bands.coupling);
  json j;
  j["version"] = kVersion;
  j["lambda_key"] = lam;
  j["p"] = bands.p;
  j["q"] = bands.q;
  j["edge_tolerance"] = bands.edge_tolerance;
  json arr = json::array();
  for (const auto& b : bands.bands) arr.push_back({b.lo, b.hi});
  j["bands"] = arr;
  // temp-then-rename keeps concurrent readers away from partial writes
  std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    out << j.dump();
  }
  std::rename(tmp.c_str(), path.c_str());
}

std::optional<spectrum::BandList> BandCache::peek(double coupling, long long p,
                                                  long long q) {
  if (!enabled()) return std::nullopt;
  try {
    auto got = load(path_for(key_string(coupling, p, q)), coupling, p, q);
    if (got)
      ++hits;
    else
      ++misses;
    return got;
  } catch (const CacheCorrupt&) {
    ++corrupt;
    return std::nullopt;
  }
}

void BandCache::put(const spectrum::BandList& bands) {
  if (!enabled()) return;
  store(path_for(key_string(bands.coupling, bands.p, bands.q)), bands);
}

spectrum::BandList BandCache::band_edges(double coupling, long long p,
                                         long long q) {
  if (!enabled()) return spectrum::band_edges(coupling, p, q);
  std::string key = key_string(coupling, p, q);
  std::string path = path_for(key);
  std::optional<spectrum::BandList> cached;
  try {
    cached = load(path, coupling, p, q);
  } catch (const CacheCorrupt&) {
    ++corrupt;
    cached.reset();
  }
  if (cached) {
    ++hits;
    // stable 1%-by-key sample: recompute and compare
    if (fnv1a(key + "|spot") % 128 == 0) {
      ++spot_checks;
      auto fresh = spectrum::band_edges(coupling, p, q);
      double worst = 0.0;
      for (long long i = 0; i < q; ++i) {
        worst = std::max(worst, std::abs(fresh.bands[i].lo - cached->bands[i].lo));
        worst = std::max(worst, std::abs(fresh.bands[i].hi - cached->bands[i].hi));
      }
      if (worst > 1e-9) {
        ++spot_failures;
        store(path, fresh);
        return fresh;
      }
    }
    return *cached;
  }
  ++misses;
  auto fresh = spectrum::band_edges(coupling, p, q);
  store(path, fresh);
  return fresh;
}

}  // namespace amo::cli
