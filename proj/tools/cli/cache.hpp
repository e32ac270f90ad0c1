#pragma once

#include <optional>
#include <string>

#include "amo/spectrum.hpp"

namespace amo::cli {

// Raised internally when a cache entry fails to parse or validate; the
// entry is then ignored and the result recomputed.
struct CacheCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Disk cache for band computations. Keys combine the command family, the
// coupling canonicalized to 12 significant digits, the fraction, and the
// library version, hashed (FNV-1a, 64-bit) into a content-addressed file
// name. An empty directory disables the cache entirely.
class BandCache {
 public:
  explicit BandCache(std::string dir);

  bool enabled() const { return !dir_.empty(); }

  // Cache-through band edges: a valid entry is returned as stored; a miss
  // or corrupt entry recomputes and rewrites. About 1% of keys (chosen by
  // hash, so stable per key) are spot-checked: the hit is compared against
  // a fresh computation and replaced if they disagree.
  spectrum::BandList band_edges(double coupling, long long p, long long q);

  // Read-only probe: the stored entry, or nothing on miss/corruption. No
  // computation, no spot check.
  std::optional<spectrum::BandList> peek(double coupling, long long p,
                                         long long q);

  // Unconditional store under the entry's own key.
  void put(const spectrum::BandList& bands);

  // Statistics for the current process, for reporting.
  long long hits = 0;
  long long misses = 0;
  long long corrupt = 0;
  long long spot_checks = 0;
  long long spot_failures = 0;

 private:
  std::string dir_;

  std::string key_string(double coupling, long long p, long long q) const;
  std::string path_for(const std::string& key) const;
  std::optional<spectrum::BandList> load(const std::string& path,
                                         double coupling, long long p,
                                         long long q);
  void store(const std::string& path, const spectrum::BandList& bands);
};

// Resolves the cache directory: explicit flag first, then AMO_CACHE_DIR,
// then a user-level default; empty string when the home directory cannot
// be resolved (cache disabled).
std::string resolve_cache_dir(const std::string& flag_value);

// FNV-1a 64-bit.
unsigned long long fnv1a(const std::string& s);

}  // namespace amo::cli
