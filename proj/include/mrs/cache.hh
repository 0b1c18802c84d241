#pragma once

// On-disk store for expensive intermediate results (lift plans, searched
// headers and gadgets). One JSON file per key; callers re-verify whatever they
// load and overwrite corrupt entries.

#include <optional>
#include <string>

#include <json.hpp>

namespace mrs {

inline constexpr const char* kCacheEnvVar = "MRS_CACHE_DIR";
inline constexpr const char* kDefaultCacheDir = ".mrs-cache";

/// Flag value if non-empty, else $MRS_CACHE_DIR if set and non-empty, else
/// ./.mrs-cache.
std::string resolve_cache_dir(const std::string& flag_value = "");

class Cache {
 public:
  /// An empty directory disables persistence; lookups then always miss.
  explicit Cache(std::string directory);

  const std::string& directory() const { return directory_; }
  bool enabled() const { return !directory_.empty(); }

  /// Missing or unparsable entries yield nullopt.
  std::optional<nlohmann::json> load(const std::string& key) const;
  /// Atomic write-then-rename. I/O failures are swallowed: the cache is an
  /// optimisation, never a correctness dependency.
  void store(const std::string& key, const nlohmann::json& value) const;

  std::string path_for(const std::string& key) const;

 private:
  std::string directory_;
};

/// Process-wide cache used when callers do not pass one. Starts at
/// resolve_cache_dir().
Cache default_cache();
void set_default_cache_dir(const std::string& directory);

}  // namespace mrs
