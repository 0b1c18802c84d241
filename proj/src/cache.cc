#include "mrs/cache.hh"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "mrs/json_io.hh"

namespace mrs {

std::string resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
  return kDefaultCacheDir;
}

Cache::Cache(std::string directory) : directory_(std::move(directory)) {}

std::string Cache::path_for(const std::string& key) const {
  std::string safe;
  for (char ch : key) safe += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
  return (std::filesystem::path(directory_) / (safe + ".json")).string();
}

std::optional<nlohmann::json> Cache::load(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void Cache::store(const std::string& key, const nlohmann::json& value) const {
  if (!enabled()) return;
  try {
    write_file_atomic(path_for(key), value.dump() + "\n");
  } catch (const std::exception&) {
  }
}

namespace {

std::mutex g_default_mutex;
std::optional<std::string> g_default_dir;

}  // namespace

Cache default_cache() {
  std::lock_guard lock(g_default_mutex);
  if (!g_default_dir) g_default_dir = resolve_cache_dir();
  return Cache(*g_default_dir);
}

void set_default_cache_dir(const std::string& directory) {
  std::lock_guard lock(g_default_mutex);
  g_default_dir = directory;
}

}  // namespace mrs
