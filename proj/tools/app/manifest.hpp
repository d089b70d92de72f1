#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace kickdyn::app {

[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;
  unsigned threads = 1;
  std::map<std::string, std::string> outputs;  // file name -> sha256
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

/// Hashes `files` (names relative to dir) and writes dir/manifest.json.
RunManifest write_manifest(const std::filesystem::path& dir, std::string command, nlohmann::json parameters,
                           std::uint64_t seed, unsigned threads, const std::vector<std::string>& files);
[[nodiscard]] RunManifest read_manifest(const std::filesystem::path& path);

[[nodiscard]] std::string utc_timestamp();

}  // namespace kickdyn::app
