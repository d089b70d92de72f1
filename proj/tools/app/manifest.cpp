#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "kickdyn/errors.hpp"
#include "kickdyn/version.hpp"

namespace kickdyn::app {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  char byte[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"command", m.command}, {"parameters", m.parameters}, {"seed", m.seed}, {"version", m.version},
       {"timestamp", m.timestamp}, {"threads", m.threads}, {"outputs", m.outputs}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  j.at("command").get_to(m.command);
  m.parameters = j.at("parameters");
  j.at("seed").get_to(m.seed);
  j.at("version").get_to(m.version);
  j.at("timestamp").get_to(m.timestamp);
  m.threads = j.value("threads", 1U);
  j.at("outputs").get_to(m.outputs);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest write_manifest(const std::filesystem::path& dir, std::string command, nlohmann::json parameters,
                           std::uint64_t seed, unsigned threads, const std::vector<std::string>& files) {
  RunManifest m{std::move(command), std::move(parameters), seed, kVersion, utc_timestamp(), threads, {}};
  for (const auto& f : files) m.outputs[f] = sha256_file(dir / f);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << nlohmann::json(m).dump(2) << '\n';
  return m;
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read manifest " + path.string());
  try {
    return nlohmann::json::parse(in).get<RunManifest>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("malformed manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace kickdyn::app
