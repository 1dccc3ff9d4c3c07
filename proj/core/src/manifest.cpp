#include "tempora/manifest.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#ifndef TEMPORA_VERSION
#define TEMPORA_VERSION "0.0.0"
#endif

namespace tempora {

std::string engine_version() { return TEMPORA_VERSION; }

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  }
  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) throw std::runtime_error("sha256 update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md, &len) != 1) throw std::runtime_error("sha256 final failed");
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 0xf];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

nlohmann::json digests_to_json(const std::vector<FileDigest>& ds) {
  auto arr = nlohmann::json::array();
  for (const auto& d : ds) arr.push_back({{"path", d.path}, {"sha256", d.sha256}});
  return arr;
}

std::vector<FileDigest> digests_from_json(const nlohmann::json& arr) {
  std::vector<FileDigest> out;
  for (const auto& d : arr) out.push_back({d.at("path").get<std::string>(), d.at("sha256").get<std::string>()});
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["engine_version"] = engine_version;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["config"] = config;
  j["inputs"] = digests_to_json(inputs);
  j["seed"] = seed;
  j["timestamp"] = timestamp;
  j["outputs"] = digests_to_json(outputs);
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.engine_version = j.at("engine_version").get<std::string>();
  m.command = j.value("command", "");
  m.config_hash = j.at("config_hash").get<std::string>();
  m.config = j.value("config", "");
  m.inputs = digests_from_json(j.at("inputs"));
  m.seed = j.at("seed").get<std::uint64_t>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.outputs = digests_from_json(j.at("outputs"));
  return m;
}

std::string manifest_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(sde, &end, 10);
    if (end != sde && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest make_manifest(std::string command, std::string config, std::uint64_t seed,
                          const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir,
                          const std::vector<std::string>& outputs) {
  RunManifest m;
  m.engine_version = engine_version();
  m.command = std::move(command);
  m.config_hash = sha256_hex(config);
  m.config = std::move(config);
  for (const auto& p : inputs) m.inputs.push_back({p.string(), sha256_file(p)});
  m.seed = seed;
  m.timestamp = manifest_timestamp();
  for (const auto& o : outputs) m.outputs.push_back({o, sha256_file(out_dir / o)});
  return m;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.to_json();
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return RunManifest::from_json(ss.str());
}

std::vector<std::string> verify_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir) {
  std::vector<std::string> bad;
  for (const auto& o : manifest.outputs) {
    try {
      if (sha256_file(out_dir / o.path) != o.sha256) bad.push_back(o.path);
    } catch (const std::exception&) {
      bad.push_back(o.path);
    }
  }
  return bad;
}

}  // namespace tempora
