#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tempora {

std::string engine_version();

std::string sha256_hex(std::string_view data);
/// Throws std::runtime_error when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
  std::string path;  // as given (inputs) or relative to the output directory
  std::string sha256;

  friend bool operator==(const FileDigest&, const FileDigest&) = default;
};

/// Provenance written beside every output set. Identical manifests imply
/// byte-identical outputs.
struct RunManifest {
  std::string engine_version;
  std::string command;
  std::string config_hash;  // SHA-256 of the canonical config text
  std::string config;       // canonical key=value lines
  std::vector<FileDigest> inputs;
  std::uint64_t seed = 0;
  std::string timestamp;  // UTC ISO-8601
  std::vector<FileDigest> outputs;

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

/// UTC ISO-8601 from SOURCE_DATE_EPOCH when set, else the current time.
std::string manifest_timestamp();

/// Builds a manifest, digesting inputs and the named outputs under `out_dir`.
RunManifest make_manifest(std::string command, std::string config, std::uint64_t seed,
                          const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir,
                          const std::vector<std::string>& outputs);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Re-digests every listed output under `out_dir`; returns the paths whose
/// content no longer matches (missing files included).
std::vector<std::string> verify_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir);

}  // namespace tempora
