#pragma once

#include "tempora/trace.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace tempora {

enum class TraceFormat { jsonl, csv };

/// jsonl for .jsonl/.json, csv for .csv; throws ConfigError otherwise.
TraceFormat format_from_path(const std::filesystem::path& path);

/// JSONL: a header object (method, lambda_ms, corruption, n[, relaxed_sizes])
/// followed by one record per line. CSV: `index,e_ms,ell_ms,batch_size,correct`
/// with the header object in the sidecar `<file>.meta.json`.
MethodTrace load_trace(const std::filesystem::path& path, TraceFormat format);
MethodTrace load_trace(const std::filesystem::path& path);
void write_trace(const MethodTrace& trace, const std::filesystem::path& path, TraceFormat format);

MethodTrace read_trace_jsonl(std::istream& in);
void write_trace_jsonl(const MethodTrace& trace, std::ostream& out);

/// A frozen run as stored on disk, with the identity needed to pair it with
/// its adapted trace.
struct FrozenRunFile {
  std::string method;
  std::string corruption;
  Duration lambda{0};
  std::size_t n = 0;  // length of the full stream
  FrozenRun run;
};

FrozenRunFile load_frozen_run(const std::filesystem::path& path);
void write_frozen_run(const FrozenRunFile& frozen, const std::filesystem::path& path, TraceFormat format);

FrozenRunFile read_frozen_jsonl(std::istream& in);
void write_frozen_jsonl(const FrozenRunFile& frozen, std::ostream& out);

/// Latency samples for lambda estimation: one decimal millisecond value per
/// line (blank lines and '#' comments skipped).
std::vector<Duration> load_latency_samples(const std::filesystem::path& path);

}  // namespace tempora
