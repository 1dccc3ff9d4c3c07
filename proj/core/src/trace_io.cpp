#include "tempora/trace_io.hpp"

#include "tempora/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>

namespace tempora {

namespace {

using json = nlohmann::json;

// A flat JSON object whose numbers keep their source text, so decimal
// milliseconds never pass through a double.
struct FlatValue {
  enum class Kind { number, string, boolean, null } kind = Kind::null;
  std::string text;
  bool flag = false;
};
using FlatObject = std::unordered_map<std::string, FlatValue>;

class FlatObjectSax : public nlohmann::json_sax<json> {
 public:
  explicit FlatObjectSax(FlatObject& out) : out_(out) {}

  bool null() override { return put({FlatValue::Kind::null, {}, false}); }
  bool boolean(bool v) override { return put({FlatValue::Kind::boolean, {}, v}); }
  bool number_integer(number_integer_t v) override { return put({FlatValue::Kind::number, std::to_string(v), false}); }
  bool number_unsigned(number_unsigned_t v) override { return put({FlatValue::Kind::number, std::to_string(v), false}); }
  bool number_float(number_float_t, const string_t& s) override { return put({FlatValue::Kind::number, s, false}); }
  bool string(string_t& v) override { return put({FlatValue::Kind::string, v, false}); }
  bool binary(binary_t&) override { return fail("binary values are not supported"); }
  bool start_object(std::size_t) override {
    if (depth_++ > 0) return fail("nested objects are not supported");
    return true;
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override { return fail("arrays are not supported"); }
  bool end_array() override { return true; }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    return fail(ex.what());
  }

  const std::string& error() const { return error_; }

 private:
  bool put(FlatValue v) {
    if (depth_ != 1) return fail("expected a JSON object");
    out_[key_] = std::move(v);
    return true;
  }
  bool fail(std::string message) {
    error_ = std::move(message);
    return false;
  }

  FlatObject& out_;
  std::string key_;
  std::string error_;
  int depth_ = 0;
};

FlatObject parse_flat(const std::string& line, std::size_t row) {
  FlatObject obj;
  FlatObjectSax sax(obj);
  const bool ok = json::sax_parse(line, &sax, json::input_format_t::json, /*strict=*/true);
  if (!ok) {
    throw ValidationError(ValidationKind::malformed_value, row, "",
                          "malformed JSON at row " + std::to_string(row) + ": " + sax.error());
  }
  return obj;
}

// Field access shared by the JSON and CSV readers: both reduce a row to
// key -> text before conversion.
class RowView {
 public:
  RowView(std::size_t row, std::unordered_map<std::string, std::string> fields)
      : row_(row), fields_(std::move(fields)) {}

  bool has(const std::string& field) const { return fields_.contains(field); }

  const std::string& text(const std::string& field) const {
    auto it = fields_.find(field);
    if (it == fields_.end() || it->second.empty()) {
      throw ValidationError(ValidationKind::missing_field, row_, field,
                            "missing field '" + field + "' at row " + std::to_string(row_));
    }
    return it->second;
  }

  Duration millis(const std::string& field) const {
    const std::string& t = text(field);
    Duration d{0};
    try {
      d = parse_millis(t);
    } catch (const std::exception&) {
      throw ValidationError(ValidationKind::malformed_value, row_, field,
                            "malformed value '" + t + "' for " + field + " at row " + std::to_string(row_));
    }
    if (d.count() < 0) {
      throw ValidationError(ValidationKind::negative_value, row_, field,
                            "negative value for " + field + " at row " + std::to_string(row_));
    }
    return d;
  }

  std::uint64_t count(const std::string& field) const {
    const std::string& t = text(field);
    std::int64_t v = 0;
    try {
      v = parse_scaled_decimal(t, 0);
      if (parse_scaled_decimal(t, 3) != v * 1000) throw std::invalid_argument("fractional");
    } catch (const std::exception&) {
      throw ValidationError(ValidationKind::malformed_value, row_, field,
                            "malformed integer '" + t + "' for " + field + " at row " + std::to_string(row_));
    }
    if (v < 0) {
      throw ValidationError(ValidationKind::negative_value, row_, field,
                            "negative value for " + field + " at row " + std::to_string(row_));
    }
    return static_cast<std::uint64_t>(v);
  }

  BatchRecord record() const {
    BatchRecord r;
    r.index = static_cast<std::size_t>(count("index"));
    r.e = millis("e_ms");
    r.ell = millis("ell_ms");
    const auto size = count("batch_size");
    const auto correct = count("correct");
    if (size > UINT32_MAX || correct > UINT32_MAX) {
      throw ValidationError(ValidationKind::malformed_value, row_, "batch_size",
                            "count out of range at row " + std::to_string(row_));
    }
    r.batch_size = static_cast<std::uint32_t>(size);
    r.correct = static_cast<std::uint32_t>(correct);
    return r;
  }

 private:
  std::size_t row_;
  std::unordered_map<std::string, std::string> fields_;
};

std::unordered_map<std::string, std::string> to_fields(const FlatObject& obj) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& [k, v] : obj) {
    switch (v.kind) {
      case FlatValue::Kind::number:
      case FlatValue::Kind::string: out[k] = v.text; break;
      case FlatValue::Kind::boolean: out[k] = v.flag ? "true" : "false"; break;
      case FlatValue::Kind::null: break;
    }
  }
  return out;
}

struct Header {
  std::string method;
  std::string corruption;
  Duration lambda{0};
  std::optional<std::size_t> n;
  std::optional<std::size_t> cutoff_m;
  bool relaxed_sizes = false;
};

Header parse_header(const FlatObject& obj) {
  RowView view(0, to_fields(obj));
  Header h;
  h.method = view.text("method");
  h.corruption = view.has("corruption") ? view.text("corruption") : "";
  h.lambda = view.millis("lambda_ms");
  if (view.has("n")) h.n = static_cast<std::size_t>(view.count("n"));
  if (view.has("cutoff_m")) h.cutoff_m = static_cast<std::size_t>(view.count("cutoff_m"));
  if (auto it = obj.find("relaxed_sizes"); it != obj.end()) {
    h.relaxed_sizes = it->second.kind == FlatValue::Kind::boolean && it->second.flag;
  }
  return h;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string header_json(const std::string& method, Duration lambda, const std::string& corruption, std::size_t n,
                        std::optional<std::size_t> cutoff_m, bool relaxed) {
  std::string out = "{\"method\":" + quoted(method) + ",\"lambda_ms\":" + format_millis(lambda) +
                    ",\"corruption\":" + quoted(corruption) + ",\"n\":" + std::to_string(n);
  if (cutoff_m) out += ",\"cutoff_m\":" + std::to_string(*cutoff_m);
  if (relaxed) out += ",\"relaxed_sizes\":true";
  out += "}";
  return out;
}

std::string record_json(const BatchRecord& r) {
  return "{\"index\":" + std::to_string(r.index) + ",\"e_ms\":" + format_millis(r.e) +
         ",\"ell_ms\":" + format_millis(r.ell) + ",\"batch_size\":" + std::to_string(r.batch_size) +
         ",\"correct\":" + std::to_string(r.correct) + "}";
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

// Reads header + records from JSONL.
std::pair<Header, std::vector<BatchRecord>> read_jsonl(std::istream& in) {
  std::string line;
  std::optional<Header> header;
  std::vector<BatchRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (!header) {
      header = parse_header(parse_flat(line, 0));
      continue;
    }
    ++row;
    records.push_back(RowView(row, to_fields(parse_flat(line, row))).record());
  }
  if (!header) throw ValidationError(ValidationKind::header, 0, "method", "trace has no header line");
  return {*header, std::move(records)};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<BatchRecord> read_csv_records(std::istream& in) {
  std::string line;
  std::vector<std::string> columns;
  std::vector<BatchRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (columns.empty()) {
      columns = split_csv(line);
      for (const char* required : {"index", "e_ms", "ell_ms", "batch_size", "correct"}) {
        if (std::find(columns.begin(), columns.end(), required) == columns.end()) {
          throw ValidationError(ValidationKind::missing_field, 0, required,
                                std::string("missing column '") + required + "' in CSV header");
        }
      }
      continue;
    }
    ++row;
    const auto cells = split_csv(line);
    std::unordered_map<std::string, std::string> fields;
    for (std::size_t i = 0; i < columns.size() && i < cells.size(); ++i) fields[columns[i]] = cells[i];
    records.push_back(RowView(row, std::move(fields)).record());
  }
  return records;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".meta.json";
  return p;
}

Header read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(sidecar(path));
  if (!in) throw ValidationError(ValidationKind::header, 0, "method", "missing sidecar " + sidecar(path).string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_header(parse_flat(buf.str(), 0));
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_csv_records(const std::vector<BatchRecord>& records, std::ostream& out) {
  out << "index,e_ms,ell_ms,batch_size,correct\n";
  for (const auto& r : records) {
    out << r.index << ',' << format_millis(r.e) << ',' << format_millis(r.ell) << ',' << r.batch_size << ','
        << r.correct << '\n';
  }
}

MethodTrace assemble_trace(const Header& h, std::vector<BatchRecord> records) {
  if (h.n && *h.n != records.size()) {
    throw ValidationError(ValidationKind::header, 0, "n",
                          "header n=" + std::to_string(*h.n) + " but " + std::to_string(records.size()) +
                              " records");
  }
  return MethodTrace::make(h.method, h.lambda, h.corruption, std::move(records), h.relaxed_sizes);
}

FrozenRunFile assemble_frozen(const Header& h, std::vector<BatchRecord> records) {
  if (!h.cutoff_m) throw ValidationError(ValidationKind::missing_field, 0, "cutoff_m", "frozen run header lacks cutoff_m");
  if (!h.n) throw ValidationError(ValidationKind::missing_field, 0, "n", "frozen run header lacks n");
  FrozenRunFile f;
  f.method = h.method;
  f.corruption = h.corruption;
  f.lambda = h.lambda;
  f.n = *h.n;
  f.run = FrozenRun::make(*h.cutoff_m, *h.n, std::move(records));
  return f;
}

}  // namespace

TraceFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json") return TraceFormat::jsonl;
  if (ext == ".csv") return TraceFormat::csv;
  throw ConfigError("cannot infer trace format from '" + path.string() + "' (expected .jsonl or .csv)");
}

MethodTrace read_trace_jsonl(std::istream& in) {
  auto [header, records] = read_jsonl(in);
  return assemble_trace(header, std::move(records));
}

void write_trace_jsonl(const MethodTrace& trace, std::ostream& out) {
  out << header_json(trace.method, trace.lambda, trace.corruption, trace.size(), std::nullopt, trace.relaxed_sizes)
      << '\n';
  for (const auto& r : trace.records) out << record_json(r) << '\n';
}

MethodTrace load_trace(const std::filesystem::path& path, TraceFormat format) {
  auto in = open_in(path);
  if (format == TraceFormat::jsonl) return read_trace_jsonl(in);
  const Header h = read_sidecar(path);
  return assemble_trace(h, read_csv_records(in));
}

MethodTrace load_trace(const std::filesystem::path& path) { return load_trace(path, format_from_path(path)); }

void write_trace(const MethodTrace& trace, const std::filesystem::path& path, TraceFormat format) {
  auto out = open_out(path);
  if (format == TraceFormat::jsonl) {
    write_trace_jsonl(trace, out);
    return;
  }
  write_csv_records(trace.records, out);
  auto meta = open_out(sidecar(path));
  meta << header_json(trace.method, trace.lambda, trace.corruption, trace.size(), std::nullopt, trace.relaxed_sizes)
       << '\n';
}

FrozenRunFile read_frozen_jsonl(std::istream& in) {
  auto [header, records] = read_jsonl(in);
  return assemble_frozen(header, std::move(records));
}

void write_frozen_jsonl(const FrozenRunFile& frozen, std::ostream& out) {
  out << header_json(frozen.method, frozen.lambda, frozen.corruption, frozen.n, frozen.run.cutoff_m, false) << '\n';
  for (const auto& r : frozen.run.records) out << record_json(r) << '\n';
}

FrozenRunFile load_frozen_run(const std::filesystem::path& path) {
  auto in = open_in(path);
  if (format_from_path(path) == TraceFormat::jsonl) return read_frozen_jsonl(in);
  const Header h = read_sidecar(path);
  return assemble_frozen(h, read_csv_records(in));
}

void write_frozen_run(const FrozenRunFile& frozen, const std::filesystem::path& path, TraceFormat format) {
  auto out = open_out(path);
  if (format == TraceFormat::jsonl) {
    write_frozen_jsonl(frozen, out);
    return;
  }
  write_csv_records(frozen.run.records, out);
  auto meta = open_out(sidecar(path));
  meta << header_json(frozen.method, frozen.lambda, frozen.corruption, frozen.n, frozen.run.cutoff_m, false) << '\n';
}

std::vector<Duration> load_latency_samples(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Duration> samples;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    RowView view(row, {{"latency_ms", line.substr(b, e - b + 1)}});
    samples.push_back(view.millis("latency_ms"));
  }
  return samples;
}

}  // namespace tempora
