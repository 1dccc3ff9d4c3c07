#include "cli_common.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <glob.h>

namespace tempora::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) config_path = a.substr(eq + 1);
      else if (i + 1 < args.size()) config_path = args[i + 1];
      else throw UsageError("--config needs a file");
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot read config file " + config_path);
  std::vector<std::string> out = args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + " is not key=value: " + line);
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config" || given.count(key)) continue;
    if (value == "false") continue;
    out.push_back("--" + key);
    if (value != "true") out.push_back(value);
  }
  return out;
}

std::vector<std::filesystem::path> expand_globs(const std::vector<std::string>& patterns) {
  std::set<std::filesystem::path> found;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == GLOB_NOMATCH) {
      globfree(&g);
      throw UsageError("no files match '" + pattern + "'");
    }
    if (rc != 0) {
      globfree(&g);
      throw UsageError("cannot expand '" + pattern + "'");
    }
    for (std::size_t i = 0; i < g.gl_pathc; ++i) found.insert(g.gl_pathv[i]);
    globfree(&g);
  }
  return {found.begin(), found.end()};
}

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (std::size_t i = 0; i < command.size(); ++i) {
    const char ch = command[i];
    if (quote) {
      if (ch == quote) quote = 0;
      else if (ch == '\\' && quote == '"' && i + 1 < command.size()) cur += command[++i];
      else cur += ch;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      in_word = true;
    } else if (ch == '\\' && i + 1 < command.size()) {
      cur += command[++i];
      in_word = true;
    } else if (ch == ' ' || ch == '\t') {
      if (in_word) words.push_back(cur);
      cur.clear();
      in_word = false;
    } else {
      cur += ch;
      in_word = true;
    }
  }
  if (quote) throw UsageError("unterminated quote in command: " + command);
  if (in_word) words.push_back(cur);
  return words;
}

std::vector<Duration> parse_millis_list(const std::vector<std::string>& items) {
  std::vector<Duration> out;
  for (const auto& s : items) {
    try {
      out.push_back(parse_millis(s));
    } catch (const std::exception&) {
      throw UsageError("malformed millisecond value '" + s + "'");
    }
  }
  return out;
}

std::vector<Duration> parse_seconds_list(const std::vector<std::string>& items) {
  std::vector<Duration> out;
  for (const auto& s : items) {
    try {
      out.push_back(parse_seconds(s));
    } catch (const std::exception&) {
      throw UsageError("malformed second value '" + s + "'");
    }
  }
  return out;
}

Weighting parse_weighting(const std::string& text) {
  if (text == "per-batch" || text == "per_batch") return Weighting::per_batch;
  if (text == "per-sample" || text == "per_sample") return Weighting::per_sample;
  throw UsageError("weighting must be per-batch or per-sample, got '" + text + "'");
}

std::string canonical_config(const std::vector<std::pair<std::string, std::string>>& entries) {
  auto sorted = entries;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [k, v] : sorted) out += k + "=" + v + "\n";
  return out;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace tempora::cli
