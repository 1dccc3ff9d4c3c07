#include "tempora/provider.hpp"

#include "tempora/amortised.hpp"
#include "tempora/error.hpp"

#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstring>
#include <system_error>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace tempora {

const char* to_string(StepMode m) { return m == StepMode::adapt ? "adapt" : "frozen"; }

namespace {

std::string dump(const std::vector<std::string>& transcript) {
  constexpr std::size_t kTail = 20;
  std::string out;
  const std::size_t from = transcript.size() > kTail ? transcript.size() - kTail : 0;
  for (std::size_t i = from; i < transcript.size(); ++i) out += "\n  " + transcript[i];
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end || text.empty()) throw std::invalid_argument("malformed " + key + "=" + text);
  return v;
}

std::string require(const wire::Message& m, std::string_view key) {
  auto v = m.get(key);
  if (!v) throw std::invalid_argument(m.verb + " is missing " + std::string(key));
  return *v;
}

Duration parse_ms_field(const wire::Message& m, std::string_view key) {
  const std::string text = require(m, key);
  try {
    return parse_millis(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed " + std::string(key) + "=" + text);
  }
}

}  // namespace

ProtocolError::ProtocolError(const std::string& message, std::vector<std::string> transcript)
    : std::runtime_error(message + (transcript.empty() ? "" : "; transcript tail:" + dump(transcript))),
      transcript_(std::move(transcript)) {}

// ---------------------------------------------------------------- wire

namespace wire {

std::optional<std::string> Message::get(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  return std::nullopt;
}

Message parse(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  Message m;
  std::size_t pos = 0;
  bool first = true;
  while (pos < line.size()) {
    if (line[pos] == ' ' || line[pos] == '\t') {
      ++pos;
      continue;
    }
    std::size_t end = line.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view tok = line.substr(pos, end - pos);
    pos = end;
    if (first) {
      m.verb = std::string(tok);
      first = false;
      continue;
    }
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0) throw std::invalid_argument("token without key=value: " + std::string(tok));
    m.fields.emplace_back(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
  }
  if (m.verb.empty()) throw std::invalid_argument("empty message");
  return m;
}

std::string hello(const Handshake& h) {
  return "HELLO method=" + h.method + " lambda_ms=" + format_millis(h.lambda) + " n=" + std::to_string(h.n) +
         " protocol=" + h.protocol;
}

std::string step(const StepRequest& r) {
  return "STEP index=" + std::to_string(r.index) + " mode=" + to_string(r.mode);
}

std::string bye() { return "BYE"; }
std::string ready() { return "READY"; }
std::string done() { return "DONE"; }

std::string res(const StepResponse& r) {
  return "RES e_ms=" + format_millis(r.e) + " ell_ms=" + format_millis(r.ell) +
         " batch_size=" + std::to_string(r.batch_size) + " correct=" + std::to_string(r.correct);
}

Handshake parse_hello(const Message& m) {
  if (m.verb != "HELLO") throw std::invalid_argument("expected HELLO, got " + m.verb);
  Handshake h;
  h.method = require(m, "method");
  h.lambda = parse_ms_field(m, "lambda_ms");
  h.n = parse_count("n", require(m, "n"));
  h.protocol = require(m, "protocol");
  return h;
}

StepRequest parse_step(const Message& m) {
  if (m.verb != "STEP") throw std::invalid_argument("expected STEP, got " + m.verb);
  StepRequest r;
  r.index = parse_count("index", require(m, "index"));
  const std::string mode = require(m, "mode");
  if (mode == "adapt") r.mode = StepMode::adapt;
  else if (mode == "frozen") r.mode = StepMode::frozen;
  else throw std::invalid_argument("malformed mode=" + mode);
  return r;
}

StepResponse parse_res(const Message& m) {
  if (m.verb != "RES") throw std::invalid_argument("expected RES, got " + m.verb);
  StepResponse r;
  r.e = parse_ms_field(m, "e_ms");
  r.ell = parse_ms_field(m, "ell_ms");
  const std::size_t b = parse_count("batch_size", require(m, "batch_size"));
  const std::size_t c = parse_count("correct", require(m, "correct"));
  if (r.e.count() < 0 || r.ell.count() < 0) throw std::invalid_argument("negative latency");
  if (b == 0) throw std::invalid_argument("batch_size must be positive");
  if (c > b) throw std::invalid_argument("correct exceeds batch_size");
  if (b > UINT32_MAX) throw std::invalid_argument("batch_size out of range");
  r.batch_size = static_cast<std::uint32_t>(b);
  r.correct = static_cast<std::uint32_t>(c);
  return r;
}

}  // namespace wire

// ---------------------------------------------------------------- replay

void ReplayProvider::open(const Handshake& hello) {
  if (hello.n != bundle_->adapted.size()) {
    throw ProtocolError("handshake n=" + std::to_string(hello.n) + " does not match trace length " +
                            std::to_string(bundle_->adapted.size()),
                        {});
  }
  frozen_ = nullptr;
  open_ = true;
}

StepResponse ReplayProvider::step(const StepRequest& request) {
  if (!open_) throw ProtocolError("step before open", {});
  const std::size_t n = bundle_->adapted.size();
  if (request.index < 1 || request.index > n) {
    throw ProtocolError("step index " + std::to_string(request.index) + " outside 1.." + std::to_string(n), {});
  }
  if (request.mode == StepMode::adapt) return StepResponse::from(bundle_->adapted.at(request.index));

  if (frozen_ == nullptr) {
    const auto resolution = resolve_frozen_run(*bundle_, request.index - 1);
    if (resolution.run == nullptr) {
      throw ProtocolError("no frozen run covers batch " + std::to_string(request.index), {});
    }
    frozen_ = resolution.run;
  }
  if (request.index <= frozen_->cutoff_m) {
    throw ProtocolError("frozen request for batch " + std::to_string(request.index) + " precedes cutoff " +
                            std::to_string(frozen_->cutoff_m),
                        {});
  }
  return StepResponse::from(frozen_->at(request.index));
}

// ---------------------------------------------------------------- external

ExternalProvider::ExternalProvider(std::vector<std::string> argv, std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw ConfigError("provider command is empty");
}

ExternalProvider::~ExternalProvider() { terminate_child(); }

void ExternalProvider::terminate_child() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    if (::waitpid(pid_, &status, WNOHANG) == 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

void ExternalProvider::fail(const std::string& message) {
  auto transcript = transcript_;
  terminate_child();
  throw ProtocolError("provider '" + argv_.front() + "': " + message, std::move(transcript));
}

void ExternalProvider::open(const Handshake& hello) {
  if (pid_ > 0) fail("already open");
  // A dead child must surface as an error on write, not as a signal.
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];   // engine -> child
  int out_pipe[2];  // child -> engine
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw std::system_error(errno, std::generic_category(), "pipe");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw std::system_error(errno, std::generic_category(), "pipe");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  if (rc != 0) {
    terminate_child();
    throw ProtocolError("cannot spawn '" + argv_.front() + "': " + std::strerror(rc), {});
  }
  pid_ = pid;
  pending_.clear();
  lines_received_ = 0;
  transcript_.clear();

  send(wire::hello(hello));
  const std::string line = receive();
  try {
    if (wire::parse(line).verb != "READY") fail("expected READY at child line " + std::to_string(lines_received_));
  } catch (const std::invalid_argument& e) {
    fail("malformed line " + std::to_string(lines_received_) + ": " + e.what());
  }
}

StepResponse ExternalProvider::step(const StepRequest& request) {
  if (pid_ <= 0) throw ProtocolError("step before open", transcript_);
  send(wire::step(request));
  const std::string line = receive();
  try {
    return wire::parse_res(wire::parse(line));
  } catch (const std::invalid_argument& e) {
    fail("malformed line " + std::to_string(lines_received_) + ": " + e.what());
  }
}

void ExternalProvider::close() {
  if (pid_ <= 0) return;
  send(wire::bye());
  const std::string line = receive();
  try {
    if (wire::parse(line).verb != "DONE") fail("expected DONE at child line " + std::to_string(lines_received_));
  } catch (const std::invalid_argument& e) {
    fail("malformed line " + std::to_string(lines_received_) + ": " + e.what());
  }
  ::close(to_child_);
  ::close(from_child_);
  to_child_ = from_child_ = -1;
  int status = 0;
  ::waitpid(pid_, &status, 0);
  pid_ = -1;
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw ProtocolError("provider '" + argv_.front() + "' exited abnormally after DONE", transcript_);
  }
}

void ExternalProvider::send(const std::string& line) {
  transcript_.push_back("> " + line);
  std::string buf = line + "\n";
  std::size_t off = 0;
  while (off < buf.size()) {
    const ssize_t w = ::write(to_child_, buf.data() + off, buf.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      fail(std::string("write failed (child exited?): ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(w);
  }
}

std::string ExternalProvider::receive() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    const auto nl = pending_.find('\n');
    if (nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      ++lines_received_;
      transcript_.push_back("< " + line);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) fail("timed out after " + std::to_string(timeout_.count()) + " ms");
    pollfd pfd{from_child_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (pr == 0) continue;
    char chunk[4096];
    const ssize_t r = ::read(from_child_, chunk, sizeof chunk);
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(std::string("read failed: ") + std::strerror(errno));
    }
    if (r == 0) {
      int status = 0;
      std::string how = "child closed its output";
      if (::waitpid(pid_, &status, 0) == pid_) {
        if (WIFEXITED(status)) how = "child exited with status " + std::to_string(WEXITSTATUS(status));
        else if (WIFSIGNALED(status)) how = "child killed by signal " + std::to_string(WTERMSIG(status));
        pid_ = -1;
      }
      fail(how + " after " + std::to_string(lines_received_) + " lines");
    }
    pending_.append(chunk, static_cast<std::size_t>(r));
  }
}

}  // namespace tempora
