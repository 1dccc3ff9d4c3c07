#pragma once

#include "tempora/trace.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tempora {

enum class StepMode { adapt, frozen };
const char* to_string(StepMode m);

struct Handshake {
  std::string method;
  Duration lambda{0};
  std::size_t n = 0;
  std::string protocol;  // discrete | continuous | amortised

  friend bool operator==(const Handshake&, const Handshake&) = default;
};

struct StepRequest {
  std::size_t index = 0;
  StepMode mode = StepMode::adapt;

  friend bool operator==(const StepRequest&, const StepRequest&) = default;
};

struct StepResponse {
  Duration e{0};
  Duration ell{0};
  std::uint32_t batch_size = 0;
  std::uint32_t correct = 0;

  BatchRecord record(std::size_t index) const { return BatchRecord{index, e, ell, batch_size, correct}; }
  static StepResponse from(const BatchRecord& r) { return StepResponse{r.e, r.ell, r.batch_size, r.correct}; }

  friend bool operator==(const StepResponse&, const StepResponse&) = default;
};

struct ProviderStep {
  StepRequest request;
  StepResponse response;
};

/// Session-terminating failure of a provider: malformed message, child exit,
/// timeout. `transcript()` holds the exchanged lines for diagnosis.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(const std::string& message, std::vector<std::string> transcript);
  const std::vector<std::string>& transcript() const noexcept { return transcript_; }

 private:
  std::vector<std::string> transcript_;
};

/// Source of per-batch accuracy and latency, answered one request at a time.
class Provider {
 public:
  virtual ~Provider() = default;

  virtual void open(const Handshake& hello) = 0;
  virtual StepResponse step(const StepRequest& request) = 0;
  virtual void close() = 0;

  /// "replay" or "external": which mode produced a result.
  virtual std::string_view kind() const = 0;
};

/// Answers adapt requests from the adapted trace and frozen requests from the
/// bundle's frozen runs. The cutoff is taken from the first frozen request
/// (cutoff = index - 1) and resolved exactly, else to the nearest earlier run.
/// The bundle must outlive the provider.
class ReplayProvider final : public Provider {
 public:
  explicit ReplayProvider(const TraceBundle& bundle) : bundle_(&bundle) {}

  void open(const Handshake& hello) override;
  StepResponse step(const StepRequest& request) override;
  void close() override { open_ = false; }
  std::string_view kind() const override { return "replay"; }

 private:
  const TraceBundle* bundle_;
  const FrozenRun* frozen_ = nullptr;
  bool open_ = false;
};

/// Spawns `argv` and speaks the line protocol over its stdin/stdout. Each read
/// waits at most `timeout`.
class ExternalProvider final : public Provider {
 public:
  ExternalProvider(std::vector<std::string> argv, std::chrono::milliseconds timeout);
  ~ExternalProvider() override;

  ExternalProvider(const ExternalProvider&) = delete;
  ExternalProvider& operator=(const ExternalProvider&) = delete;

  void open(const Handshake& hello) override;
  StepResponse step(const StepRequest& request) override;
  void close() override;
  std::string_view kind() const override { return "external"; }

  const std::vector<std::string>& transcript() const { return transcript_; }

 private:
  void send(const std::string& line);
  std::string receive();
  [[noreturn]] void fail(const std::string& message);
  void terminate_child();

  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
  std::size_t lines_received_ = 0;
  std::vector<std::string> transcript_;
};

/// Wire messages. Engine -> child: HELLO, STEP, BYE. Child -> engine: READY,
/// RES, DONE. Numbers are decimal text; unknown keys are ignored.
namespace wire {

struct Message {
  std::string verb;
  std::vector<std::pair<std::string, std::string>> fields;

  std::optional<std::string> get(std::string_view key) const;
};

/// Throws std::invalid_argument on an empty line or a token without '='.
Message parse(std::string_view line);

std::string hello(const Handshake& h);
std::string step(const StepRequest& r);
std::string bye();
std::string ready();
std::string res(const StepResponse& r);
std::string done();

/// Each throws std::invalid_argument naming the missing or malformed key.
Handshake parse_hello(const Message& m);
StepRequest parse_step(const Message& m);
StepResponse parse_res(const Message& m);

}  // namespace wire

}  // namespace tempora
