#include "tempora/session.hpp"

#include "tempora/error.hpp"

namespace tempora {

namespace {

struct Opened {
  Provider& provider;
  SessionLog& log;

  Opened(Provider& p, const Handshake& hello, SessionLog& l) : provider(p), log(l) {
    log.hello = hello;
    log.provider_kind = std::string(p.kind());
    provider.open(hello);
  }

  StepResponse ask(std::size_t index, StepMode mode) {
    const StepRequest req{index, mode};
    StepResponse resp = provider.step(req);
    log.steps.push_back({req, resp});
    return resp;
  }
};

}  // namespace

DiscreteSession run_discrete_session(Provider& provider, const Handshake& hello, const DiscreteConfig& cfg,
                                     Weighting weighting) {
  DiscreteSession out;
  Opened session(provider, hello, out.log);
  DiscreteScheduler scheduler(hello.n, cfg);
  std::vector<BatchRecord> served;
  while (auto p = scheduler.next_batch()) {
    const auto resp = session.ask(*p, StepMode::adapt);
    served.push_back(resp.record(*p));
    scheduler.serve(resp.e + resp.ell);
  }
  provider.close();

  out.schedule = scheduler.schedule();
  auto& r = out.report;
  r.n = hello.n;
  r.served_count = served.size();
  if (r.n > 0) r.availability = static_cast<double>(r.served_count) / static_cast<double>(r.n);
  if (!served.empty()) {
    r.served_accuracy = accuracy_mean(served, weighting);
    r.utility = r.availability * *r.served_accuracy;
  }
  return out;
}

ContinuousSession run_continuous_session(Provider& provider, const Handshake& hello, const ContinuousConfig& cfg,
                                         bool keep_per_batch) {
  ContinuousSession out;
  Opened session(provider, hello, out.log);
  std::vector<BatchRecord> records;
  records.reserve(hello.n);
  for (std::size_t i = 1; i <= hello.n; ++i) records.push_back(session.ask(i, StepMode::adapt).record(i));
  provider.close();

  const auto trace = MethodTrace::make(hello.method, hello.lambda, "", std::move(records), true);
  out.report = continuous_utility(trace, cfg, keep_per_batch);
  return out;
}

AmortisedSession run_amortised_session(Provider& provider, const Handshake& hello, const AmortisedConfig& cfg) {
  AmortisedSession out;
  Opened session(provider, hello, out.log);
  auto& r = out.report;
  r.n = hello.n;

  std::vector<BatchRecord> adapted;
  Duration spent{0};
  std::size_t j = 1;
  for (; j <= hello.n; ++j) {
    const auto resp = session.ask(j, StepMode::adapt);
    const Duration c = std::max(Duration{0}, resp.e + resp.ell - cfg.lambda);
    if (spent + c > cfg.budget) break;
    spent += c;
    adapted.push_back(resp.record(j));
  }
  const std::size_t m = j - 1;

  std::vector<BatchRecord> frozen;
  for (std::size_t i = m + 1; i <= hello.n; ++i) frozen.push_back(session.ask(i, StepMode::frozen).record(i));
  provider.close();

  r.cutoff_m = m;
  r.budget_spent = spent;
  if (r.n == 0) return out;
  r.adapted_fraction = static_cast<double>(m) / static_cast<double>(r.n);
  if (!adapted.empty()) r.adapt_accuracy = accuracy_mean(adapted, cfg.weighting);
  if (!frozen.empty()) {
    r.frozen_accuracy = accuracy_mean(frozen, cfg.weighting);
    r.frozen_source = FrozenSource::frozen_run;
  }
  if (m == r.n) {
    r.utility = *r.adapt_accuracy;
  } else {
    r.utility = (1.0 - r.adapted_fraction) * *r.frozen_accuracy;
    if (r.adapt_accuracy) r.utility += r.adapted_fraction * *r.adapt_accuracy;
  }
  return out;
}

}  // namespace tempora
