#pragma once

#include "tempora/amortised.hpp"
#include "tempora/continuous.hpp"
#include "tempora/discrete.hpp"
#include "tempora/provider.hpp"

#include <string>
#include <vector>

namespace tempora {

/// Drives a provider through one protocol. Every driver opens the provider,
/// issues requests in index order, and closes it; a ProtocolError aborts the
/// session with no utility reported.
struct SessionLog {
  Handshake hello;
  std::vector<ProviderStep> steps;
  std::string provider_kind;
};

struct DiscreteSession {
  Schedule schedule;
  DiscreteReport report;
  SessionLog log;
};

/// Only served batches are requested: the scheduler learns each delta from
/// the provider before choosing the next batch.
DiscreteSession run_discrete_session(Provider& provider, const Handshake& hello, const DiscreteConfig& cfg,
                                     Weighting weighting = Weighting::per_batch);

struct ContinuousSession {
  ContinuousReport report;
  SessionLog log;
};

ContinuousSession run_continuous_session(Provider& provider, const Handshake& hello, const ContinuousConfig& cfg,
                                         bool keep_per_batch = false);

struct AmortisedSession {
  AmortisedReport report;
  SessionLog log;
};

/// Adapts until the cumulative overhead first exceeds the budget at batch j,
/// then asks for j..N in frozen mode; the overflowing batch is re-requested
/// frozen, so the adapt phase is 1..j-1.
AmortisedSession run_amortised_session(Provider& provider, const Handshake& hello, const AmortisedConfig& cfg);

}  // namespace tempora
