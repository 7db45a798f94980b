#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckc/registry.hpp"
#include "ckc/solver.hpp"

namespace ckc {

struct TraceEvent {
  Term before;
  Term after;
  std::optional<Verdict> assessment;
};

struct Trace {
  std::vector<TraceEvent> events;
};

/// Malformed trace files and terms no registry language accepts.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Reads a JSON array of events, or an object with an `events` array. Each
/// event has `before`, `after` and an optional `assessment`.
Trace parse_trace(std::string_view json_text, const Registry& reg);

/// Synthesizes the trace an observer would record while `conceptions` replay
/// `witness`: step verdicts of the acting conception, and `solved` last.
Trace trace_from_witness(const ConceptionSet& conceptions, const Term& problem,
                         const std::vector<WitnessStep>& witness);

/// Every (conception, operator, position) that rewrites `before` into `after`.
std::vector<WitnessStep> explain_step(const ConceptionSet& candidates, const Term& before, const Term& after);

struct EventExplanation {
  bool explained = false;
  std::optional<WitnessStep> step;
  /// Control of C agreeing with the observed assessment.
  std::optional<std::string> control;
};

struct CandidateScore {
  std::string conception;
  Rational coverage;
  std::size_t explained = 0;
  std::size_t rank = 0;
  std::vector<EventExplanation> events;
};

struct DiagnosisReport {
  std::size_t total_events = 0;
  /// Coverage descending, then conception id.
  std::vector<CandidateScore> ranking;

  const CandidateScore& score(std::string_view conception) const;
};

/// Scores every registry conception. Throws TraceError on an empty trace.
DiagnosisReport diagnose(const Registry& reg, const Trace& trace);

namespace serial {
DiagnosisReport diagnose(const Registry& reg, const Trace& trace);
}

}  // namespace ckc
