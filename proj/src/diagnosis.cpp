#include "ckc/diagnosis.hpp"

#include <algorithm>

#include "json.hpp"

#include "ckc/parallel.hpp"

namespace ckc {

namespace {

using nlohmann::json;

Term event_term(const json& ev, const char* key, std::size_t index, const Registry& reg) {
  const auto where = "event " + std::to_string(index) + " `" + key + "`";
  if (!ev.contains(key) || !ev[key].is_string()) throw TraceError(where + ": missing term string");
  Term t;
  try {
    t = parse_term(ev[key].get<std::string>());
  } catch (const SyntaxError& e) {
    throw TraceError(where + ": " + e.what());
  }
  const auto& langs = reg.languages();
  if (!langs.empty() &&
      std::none_of(langs.begin(), langs.end(), [&](const LanguagePtr& l) { return conforms(*l, t); }))
    throw TraceError(where + ": " + to_string(t) + " conforms to no registry language");
  return t;
}

const Conception* find_in(const ConceptionSet& set, std::string_view id) {
  for (const auto* c : set)
    if (c->id == id) return c;
  return nullptr;
}

bool assessment_agrees(const Conception& c, const TraceEvent& ev, std::optional<std::string>& control) {
  if (!ev.assessment) return true;
  const auto scope = *ev.assessment == Verdict::Solved ? ControlScope::Solution : ControlScope::Step;
  const auto a = assess(c.controls, ev.after, scope);
  if (a.verdict != *ev.assessment) return false;
  control = a.control;
  return true;
}

CandidateScore score(const Conception& c, const Trace& trace) {
  CandidateScore s;
  s.conception = c.id;
  for (const auto& ev : trace.events) {
    EventExplanation ex;
    const auto steps = explain_step({&c}, ev.before, ev.after);
    if (!steps.empty() && assessment_agrees(c, ev, ex.control)) {
      ex.explained = true;
      ex.step = steps.front();
      ++s.explained;
    }
    s.events.push_back(std::move(ex));
  }
  s.coverage = Rational(static_cast<long>(s.explained), static_cast<long>(trace.events.size()));
  return s;
}

DiagnosisReport rank(std::vector<CandidateScore> scores, std::size_t total) {
  std::stable_sort(scores.begin(), scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
    if (a.coverage != b.coverage) return a.coverage > b.coverage;
    return a.conception < b.conception;
  });
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i].rank = i + 1;
  return DiagnosisReport{total, std::move(scores)};
}

void require_events(const Trace& trace) {
  if (trace.events.empty()) throw TraceError("trace has no events");
}

}  // namespace

Trace parse_trace(std::string_view json_text, const Registry& reg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw TraceError(std::string("trace is not valid JSON: ") + e.what());
  }
  const json* events = &doc;
  if (doc.is_object()) {
    if (!doc.contains("events")) throw TraceError("trace object has no `events` array");
    events = &doc["events"];
  }
  if (!events->is_array()) throw TraceError("trace events must be an array");
  Trace trace;
  for (std::size_t i = 0; i < events->size(); ++i) {
    const auto& ev = (*events)[i];
    if (!ev.is_object()) throw TraceError("event " + std::to_string(i) + " is not an object");
    TraceEvent out{event_term(ev, "before", i, reg), event_term(ev, "after", i, reg), std::nullopt};
    if (ev.contains("assessment") && !ev["assessment"].is_null()) {
      const auto& a = ev["assessment"];
      const auto text = a.is_string() ? a.get<std::string>() : std::string();
      if (text != "valid" && text != "invalid" && text != "solved")
        throw TraceError("event " + std::to_string(i) + ": assessment must be valid, invalid or solved");
      out.assessment = parse_verdict(text);
    }
    trace.events.push_back(std::move(out));
  }
  require_events(trace);
  return trace;
}

Trace trace_from_witness(const ConceptionSet& conceptions, const Term& problem,
                         const std::vector<WitnessStep>& witness) {
  Trace trace;
  const auto records = replay_witness(conceptions, problem, witness);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto* actor = find_in(conceptions, r.tag.conception);
    TraceEvent ev{r.before, r.after, std::nullopt};
    const bool last = i + 1 == records.size();
    if (last && assess(actor->controls, r.after, ControlScope::Solution).verdict == Verdict::Solved) {
      ev.assessment = Verdict::Solved;
    } else {
      const auto a = assess(actor->controls, r.after, ControlScope::Step);
      if (a.verdict != Verdict::Undecided) ev.assessment = a.verdict;
    }
    trace.events.push_back(std::move(ev));
  }
  return trace;
}

std::vector<WitnessStep> explain_step(const ConceptionSet& candidates, const Term& before, const Term& after) {
  std::vector<WitnessStep> out;
  for (const auto* c : candidates)
    for (const auto& op : c->operators) {
      std::vector<Application> apps;
      try {
        apps = apply_operator(op, before);
      } catch (const EvalError&) {
        continue;
      }
      for (const auto& app : apps)
        if (app.result == after) out.push_back({c->id, op.id, app.position});
    }
  return out;
}

const CandidateScore& DiagnosisReport::score(std::string_view conception) const {
  for (const auto& s : ranking)
    if (s.conception == conception) return s;
  throw NotFound("no score for conception '" + std::string(conception) + "'");
}

DiagnosisReport diagnose(const Registry& reg, const Trace& trace) {
  require_events(trace);
  const auto& cs = reg.conceptions();
  auto scores = parallel_map(cs.size(), [&](std::size_t i) { return score(cs[i], trace); });
  return rank(std::move(scores), trace.events.size());
}

namespace serial {

DiagnosisReport diagnose(const Registry& reg, const Trace& trace) {
  require_events(trace);
  std::vector<CandidateScore> scores;
  for (const auto& c : reg.conceptions()) scores.push_back(score(c, trace));
  return rank(std::move(scores), trace.events.size());
}

}  // namespace serial

}  // namespace ckc
