#include "ckc/report.hpp"

namespace ckc::report {

namespace {

Json term(const Term& t) { return to_string(t); }

template <class T, class Fn>
Json array_of(const std::vector<T>& xs, Fn fn) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(fn(x));
  return out;
}

Json optional_term(const std::optional<Term>& t) { return t ? term(*t) : Json(nullptr); }

}  // namespace

Json rational(const Rational& q) { return to_string(Term::number(q)); }

Json witness_step(const WitnessStep& s) {
  return {{"conception", s.conception}, {"operator", s.op}, {"position", to_string(s.position)}};
}

Json solve_result(const SolveResult& r) {
  Json j = {
      {"status", to_string(r.status)},
      {"witness", array_of(r.witness, witness_step)},
      {"witness_length", r.witness.size()},
      {"final_term", optional_term(r.final_term)},
      {"final_control", r.final_control ? Json(*r.final_control) : Json(nullptr)},
      {"final_conception", r.final_conception ? Json(*r.final_conception) : Json(nullptr)},
      {"states_explored", r.states_explored},
      {"prunings", r.prunings},
      {"budget_hit", r.budget_hit},
  };
  if (r.first_pruning)
    j["first_pruning"] = {{"term", term(r.first_pruning->term)},
                          {"conception", r.first_pruning->conception},
                          {"control", r.first_pruning->control}};
  else
    j["first_pruning"] = nullptr;
  return j;
}

Json replay(const std::vector<StepRecord>& steps) {
  return array_of(steps, [](const StepRecord& s) {
    Json verdicts = Json::array();
    for (const auto& [control, v] : s.step_verdicts) verdicts.push_back({{"control", control}, {"verdict", to_string(v)}});
    return Json{{"before", term(s.before)}, {"after", term(s.after)}, {"step", witness_step(s.tag)},
                {"step_verdicts", verdicts}};
  });
}

Json relation(const RelationReport& r) {
  Json j = {{"relation", to_string(r.relation)},
            {"holds", r.holds},
            {"translations_used", r.translations_used},
            {"skipped", array_of(r.skipped, [](const TranslationFailure& f) {
               return Json{{"prototype", f.prototype}, {"term", term(f.term)}, {"reason", f.reason}};
             })}};
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    j["counterexample"] = {{"conception", c.conception}, {"prototype", c.prototype}, {"term", term(c.term)},
                           {"translated", optional_term(c.translated)}, {"reason", c.reason}};
  } else {
    j["counterexample"] = nullptr;
  }
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"prototype", w.prototype},   {"problem", term(w.problem)},
                    {"steps", array_of(w.steps, witness_step)},
                    {"rewritten", term(w.rewritten)}, {"sigma", w.sigma},
                    {"translated", term(w.translated)}, {"sigma_prime", w.sigma_prime}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json partition(const std::vector<ConceptClass>& classes) {
  return array_of(classes, [](const ConceptClass& c) {
    return Json{{"id", c.id},
                {"reference", c.reference},
                {"unrelated", c.unrelated},
                {"members", array_of(c.members, [](const ConceptMember& m) {
                   return Json{{"conception", m.conception}, {"translation", m.translation}};
                 })}};
  });
}

Json destabilization(const Destabilization& d) {
  return {{"holds", d.holds},
          {"representable", d.representable},
          {"activation", d.activation ? witness_step(*d.activation) : Json(nullptr)},
          {"invalid_witnessed", d.invalid_witnessed},
          {"result", solve_result(d.result)}};
}

Json graph(const LearningGraph& g) {
  return {{"conceptions", g.conceptions},
          {"problems", g.problems},
          {"budget", {{"max_depth", g.budget.max_depth}, {"max_states", g.budget.max_states}}},
          {"edges", array_of(g.edges, [](const Edge& e) {
             return Json{{"kind", to_string(e.kind)},
                         {"conception", e.conception},
                         {"problem", e.problem},
                         {"rendered", term(e.rendering.term)},
                         {"translation", e.rendering.translation},
                         {"reinforcing", e.reinforcing},
                         {"activation", e.activation ? witness_step(*e.activation) : Json(nullptr)},
                         {"invalid_witnessed", e.invalid_witnessed},
                         {"result", solve_result(e.result)}};
           })}};
}

Json path(const LearningPath& p) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < p.conceptions.size(); ++i) {
    if (i > 0) nodes.push_back(p.problems[i - 1]);
    nodes.push_back(p.conceptions[i]);
  }
  return {{"nodes", nodes}, {"length", p.problems.size()}};
}

Json conflicts(const std::vector<Conflict>& cs) {
  return array_of(cs, [](const Conflict& c) {
    return Json{{"problem", c.problem}, {"destabilization", destabilization(c.source)},
                {"target", solve_result(c.target)}};
  });
}

Json trace(const Trace& t) {
  return array_of(t.events, [](const TraceEvent& e) {
    Json j = {{"before", term(e.before)}, {"after", term(e.after)}};
    if (e.assessment) j["assessment"] = to_string(*e.assessment);
    return j;
  });
}

Json diagnosis(const DiagnosisReport& r) {
  return {{"total_events", r.total_events},
          {"ranking", array_of(r.ranking, [](const CandidateScore& s) {
             return Json{{"conception", s.conception},
                         {"coverage", rational(s.coverage)},
                         {"explained", s.explained},
                         {"rank", s.rank},
                         {"events", array_of(s.events, [](const EventExplanation& e) {
                            return Json{{"explained", e.explained},
                                        {"step", e.step ? witness_step(*e.step) : Json(nullptr)},
                                        {"control", e.control ? Json(*e.control) : Json(nullptr)}};
                          })}};
           })}};
}

Json issues(const std::vector<ValidationIssue>& issues) {
  return array_of(issues, [](const ValidationIssue& i) {
    return Json{{"id", i.id}, {"location", i.location}, {"reason", i.reason}};
  });
}

Json manifest(const PackManifest& m) {
  return {{"id", m.id},
          {"description", m.description},
          {"languages", m.languages},
          {"conceptions", m.conceptions},
          {"problems", m.problems},
          {"translations", m.translations},
          {"reference", m.reference},
          {"fixtures", m.fixtures.size()}};
}

}  // namespace ckc::report
