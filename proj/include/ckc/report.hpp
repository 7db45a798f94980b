#pragma once

#include "json.hpp"

#include "ckc/diagnosis.hpp"
#include "ckc/learning_graph.hpp"
#include "ckc/packs.hpp"
#include "ckc/relations.hpp"
#include "ckc/solver.hpp"

namespace ckc::report {

/// Objects use sorted keys so dumps are byte-stable.
using Json = nlohmann::json;

Json rational(const Rational& q);
Json witness_step(const WitnessStep& s);
Json solve_result(const SolveResult& r);
/// Before/after terms and step verdicts of a replayed witness.
Json replay(const std::vector<StepRecord>& steps);
Json relation(const RelationReport& r);
Json partition(const std::vector<ConceptClass>& classes);
Json destabilization(const Destabilization& d);
Json graph(const LearningGraph& g);
Json path(const LearningPath& p);
Json conflicts(const std::vector<Conflict>& cs);
Json trace(const Trace& t);
Json diagnosis(const DiagnosisReport& r);
Json issues(const std::vector<ValidationIssue>& issues);
Json manifest(const PackManifest& m);

}  // namespace ckc::report
