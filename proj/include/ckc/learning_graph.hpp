#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckc/registry.hpp"
#include "ckc/solver.hpp"

namespace ckc {

/// A problem as a conception sees it: the term in the conception's language
/// and the translation used to get there ("" when no translation was needed).
struct Rendering {
  Term term;
  std::string translation;
};

/// Direct conformance or membership first, then the declared translations
/// from the problem's language in declaration order.
std::optional<Rendering> render_problem(const Registry& reg, const Conception& c, const Problem& p);

struct Destabilization {
  bool holds = false;
  bool representable = false;
  /// First applicable operator of C, if any.
  std::optional<WitnessStep> activation;
  SolveResult result;
  /// The failure was witnessed by an explicit invalid verdict rather than by
  /// running out of states.
  bool invalid_witnessed = false;
};

/// p destabilizes C: p is representable for C, some operator of C applies,
/// and C alone does not solve p.
Destabilization destabilizes(const Term& p, const Conception& c, const Budget& budget = {});

enum class EdgeKind { Solves, Destabilizes };
std::string to_string(EdgeKind k);

struct Edge {
  EdgeKind kind = EdgeKind::Solves;
  std::string conception;
  std::string problem;
  Rendering rendering;
  SolveResult result;
  std::optional<WitnessStep> activation;
  bool invalid_witnessed = false;
  /// Solves edge on a problem in the conception's P.
  bool reinforcing = false;
};

struct LearningGraph {
  std::vector<std::string> conceptions;
  std::vector<std::string> problems;
  std::vector<Edge> edges;  // conception-major, then problem order
  Budget budget;

  const Edge* find_edge(std::string_view conception, std::string_view problem) const;
};

/// One edge at most per (conception, problem) pair, computed in parallel and
/// merged in registry order.
LearningGraph build_graph(const Registry& reg, const Budget& budget = {});

namespace serial {
LearningGraph build_graph(const Registry& reg, const Budget& budget = {});
}

struct Conflict {
  std::string problem;
  Destabilization source;
  SolveResult target;
};

/// Named problems representable for both conceptions that destabilize `c`
/// and that `c_t` solves, shortest `c_t` witness first, then by id.
std::vector<Conflict> conflict_problems(const Conception& c, const Conception& c_t, const Registry& reg,
                                        const Budget& budget = {});

/// Alternating C_0, p_1, C_1, ..., p_k, C_k.
struct LearningPath {
  std::vector<std::string> conceptions;
  std::vector<std::string> problems;
};

/// Fewest-problem path along Destabilizes-then-Solves steps. Neighbours are
/// expanded in graph node order. Throws NotFound for unknown conceptions.
std::optional<LearningPath> plan_path(std::string_view source, std::string_view target,
                                      const LearningGraph& graph);

/// Alternation invariant: every p_i destabilizes C_{i-1} and C_i solves it.
bool path_valid(const LearningPath& path, const LearningGraph& graph);

/// Conceptions as boxes, problems as ellipses, Solves solid, Destabilizes dashed.
std::string to_dot(const LearningGraph& graph);

}  // namespace ckc
