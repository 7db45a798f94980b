#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ckc/conception.hpp"

namespace ckc {

struct Budget {
  int max_depth = 12;
  std::size_t max_states = 100000;
};

enum class SolveStatus { Solved, Exhausted, PrunedAll };

std::string to_string(SolveStatus s);
SolveStatus parse_solve_status(std::string_view s);

/// One tagged operator application: which conception acted, with which
/// operator, at which position.
struct WitnessStep {
  std::string conception;
  std::string op;
  Position position;

  friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

/// A successor rejected by the acting conception's step controls.
struct Pruning {
  Term term;
  std::string conception;
  std::string control;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Exhausted;
  std::vector<WitnessStep> witness;
  std::optional<Term> final_term;
  /// Solution control that pronounced `final_term` solved, and its owner.
  std::optional<std::string> final_control;
  std::optional<std::string> final_conception;
  std::size_t states_explored = 0;
  std::size_t prunings = 0;
  std::optional<Pruning> first_pruning;
  /// True when the search stopped on the depth or state budget rather than
  /// closing its reachable state space.
  bool budget_hit = false;
};

struct SolveOptions {
  /// Accept a solved verdict only from the conception that applied the last
  /// operator. Off by default: any listed conception's Sigma may pronounce.
  bool strict_last_actor = false;
};

using ConceptionSet = std::vector<const Conception*>;

/// Breadth-first search for the shortest operator sequence ending in a state
/// some listed conception's solution controls pronounce solved.
///
/// Successors are enumerated in conception list order, then operator
/// declaration order, then position order. A successor the acting
/// conception's step controls judge invalid is pruned. States are memoized on
/// the term alone. At least one operator must be applied.
///
/// Status when not solved: `pruned-all` if the reachable state space closed
/// within budget and at least one successor was pruned; otherwise `exhausted`
/// (budget reached, or the space closed without any pruning).
SolveResult solves(const ConceptionSet& conceptions, const Term& problem, const Budget& budget = {},
                   const SolveOptions& options = {});

/// One replayed witness step with every step-control verdict on `after`.
struct StepRecord {
  Term before;
  Term after;
  WitnessStep tag;
  std::vector<std::pair<std::string, Verdict>> step_verdicts;
};

/// Re-applies a witness. Throws std::runtime_error if a step does not apply.
std::vector<StepRecord> replay_witness(const ConceptionSet& conceptions, const Term& problem,
                                       const std::vector<WitnessStep>& witness);

/// Replays a solved result and checks the final term and solving control.
bool verify_solved(const ConceptionSet& conceptions, const Term& problem, const SolveResult& result);

/// C is specific for p within `context`: the context solves p and the
/// context without C does not.
bool is_specific(const Conception& c, const ConceptionSet& context, const Term& problem,
                 const Budget& budget = {});

/// Replacing c1 by c2 in `context` leaves the solve status for p unchanged.
bool equivalent_for(const Conception& c1, const Conception& c2, const ConceptionSet& context,
                    const Term& problem, const Budget& budget = {});

}  // namespace ckc
