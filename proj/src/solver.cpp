#include "ckc/solver.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ckc {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Exhausted: return "exhausted";
    case SolveStatus::PrunedAll: return "pruned-all";
  }
  return "?";
}

SolveStatus parse_solve_status(std::string_view s) {
  if (s == "solved") return SolveStatus::Solved;
  if (s == "exhausted") return SolveStatus::Exhausted;
  if (s == "pruned-all") return SolveStatus::PrunedAll;
  throw std::invalid_argument("unknown solve status '" + std::string(s) + "'");
}

namespace {

struct SearchNode {
  Term term;
  std::size_t parent;
  WitnessStep step;
};

struct Pronouncement {
  std::string control;
  std::string conception;
};

std::optional<Pronouncement> pronounce(const ConceptionSet& set, const Conception& actor,
                                       const Term& t, bool strict) {
  auto check = [&](const Conception& c) -> std::optional<Pronouncement> {
    const auto a = assess(c.controls, t, ControlScope::Solution);
    if (a.verdict == Verdict::Solved) return Pronouncement{*a.control, c.id};
    return std::nullopt;
  };
  if (strict) return check(actor);
  for (const auto* c : set)
    if (auto p = check(*c)) return p;
  return std::nullopt;
}

std::vector<WitnessStep> path_to(const std::vector<SearchNode>& nodes, std::size_t idx) {
  std::vector<WitnessStep> out;
  while (idx != 0) {
    out.push_back(nodes[idx].step);
    idx = nodes[idx].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

SolveResult solves(const ConceptionSet& conceptions, const Term& problem, const Budget& budget,
                   const SolveOptions& options) {
  if (budget.max_depth <= 0 || budget.max_states == 0)
    throw std::invalid_argument("budget values must be positive");

  SolveResult result;
  std::vector<SearchNode> nodes{{problem, 0, {}}};
  std::unordered_set<Term, TermHash> visited{problem};
  std::vector<std::size_t> level{0};

  auto finish_solved = [&](std::size_t parent, WitnessStep step, const Term& t,
                           const Pronouncement& p) {
    result.status = SolveStatus::Solved;
    result.witness = path_to(nodes, parent);
    result.witness.push_back(std::move(step));
    result.final_term = t;
    result.final_control = p.control;
    result.final_conception = p.conception;
    result.states_explored = nodes.size();
    return result;
  };

  for (int depth = 0;; ++depth) {
    if (level.empty()) {
      result.status = result.prunings > 0 ? SolveStatus::PrunedAll : SolveStatus::Exhausted;
      break;
    }
    if (depth == budget.max_depth) {
      // Peek one level: the budget only matters if it cut off new valid states.
      bool open = false;
      for (std::size_t idx : level) {
        for (const auto* c : conceptions) {
          for (const auto& op : c->operators) {
            for (auto& app : apply_operator(op, nodes[idx].term)) {
              if (visited.contains(app.result)) continue;
              if (assess(c->controls, app.result, ControlScope::Step).verdict == Verdict::Invalid) continue;
              open = true;
              break;
            }
            if (open) break;
          }
          if (open) break;
        }
        if (open) break;
      }
      result.budget_hit = open;
      result.status = (!open && result.prunings > 0) ? SolveStatus::PrunedAll : SolveStatus::Exhausted;
      break;
    }

    std::vector<std::size_t> next;
    for (std::size_t idx : level) {
      // Copy: `nodes` may reallocate while expanding.
      const Term current = nodes[idx].term;
      for (const auto* c : conceptions) {
        for (const auto& op : c->operators) {
          for (auto& app : apply_operator(op, current)) {
            const auto verdict = assess(c->controls, app.result, ControlScope::Step);
            if (verdict.verdict == Verdict::Invalid) {
              if (result.prunings++ == 0) result.first_pruning = Pruning{app.result, c->id, *verdict.control};
              continue;
            }
            WitnessStep step{c->id, op.id, app.position};
            const bool seen = visited.contains(app.result);
            // A visited state was already judged, except the initial problem
            // and, under strict semantics, a state reached by another actor.
            if (!seen || options.strict_last_actor || app.result == problem) {
              if (auto p = pronounce(conceptions, *c, app.result, options.strict_last_actor))
                return finish_solved(idx, std::move(step), app.result, *p);
            }
            if (seen) continue;
            if (nodes.size() >= budget.max_states) {
              result.budget_hit = true;
              result.status = SolveStatus::Exhausted;
              result.states_explored = nodes.size();
              return result;
            }
            visited.insert(app.result);
            nodes.push_back({app.result, idx, std::move(step)});
            next.push_back(nodes.size() - 1);
          }
        }
      }
    }
    level = std::move(next);
  }
  result.states_explored = nodes.size();
  return result;
}

std::vector<StepRecord> replay_witness(const ConceptionSet& conceptions, const Term& problem,
                                       const std::vector<WitnessStep>& witness) {
  std::vector<StepRecord> out;
  Term cur = problem;
  for (const auto& step : witness) {
    const Conception* actor = nullptr;
    for (const auto* c : conceptions)
      if (c->id == step.conception) actor = c;
    if (!actor) throw std::runtime_error("witness names conception " + step.conception + " outside the set");
    const Operator* op = actor->find_operator(step.op);
    if (!op) throw std::runtime_error("witness names unknown operator " + step.op);
    auto next = apply_operator_at(*op, cur, step.position);
    if (!next)
      throw std::runtime_error("operator " + step.op + " does not apply at " + to_string(step.position) +
                               " of " + to_string(cur));
    StepRecord rec{cur, *next, step, {}};
    for (const auto& ctl : actor->controls) {
      if (ctl.scope != ControlScope::Step) continue;
      auto b = match_pattern(ctl.pattern, *next);
      bool holds = false;
      if (b) {
        try {
          holds = ctl.guard.eval(*b);
        } catch (const EvalError&) {
        }
      }
      if (holds) rec.step_verdicts.emplace_back(ctl.id, ctl.verdict);
    }
    cur = *next;
    out.push_back(std::move(rec));
  }
  return out;
}

bool verify_solved(const ConceptionSet& conceptions, const Term& problem, const SolveResult& result) {
  if (result.status != SolveStatus::Solved || !result.final_term || !result.final_control ||
      result.witness.empty())
    return false;
  std::vector<StepRecord> steps;
  try {
    steps = replay_witness(conceptions, problem, result.witness);
  } catch (const std::runtime_error&) {
    return false;
  }
  if (steps.back().after != *result.final_term) return false;
  for (const auto* c : conceptions) {
    if (c->id != result.final_conception) continue;
    const auto a = assess(c->controls, *result.final_term, ControlScope::Solution);
    return a.verdict == Verdict::Solved && a.control == result.final_control;
  }
  return false;
}

namespace {

ConceptionSet without(const ConceptionSet& context, const Conception& c) {
  ConceptionSet out;
  for (const auto* x : context)
    if (x != &c && x->id != c.id) out.push_back(x);
  return out;
}

void require_member(const Conception& c, const ConceptionSet& context) {
  for (const auto* x : context)
    if (x == &c || x->id == c.id) return;
  throw std::invalid_argument("conception " + c.id + " is not in the context");
}

}  // namespace

bool is_specific(const Conception& c, const ConceptionSet& context, const Term& problem,
                 const Budget& budget) {
  require_member(c, context);
  if (solves(context, problem, budget).status != SolveStatus::Solved) return false;
  const auto rest = without(context, c);
  if (rest.empty()) return true;
  return solves(rest, problem, budget).status != SolveStatus::Solved;
}

bool equivalent_for(const Conception& c1, const Conception& c2, const ConceptionSet& context,
                    const Term& problem, const Budget& budget) {
  require_member(c1, context);
  auto replaced = without(context, c1);
  bool present = false;
  for (const auto* x : replaced) present = present || x->id == c2.id;
  if (!present) replaced.push_back(&c2);
  return solves(context, problem, budget).status == solves(replaced, problem, budget).status;
}

}  // namespace ckc
