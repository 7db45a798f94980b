#include "ckc/conception.hpp"

#include <stdexcept>

namespace ckc {

std::string to_string(ControlScope s) { return s == ControlScope::Step ? "step" : "solution"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::Solved: return "solved";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

ControlScope parse_control_scope(std::string_view s) {
  if (s == "step") return ControlScope::Step;
  if (s == "solution") return ControlScope::Solution;
  throw std::invalid_argument("unknown control scope '" + std::string(s) + "'");
}

Verdict parse_verdict(std::string_view s) {
  if (s == "valid") return Verdict::Valid;
  if (s == "invalid") return Verdict::Invalid;
  if (s == "solved") return Verdict::Solved;
  if (s == "undecided") return Verdict::Undecided;
  throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

const Operator* Conception::find_operator(std::string_view op_id) const {
  for (const auto& op : operators)
    if (op.id == op_id) return &op;
  return nullptr;
}

const Control* Conception::find_control(std::string_view control_id) const {
  for (const auto& c : controls)
    if (c.id == control_id) return &c;
  return nullptr;
}

bool membership(const ProblemSet& problems, const Term& t) {
  for (const auto& p : problems.prototypes)
    if (p.term == t) return true;
  for (const auto& rule : problems.membership) {
    auto b = match_pattern(rule.pattern, t);
    if (!b) continue;
    try {
      if (rule.guard.eval(*b)) return true;
    } catch (const EvalError&) {
    }
  }
  return false;
}

namespace {

bool guard_holds(const PredExpr& g, const Binding& b) {
  try {
    return g.eval(b);
  } catch (const EvalError&) {
    return false;
  }
}

}  // namespace

std::vector<Application> apply_operator(const Operator& op, const Term& t) {
  std::vector<Application> out;
  for_each_position(t, [&](const Position& pos, const Term& sub) {
    auto b = match_pattern(op.lhs, sub);
    if (!b || !guard_holds(op.guard, *b)) return;
    out.push_back({pos, replace_at(t, pos, instantiate(op.rhs, *b))});
  });
  return out;
}

std::optional<Term> apply_operator_at(const Operator& op, const Term& t, const Position& pos) {
  const Term* sub = nullptr;
  try {
    sub = &subterm_at(t, pos);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
  auto b = match_pattern(op.lhs, *sub);
  if (!b || !guard_holds(op.guard, *b)) return std::nullopt;
  return replace_at(t, pos, instantiate(op.rhs, *b));
}

Assessment assess(std::span<const Control> sigma, const Term& t, ControlScope scope) {
  for (const auto& c : sigma) {
    if (c.scope != scope) continue;
    auto b = match_pattern(c.pattern, t);
    if (!b) continue;
    bool holds = false;
    try {
      holds = c.guard.eval(*b);
    } catch (const EvalError&) {
    }
    if (holds) return {c.verdict, c.id};
  }
  return {};
}

}  // namespace ckc
