#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ckc/language.hpp"

namespace ckc {

struct Prototype {
  std::string name;
  Term term;
};

struct MembershipRule {
  Pattern pattern;
  PredExpr guard;
};

/// P: a window of named prototypes plus membership patterns. With no
/// membership patterns, P is exactly the prototypes.
struct ProblemSet {
  std::vector<Prototype> prototypes;
  std::vector<MembershipRule> membership;
};

/// A guarded rewrite rule of R.
struct Operator {
  std::string id;
  Pattern lhs;
  PredExpr guard;
  Template rhs;
};

enum class ControlScope { Step, Solution };
enum class Verdict { Valid, Invalid, Solved, Undecided };

std::string to_string(ControlScope s);
std::string to_string(Verdict v);
ControlScope parse_control_scope(std::string_view s);
Verdict parse_verdict(std::string_view s);

/// A verdict-producing predicate of Sigma. Step controls judge intermediate
/// states (valid/invalid); solution controls pronounce termination.
struct Control {
  std::string id;
  ControlScope scope = ControlScope::Step;
  Pattern pattern;
  PredExpr guard;
  Verdict verdict = Verdict::Valid;
};

/// The quadruplet (P, R, L, Sigma).
struct Conception {
  std::string id;
  std::string description;
  ProblemSet problems;
  std::vector<Operator> operators;
  LanguagePtr language;
  std::vector<Control> controls;

  const Operator* find_operator(std::string_view op_id) const;
  const Control* find_control(std::string_view control_id) const;
};

/// Prototype equality or a membership pattern whose guard holds. Guard
/// evaluation errors count as non-membership.
bool membership(const ProblemSet& problems, const Term& t);

struct Application {
  Position position;
  Term result;
};

/// Every position (leftmost-outermost) where `op` applies, with the rewritten
/// whole term. A guard that fails to evaluate does not match; instantiation
/// errors propagate.
std::vector<Application> apply_operator(const Operator& op, const Term& t);

/// Applies `op` at exactly `pos`; nullopt when it does not apply there.
std::optional<Term> apply_operator_at(const Operator& op, const Term& t, const Position& pos);

struct Assessment {
  Verdict verdict = Verdict::Undecided;
  std::optional<std::string> control;

  friend bool operator==(const Assessment&, const Assessment&) = default;
};

/// The first control of the given scope, in declaration order, whose pattern
/// matches `t` at the root and whose guard holds decides; otherwise undecided.
/// A guard that fails to evaluate does not match.
Assessment assess(std::span<const Control> sigma, const Term& t, ControlScope scope);

}  // namespace ckc
