#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "ckc/term.hpp"

namespace ckc {

/// Variable name to bound term.
using Binding = std::map<std::string, Term>;

/// Patterns and templates share the Term representation. A Pattern may hold
/// variables; a Template may also hold `@op(...)` eval calls.
using Pattern = Term;
using Template = Term;

/// One-sided matching. Repeated variables must bind structurally equal terms.
std::optional<Binding> match_pattern(const Pattern& p, const Term& t);

/// Extends `b` in place; on failure `b` may hold partial bindings.
bool match_into(const Pattern& p, const Term& t, Binding& b);

/// Substitutes bindings and evaluates embedded arithmetic calls bottom-up.
/// The result is always ground.
Term instantiate(const Template& tmpl, const Binding& b);

/// Variables occurring anywhere in `t`.
std::set<std::string> variables_of(const Term& t);

/// Visits every subterm in leftmost-outermost (pre-order) order.
void for_each_position(const Term& t,
                       const std::function<void(const Position&, const Term&)>& visit);

const Term& subterm_at(const Term& t, const Position& pos);
Term replace_at(const Term& t, const Position& pos, Term replacement);

/// Position of the first pre-order occurrence of `sub`, if any.
std::optional<Position> find_position(const Term& t, const Term& sub);

}  // namespace ckc
