#include "ckc/pattern.hpp"

#include "ckc/guard.hpp"

namespace ckc {

bool match_into(const Pattern& p, const Term& t, Binding& b) {
  switch (p.kind()) {
    case TermKind::Variable: {
      auto [it, inserted] = b.try_emplace(p.name(), t);
      return inserted || it->second == t;
    }
    case TermKind::Compound: {
      if (!t.is_compound() || t.name() != p.name() || t.arity() != p.arity()) return false;
      const auto pa = p.args();
      const auto ta = t.args();
      for (std::size_t i = 0; i < pa.size(); ++i)
        if (!match_into(pa[i], ta[i], b)) return false;
      return true;
    }
    case TermKind::EvalCall:
      return false;
    default:
      return p == t;
  }
}

std::optional<Binding> match_pattern(const Pattern& p, const Term& t) {
  Binding b;
  if (!match_into(p, t, b)) return std::nullopt;
  return b;
}

Term instantiate(const Template& tmpl, const Binding& b) {
  if (tmpl.is_ground()) return tmpl;
  switch (tmpl.kind()) {
    case TermKind::Variable: {
      auto it = b.find(tmpl.name());
      if (it == b.end()) throw EvalError("unbound variable " + tmpl.name());
      return it->second;
    }
    case TermKind::Compound: {
      std::vector<Term> args;
      args.reserve(tmpl.arity());
      for (const auto& a : tmpl.args()) args.push_back(instantiate(a, b));
      return Term::compound(tmpl.name(), std::move(args));
    }
    case TermKind::EvalCall: {
      std::vector<Term> args;
      args.reserve(tmpl.arity());
      for (const auto& a : tmpl.args()) args.push_back(instantiate(a, b));
      return apply_arith(tmpl.name(), args);
    }
    default:
      return tmpl;
  }
}

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  if (t.kind() == TermKind::Compound || t.kind() == TermKind::EvalCall)
    for (const auto& a : t.args()) collect_vars(a, out);
}

void walk(const Term& t, Position& pos,
          const std::function<void(const Position&, const Term&)>& visit) {
  visit(pos, t);
  if (!t.is_compound()) return;
  const auto args = t.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    pos.push_back(i);
    walk(args[i], pos, visit);
    pos.pop_back();
  }
}

Term replace_rec(const Term& t, const Position& pos, std::size_t depth, Term replacement) {
  if (depth == pos.size()) return replacement;
  if (!t.is_compound() || pos[depth] >= t.arity())
    throw std::out_of_range("position " + to_string(pos) + " outside term");
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[pos[depth]] = replace_rec(args[pos[depth]], pos, depth + 1, std::move(replacement));
  return Term::compound(t.name(), std::move(args));
}

}  // namespace

std::set<std::string> variables_of(const Term& t) {
  std::set<std::string> out;
  if (!t.is_ground()) collect_vars(t, out);
  return out;
}

void for_each_position(const Term& t,
                       const std::function<void(const Position&, const Term&)>& visit) {
  Position pos;
  walk(t, pos, visit);
}

const Term& subterm_at(const Term& t, const Position& pos) {
  const Term* cur = &t;
  for (auto i : pos) {
    if (!cur->is_compound() || i >= cur->arity())
      throw std::out_of_range("position " + to_string(pos) + " outside term");
    cur = &cur->args()[i];
  }
  return *cur;
}

Term replace_at(const Term& t, const Position& pos, Term replacement) {
  return replace_rec(t, pos, 0, std::move(replacement));
}

std::optional<Position> find_position(const Term& t, const Term& sub) {
  std::optional<Position> found;
  for_each_position(t, [&](const Position& p, const Term& s) {
    if (!found && s == sub) found = p;
  });
  return found;
}

}  // namespace ckc
