#include "ckc/language.hpp"

#include <stdexcept>

namespace ckc {

std::string to_string(AtomSort s) {
  switch (s) {
    case AtomSort::Symbol: return "symbol";
    case AtomSort::Int: return "int";
    case AtomSort::Rat: return "rat";
  }
  return "?";
}

AtomSort parse_atom_sort(std::string_view s) {
  if (s == "symbol") return AtomSort::Symbol;
  if (s == "int") return AtomSort::Int;
  if (s == "rat") return AtomSort::Rat;
  throw std::invalid_argument("unknown atom sort '" + std::string(s) + "'");
}

namespace {

bool shape_conforms(const Language& lang, const Term& t) {
  switch (t.kind()) {
    case TermKind::Symbol: return lang.atom_sorts.contains(AtomSort::Symbol);
    case TermKind::Int: return lang.atom_sorts.contains(AtomSort::Int);
    case TermKind::Rat: return lang.atom_sorts.contains(AtomSort::Rat);
    case TermKind::Compound: {
      auto it = lang.signature.find(t.name());
      if (it == lang.signature.end() || it->second != t.arity()) return false;
      for (const auto& a : t.args())
        if (!shape_conforms(lang, a)) return false;
      return true;
    }
    default: return false;
  }
}

bool constraints_hold(const Language& lang, const Term& t) {
  if (lang.constraints.empty()) return true;
  bool ok = true;
  for_each_position(t, [&](const Position&, const Term& sub) {
    if (!ok) return;
    for (const auto& c : lang.constraints) {
      auto b = match_pattern(c.pattern, sub);
      if (!b) continue;
      try {
        if (!c.guard.eval(*b)) ok = false;
      } catch (const EvalError&) {
        ok = false;
      }
    }
  });
  return ok;
}

void collect_foreign(const Language& lang, const Term& p, std::vector<std::string>& out) {
  if (p.kind() == TermKind::EvalCall) {
    for (const auto& a : p.args()) collect_foreign(lang, a, out);
    return;
  }
  if (!p.is_compound()) return;
  auto it = lang.signature.find(p.name());
  if (it == lang.signature.end() || it->second != p.arity())
    out.push_back(p.name() + "/" + std::to_string(p.arity()));
  for (const auto& a : p.args()) collect_foreign(lang, a, out);
}

Term translate_node(const TranslationStage& stage, const std::string& id, const Term& t, const Position& path) {
  for (const auto& rule : stage.rules) {
    auto b = match_pattern(rule.lhs, t);
    if (!b || !rule.guard.eval(*b)) continue;
    if (!rule.lhs.is_variable()) {
      for (auto& [name, bound] : *b) {
        Position sub_path = path;
        if (auto rel = find_position(t, bound)) sub_path.insert(sub_path.end(), rel->begin(), rel->end());
        bound = translate_node(stage, id, bound, sub_path);
      }
    }
    return instantiate(rule.rhs, *b);
  }
  if (t.is_atom()) return t;
  throw TranslationError(TranslationError::Kind::NoRuleApplies, id, path,
                         "translation " + id + ": no rule applies to " + to_string(t) + " at " +
                             to_string(path));
}

}  // namespace

bool conforms(const Language& lang, const Term& t) {
  return shape_conforms(lang, t) && constraints_hold(lang, t);
}

std::vector<std::string> foreign_heads(const Language& lang, const Pattern& p) {
  std::vector<std::string> out;
  collect_foreign(lang, p, out);
  return out;
}

Translation::Translation(std::string id, LanguagePtr source, LanguagePtr target,
                         std::vector<RewriteRule> rules)
    : id_(std::move(id)) {
  if (!source || !target) throw std::invalid_argument("translation " + id_ + ": null language");
  stages_.push_back({std::move(source), std::move(target), std::move(rules)});
  parts_.push_back(id_);
}

Translation Translation::identity(LanguagePtr lang) {
  const std::string id = "id:" + lang->id;
  return Translation(id, lang, lang,
                     {RewriteRule{Term::variable("x"), PredExpr(), Term::variable("x")}});
}

Translation compose(const Translation& f, const Translation& g) {
  if (f.target().id != g.source().id)
    throw std::invalid_argument("cannot compose " + f.id() + " (target " + f.target().id +
                                ") with " + g.id() + " (source " + g.source().id + ")");
  Translation out;
  out.id_ = f.id() + "," + g.id();
  out.stages_ = f.stages_;
  out.stages_.insert(out.stages_.end(), g.stages_.begin(), g.stages_.end());
  out.parts_ = f.parts_;
  out.parts_.insert(out.parts_.end(), g.parts_.begin(), g.parts_.end());
  return out;
}

Term translate(const Translation& f, const Term& t) {
  Term cur = t;
  for (const auto& stage : f.stages()) {
    if (!conforms(*stage.source, cur))
      throw TranslationError(TranslationError::Kind::SourceMismatch, f.id(), {},
                             "translation " + f.id() + ": " + to_string(cur) +
                                 " does not conform to source language " + stage.source->id);
    Term next = translate_node(stage, f.id(), cur, {});
    if (!conforms(*stage.target, next))
      throw TranslationError(TranslationError::Kind::TargetViolation, f.id(), {},
                             "translation " + f.id() + ": result " + to_string(next) +
                                 " does not conform to target language " + stage.target->id);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace ckc
