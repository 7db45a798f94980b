#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ckc/guard.hpp"

namespace ckc {

enum class AtomSort { Symbol, Int, Rat };

std::string to_string(AtomSort s);
AtomSort parse_atom_sort(std::string_view s);

/// Every subterm matching `pattern` must satisfy `guard`. Used for bounds a
/// register cannot express, such as numerals too long to be written.
struct LanguageConstraint {
  Pattern pattern;
  PredExpr guard;
};

/// A representation system: the heads (with fixed arity) and leaf sorts that
/// terms of this register may use.
struct Language {
  std::string id;
  std::map<std::string, std::size_t> signature;
  std::set<AtomSort> atom_sorts;
  std::vector<LanguageConstraint> constraints;
};

using LanguagePtr = std::shared_ptr<const Language>;

/// True iff every compound head is in the signature with matching arity, every
/// leaf sort is permitted, and every constraint holds. Non-ground terms never
/// conform.
bool conforms(const Language& lang, const Term& t);

/// Heads of a pattern/template outside the signature, ignoring variables and
/// eval calls. Empty when the pattern is well formed for `lang`.
std::vector<std::string> foreign_heads(const Language& lang, const Pattern& p);

struct RewriteRule {
  Pattern lhs;
  PredExpr guard;
  Template rhs;
};

/// One rule list between two languages.
struct TranslationStage {
  LanguagePtr source;
  LanguagePtr target;
  std::vector<RewriteRule> rules;
};

class TranslationError : public Error {
 public:
  enum class Kind { SourceMismatch, NoRuleApplies, TargetViolation };
  TranslationError(Kind kind, std::string translation, Position path, const std::string& what)
      : Error(what), kind_(kind), translation_(std::move(translation)), path_(std::move(path)) {}
  Kind kind() const noexcept { return kind_; }
  const std::string& translation() const noexcept { return translation_; }
  const Position& path() const noexcept { return path_; }

 private:
  Kind kind_;
  std::string translation_;
  Position path_;
};

/// A partial representation function f: L' -> L.
///
/// Rules fire top-down, first match wins. When a rule fires, the subterms its
/// left-hand side bound are translated recursively before the right-hand side
/// is instantiated; a bare-variable left-hand side binds the node verbatim.
/// Atoms no rule matches pass through unchanged; compounds no rule matches
/// raise NoRuleApplies. A composed translation is a chain of stages, each
/// checked against its own target.
class Translation {
 public:
  Translation(std::string id, LanguagePtr source, LanguagePtr target,
              std::vector<RewriteRule> rules);

  /// The rule `?x -> ?x` on `lang`.
  static Translation identity(LanguagePtr lang);

  const std::string& id() const noexcept { return id_; }
  const Language& source() const noexcept { return *stages_.front().source; }
  const Language& target() const noexcept { return *stages_.back().target; }
  const std::vector<TranslationStage>& stages() const noexcept { return stages_; }
  /// Ids of the declared translations this one is built from.
  const std::vector<std::string>& parts() const noexcept { return parts_; }

  friend Translation compose(const Translation& f, const Translation& g);

 private:
  Translation() = default;
  std::string id_;
  std::vector<TranslationStage> stages_;
  std::vector<std::string> parts_;
};

/// g after f. Throws std::invalid_argument when target(f) != source(g).
Translation compose(const Translation& f, const Translation& g);

Term translate(const Translation& f, const Term& t);

}  // namespace ckc
