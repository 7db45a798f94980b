#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ckc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term text. `offset` is the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised by guard evaluation and template instantiation: unbound variable,
/// sort mismatch, division by zero.
class EvalError : public Error {
 public:
  using Error::Error;
};

enum class TermKind { Symbol, Int, Rat, Compound, Variable, EvalCall };

/// Immutable symbolic expression.
///
/// Ground terms are symbols, integers, canonical rationals and compounds.
/// Patterns additionally carry variables (`?x`); templates may also carry
/// embedded arithmetic calls (`@add(?x 1)`). Numbers are held as canonical
/// rationals, so an integral value is always reported as `TermKind::Int`.
///
/// Nodes are shared and never mutated, so copies are cheap and a Term can be
/// read concurrently from any number of threads.
class Term {
 public:
  /// The integer 0.
  Term();

  static Term symbol(std::string name);
  static Term integer(BigInt value);
  static Term number(Rational value);
  static Term compound(std::string head, std::vector<Term> args);
  static Term variable(std::string name);
  static Term eval_call(std::string op, std::vector<Term> args);

  TermKind kind() const noexcept;
  bool is_number() const noexcept;
  bool is_atom() const noexcept;
  bool is_compound() const noexcept { return kind() == TermKind::Compound; }
  bool is_variable() const noexcept { return kind() == TermKind::Variable; }
  /// No variables and no eval calls anywhere inside.
  bool is_ground() const noexcept;

  /// Symbol name, compound head, variable name or eval-call operator.
  const std::string& name() const;
  const Rational& value() const;
  std::span<const Term> args() const noexcept;
  std::size_t arity() const noexcept { return args().size(); }

  std::size_t hash() const noexcept;

  friend bool operator==(const Term& a, const Term& b) noexcept;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

bool is_identifier(std::string_view s) noexcept;

std::string to_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

/// Parses a ground term. Variables and eval calls are rejected.
Term parse_term(std::string_view text);
/// Parses a pattern or template: variables and `@op(...)` calls allowed.
Term parse_pattern(std::string_view text);

/// Path of argument indices from the root; empty is the root itself.
using Position = std::vector<std::size_t>;

/// "root" or dot-separated zero-based argument indices, e.g. "1.0".
std::string to_string(const Position& pos);
Position parse_position(std::string_view text);

}  // namespace ckc
