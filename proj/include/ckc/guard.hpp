#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>

#include "ckc/pattern.hpp"

namespace ckc {

/// Arithmetic shared by guards and `@op(...)` template calls.
///
///   add sub mul div      exact rationals; div by zero is an EvalError
///   ceil-div floor-div   ceiling / floor of a/b
///   mod                  integers, result has the sign of the divisor
///   min max
///   numer denom          canonical numerator / positive denominator
///   digit-count          decimal digits of |n| for an integer n
bool is_arith_op(std::string_view op) noexcept;
Term apply_arith(std::string_view op, std::span<const Term> args);

/// Boolean guard over the variables bound by a rule's left-hand side.
///
/// Written in the term grammar, e.g. `(and (is-int ?a) (le (min ?a ?b) 9))`.
/// Connectives: and, or (n-ary, short-circuit), not. Comparisons lt le gt ge
/// take numbers; eq and ne compare any two terms structurally. Sort tests:
/// is-int, is-rat (non-integral rational), is-num, is-sym, is-compound.
/// `(quote t)` yields `t` literally. Symbols `true` and `false` are the
/// boolean constants; any other symbol is a symbol constant.
class PredExpr {
 public:
  /// The constant `true`.
  PredExpr();

  /// Validates operator names and arities.
  static PredExpr compile(const Term& expr);
  static PredExpr parse(std::string_view text);

  /// Throws EvalError on unbound variables, sort mismatches and division by
  /// zero. Never returns a silent false for those cases.
  bool eval(const Binding& b) const;

  std::set<std::string> variables() const { return variables_of(expr_); }
  const Term& expr() const noexcept { return expr_; }
  bool is_trivially_true() const;

 private:
  explicit PredExpr(Term expr) : expr_(std::move(expr)) {}
  Term expr_;
};

std::string to_string(const PredExpr& e);

}  // namespace ckc
