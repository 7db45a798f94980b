#include "ckc/guard.hpp"

#include <array>
#include <variant>

namespace ckc {
namespace {

struct OpSpec {
  std::string_view name;
  int min_arity;
  int max_arity;  // -1: unbounded
};

constexpr std::array kArith{
    OpSpec{"add", 2, 2},   OpSpec{"sub", 2, 2},       OpSpec{"mul", 2, 2},
    OpSpec{"div", 2, 2},   OpSpec{"ceil-div", 2, 2},  OpSpec{"floor-div", 2, 2},
    OpSpec{"mod", 2, 2},   OpSpec{"min", 2, 2},       OpSpec{"max", 2, 2},
    OpSpec{"numer", 1, 1}, OpSpec{"denom", 1, 1},     OpSpec{"digit-count", 1, 1},
};

constexpr std::array kLogic{
    OpSpec{"and", 0, -1},        OpSpec{"or", 0, -1},     OpSpec{"not", 1, 1},
    OpSpec{"lt", 2, 2},          OpSpec{"le", 2, 2},      OpSpec{"gt", 2, 2},
    OpSpec{"ge", 2, 2},          OpSpec{"eq", 2, 2},      OpSpec{"ne", 2, 2},
    OpSpec{"is-int", 1, 1},      OpSpec{"is-rat", 1, 1},  OpSpec{"is-num", 1, 1},
    OpSpec{"is-sym", 1, 1},      OpSpec{"is-compound", 1, 1},
    OpSpec{"quote", 1, 1},
};

template <std::size_t N>
const OpSpec* find_op(const std::array<OpSpec, N>& table, std::string_view name) {
  for (const auto& op : table)
    if (op.name == name) return &op;
  return nullptr;
}

const Rational& numeric(const Term& t, std::string_view op) {
  if (!t.is_number())
    throw EvalError(std::string(op) + ": expected a number, got " + to_string(t));
  return t.value();
}

BigInt integral(const Term& t, std::string_view op) {
  if (t.kind() != TermKind::Int)
    throw EvalError(std::string(op) + ": expected an integer, got " + to_string(t));
  return numerator(t.value());
}

BigInt floor_of(const Rational& q) {
  BigInt n = numerator(q);
  const BigInt d = denominator(q);
  BigInt f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

BigInt ceil_of(const Rational& q) {
  BigInt n = numerator(q);
  const BigInt d = denominator(q);
  BigInt c = n / d;
  if (n > 0 && c * d != n) c += 1;
  return c;
}

Rational checked_div(const Rational& a, const Rational& b, std::string_view op) {
  if (b == 0) throw EvalError(std::string(op) + ": division by zero");
  return a / b;
}

using Value = std::variant<bool, Term>;

Value eval_node(const Term& e, const Binding& b);

bool as_bool(const Value& v, std::string_view ctx) {
  if (const bool* p = std::get_if<bool>(&v)) return *p;
  throw EvalError(std::string(ctx) + ": expected a boolean, got " + to_string(std::get<Term>(v)));
}

Term as_term(const Value& v, std::string_view ctx) {
  if (const Term* p = std::get_if<Term>(&v)) return *p;
  throw EvalError(std::string(ctx) + ": expected a term, got a boolean");
}

Value eval_node(const Term& e, const Binding& b) {
  switch (e.kind()) {
    case TermKind::Variable: {
      auto it = b.find(e.name());
      if (it == b.end()) throw EvalError("unbound variable " + e.name());
      return it->second;
    }
    case TermKind::Symbol:
      if (e.name() == "true") return true;
      if (e.name() == "false") return false;
      return e;
    case TermKind::Int:
    case TermKind::Rat:
      return e;
    case TermKind::EvalCall:
      throw EvalError("eval call not allowed inside a guard: " + to_string(e));
    case TermKind::Compound:
      break;
  }

  const std::string& op = e.name();
  const auto args = e.args();
  if (op == "quote") return args[0];
  if (op == "and") {
    for (const auto& a : args)
      if (!as_bool(eval_node(a, b), op)) return false;
    return true;
  }
  if (op == "or") {
    for (const auto& a : args)
      if (as_bool(eval_node(a, b), op)) return true;
    return false;
  }
  if (op == "not") return !as_bool(eval_node(args[0], b), op);

  if (op == "eq" || op == "ne") {
    const bool same = as_term(eval_node(args[0], b), op) == as_term(eval_node(args[1], b), op);
    return op == "eq" ? same : !same;
  }
  if (op == "lt" || op == "le" || op == "gt" || op == "ge") {
    const Term l = as_term(eval_node(args[0], b), op);
    const Term r = as_term(eval_node(args[1], b), op);
    const Rational& x = numeric(l, op);
    const Rational& y = numeric(r, op);
    if (op == "lt") return x < y;
    if (op == "le") return x <= y;
    if (op == "gt") return x > y;
    return x >= y;
  }
  if (op.starts_with("is-")) {
    const Term t = as_term(eval_node(args[0], b), op);
    if (op == "is-int") return t.kind() == TermKind::Int;
    if (op == "is-rat") return t.kind() == TermKind::Rat;
    if (op == "is-num") return t.is_number();
    if (op == "is-sym") return t.kind() == TermKind::Symbol;
    return t.is_compound();
  }
  std::vector<Term> vals;
  vals.reserve(args.size());
  for (const auto& a : args) vals.push_back(as_term(eval_node(a, b), op));
  return apply_arith(op, vals);
}

void validate(const Term& e) {
  if (e.kind() == TermKind::EvalCall)
    throw EvalError("eval call not allowed inside a guard: " + to_string(e));
  if (!e.is_compound()) return;
  const OpSpec* spec = find_op(kLogic, e.name());
  if (!spec) spec = find_op(kArith, e.name());
  if (!spec) throw EvalError("unknown guard operator '" + e.name() + "'");
  const int n = static_cast<int>(e.arity());
  if (n < spec->min_arity || (spec->max_arity >= 0 && n > spec->max_arity))
    throw EvalError("guard operator '" + e.name() + "' given " + std::to_string(n) + " arguments");
  if (e.name() == "quote") return;
  for (const auto& a : e.args()) validate(a);
}

}  // namespace

bool is_arith_op(std::string_view op) noexcept { return find_op(kArith, op) != nullptr; }

Term apply_arith(std::string_view op, std::span<const Term> args) {
  const OpSpec* spec = find_op(kArith, op);
  if (!spec) throw EvalError("unknown arithmetic operator '" + std::string(op) + "'");
  if (static_cast<int>(args.size()) != spec->min_arity)
    throw EvalError(std::string(op) + ": wrong number of arguments");

  if (op == "numer") return Term::integer(numerator(numeric(args[0], op)));
  if (op == "denom") return Term::integer(denominator(numeric(args[0], op)));
  if (op == "digit-count") {
    BigInt n = integral(args[0], op);
    if (n < 0) n = -n;
    return Term::integer(static_cast<long>(n.str().size()));
  }
  if (op == "mod") {
    const BigInt a = integral(args[0], op);
    const BigInt m = integral(args[1], op);
    if (m == 0) throw EvalError("mod: division by zero");
    BigInt r = a % m;
    if (r != 0 && ((r < 0) != (m < 0))) r += m;
    return Term::integer(std::move(r));
  }

  const Rational& x = numeric(args[0], op);
  const Rational& y = numeric(args[1], op);
  if (op == "add") return Term::number(x + y);
  if (op == "sub") return Term::number(x - y);
  if (op == "mul") return Term::number(x * y);
  if (op == "div") return Term::number(checked_div(x, y, op));
  if (op == "ceil-div") return Term::integer(ceil_of(checked_div(x, y, op)));
  if (op == "floor-div") return Term::integer(floor_of(checked_div(x, y, op)));
  if (op == "min") return Term::number(x < y ? x : y);
  return Term::number(x < y ? y : x);
}

PredExpr::PredExpr() : expr_(Term::symbol("true")) {}

PredExpr PredExpr::compile(const Term& expr) {
  validate(expr);
  return PredExpr(expr);
}

PredExpr PredExpr::parse(std::string_view text) { return compile(parse_pattern(text)); }

bool PredExpr::eval(const Binding& b) const { return as_bool(eval_node(expr_, b), "guard"); }

bool PredExpr::is_trivially_true() const {
  return expr_.kind() == TermKind::Symbol && expr_.name() == "true";
}

std::string to_string(const PredExpr& e) { return to_string(e.expr()); }

}  // namespace ckc
