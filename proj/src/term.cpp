#include "ckc/term.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>

namespace ckc {

struct Term::Node {
  TermKind kind;
  std::string name;
  Rational value;
  std::vector<Term> args;
  std::size_t hash = 0;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term::Term() : Term(Term::integer(0)) {}

Term Term::symbol(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Symbol;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::integer(BigInt value) { return number(Rational(std::move(value))); }

Term Term::number(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = denominator(value) == 1 ? TermKind::Int : TermKind::Rat;
  n->hash = mix(2, std::hash<std::string>{}(value.str()));
  n->value = std::move(value);
  return Term(std::move(n));
}

Term Term::compound(std::string head, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Compound;
  std::size_t h = mix(3, std::hash<std::string>{}(head));
  for (const auto& a : args) {
    h = mix(h, a.hash());
    n->ground = n->ground && a.is_ground();
  }
  n->hash = h;
  n->name = std::move(head);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Variable;
  n->ground = false;
  n->hash = mix(4, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::eval_call(std::string op, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::EvalCall;
  n->ground = false;
  std::size_t h = mix(5, std::hash<std::string>{}(op));
  for (const auto& a : args) h = mix(h, a.hash());
  n->hash = h;
  n->name = std::move(op);
  n->args = std::move(args);
  return Term(std::move(n));
}

TermKind Term::kind() const noexcept { return node_->kind; }

bool Term::is_number() const noexcept {
  return node_->kind == TermKind::Int || node_->kind == TermKind::Rat;
}

bool Term::is_atom() const noexcept {
  return node_->kind == TermKind::Symbol || is_number();
}

bool Term::is_ground() const noexcept { return node_->ground; }

const std::string& Term::name() const {
  if (is_number()) throw std::logic_error("Term::name on a number");
  return node_->name;
}

const Rational& Term::value() const {
  if (!is_number()) throw std::logic_error("Term::value on a non-number");
  return node_->value;
}

std::span<const Term> Term::args() const noexcept { return node_->args; }

std::size_t Term::hash() const noexcept { return node_->hash; }

bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind) return false;
  switch (x.kind) {
    case TermKind::Int:
    case TermKind::Rat:
      return x.value == y.value;
    case TermKind::Symbol:
    case TermKind::Variable:
      return x.name == y.name;
    case TermKind::Compound:
    case TermKind::EvalCall:
      return x.name == y.name && x.args == y.args;
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return x.kind <=> y.kind;
  switch (x.kind) {
    case TermKind::Int:
    case TermKind::Rat:
      if (x.value < y.value) return std::strong_ordering::less;
      if (y.value < x.value) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    case TermKind::Symbol:
    case TermKind::Variable:
      return x.name <=> y.name;
    case TermKind::Compound:
    case TermKind::EvalCall:
      if (auto c = x.name <=> y.name; c != 0) return c;
      if (auto c = x.args.size() <=> y.args.size(); c != 0) return c;
      for (std::size_t i = 0; i < x.args.size(); ++i)
        if (auto c = x.args[i] <=> y.args[i]; c != 0) return c;
      return std::strong_ordering::equal;
  }
  return std::strong_ordering::equal;
}

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(first) || s[0] == '_')) return false;
  for (char ch : s.substr(1)) {
    const auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || ch == '_' || ch == '-')) return false;
  }
  return true;
}

namespace {

void print(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Int:
    case TermKind::Rat:
      os << t.value().str();
      return;
    case TermKind::Symbol:
      os << t.name();
      return;
    case TermKind::Variable:
      os << '?' << t.name();
      return;
    case TermKind::Compound:
      os << '(' << t.name();
      for (const auto& a : t.args()) {
        os << ' ';
        print(os, a);
      }
      os << ')';
      return;
    case TermKind::EvalCall: {
      os << '@' << t.name() << '(';
      bool first = true;
      for (const auto& a : t.args()) {
        if (!first) os << ' ';
        first = false;
        print(os, a);
      }
      os << ')';
      return;
    }
  }
}

bool is_delim(char c) {
  return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, bool allow_meta) : text_(text), meta_(allow_meta) {}

  Term parse_all() {
    skip_ws();
    if (at_end()) throw SyntaxError("empty input", pos_);
    Term t = parse();
    skip_ws();
    if (!at_end()) throw SyntaxError("trailing input", pos_);
    return t;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view word() {
    const std::size_t start = pos_;
    while (!at_end() && !is_delim(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::vector<Term> parse_args_until_close(std::size_t open_at) {
    std::vector<Term> args;
    for (;;) {
      skip_ws();
      if (at_end()) throw SyntaxError("unbalanced parenthesis opened", open_at);
      if (text_[pos_] == ')') {
        ++pos_;
        return args;
      }
      args.push_back(parse());
    }
  }

  Term parse() {
    skip_ws();
    if (at_end()) throw SyntaxError("unexpected end of input", pos_);
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == ')') throw SyntaxError("unexpected ')'", pos_);
    if (c == '(') {
      ++pos_;
      skip_ws();
      const std::size_t head_at = pos_;
      const auto head = word();
      if (!is_identifier(head)) throw SyntaxError("expected compound head symbol", head_at);
      return Term::compound(std::string(head), parse_args_until_close(start));
    }
    const auto w = word();
    if (w.empty()) throw SyntaxError("expected term", start);
    if (w[0] == '?') {
      if (!meta_) throw SyntaxError("variable not allowed in a ground term", start);
      if (!is_identifier(w.substr(1))) throw SyntaxError("bad variable name", start);
      return Term::variable(std::string(w.substr(1)));
    }
    if (w[0] == '@') {
      if (!meta_) throw SyntaxError("eval call not allowed in a ground term", start);
      if (!is_identifier(w.substr(1))) throw SyntaxError("bad eval operator name", start);
      if (at_end() || text_[pos_] != '(')
        throw SyntaxError("expected '(' after eval operator", pos_);
      const std::size_t open = pos_++;
      return Term::eval_call(std::string(w.substr(1)), parse_args_until_close(open));
    }
    if (is_identifier(w)) return Term::symbol(std::string(w));
    return parse_number(w, start);
  }

  static Term parse_number(std::string_view w, std::size_t start) {
    const auto slash = w.find('/');
    const auto num = w.substr(0, slash);
    const auto digits = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
    if (!all_digits(digits)) throw SyntaxError("invalid token '" + std::string(w) + "'", start);
    BigInt n{std::string(digits)};
    if (num[0] == '-') n = -n;
    if (slash == std::string_view::npos) return Term::integer(std::move(n));
    const auto den = w.substr(slash + 1);
    if (!all_digits(den))
      throw SyntaxError("invalid denominator in '" + std::string(w) + "'", start + slash + 1);
    BigInt d{std::string(den)};
    if (d == 0) throw SyntaxError("zero denominator", start + slash + 1);
    return Term::number(Rational(n, d));
  }

  std::string_view text_;
  bool meta_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print(os, t);
  return os;
}

Term parse_term(std::string_view text) { return Parser(text, false).parse_all(); }

Term parse_pattern(std::string_view text) { return Parser(text, true).parse_all(); }

std::string to_string(const Position& pos) {
  if (pos.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(pos[i]);
  }
  return out;
}

Position parse_position(std::string_view text) {
  Position pos;
  if (text == "root") return pos;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto dot = text.find('.', start);
    const auto part = text.substr(start, dot == std::string_view::npos ? text.size() - start : dot - start);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || p != part.data() + part.size() || part.empty())
      throw SyntaxError("invalid position '" + std::string(text) + "'", start);
    pos.push_back(v);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return pos;
}

}  // namespace ckc
