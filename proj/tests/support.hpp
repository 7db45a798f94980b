#pragma once

#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "ckc/cli.hpp"
#include "ckc/packs.hpp"
#include "ckc/solver.hpp"

namespace ckc::test {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline Term random_atom(Rng& rng) {
  static const std::vector<std::string> symbols{"a", "b", "natural", "t0", "x-1", "eq", "sum_2"};
  switch (uniform(rng, 0, 2)) {
    case 0: return Term::symbol(symbols[uniform(rng, 0, symbols.size() - 1)]);
    case 1: return Term::integer(uniform(rng, -1000000, 1000000));
    default: return Term::number(Rational(uniform(rng, -500, 500), uniform(rng, 1, 500)));
  }
}

inline Term random_term(Rng& rng, int depth) {
  static const std::vector<std::string> heads{"add", "num", "tri", "then", "f"};
  if (depth == 0 || uniform(rng, 0, 2) == 0) return random_atom(rng);
  std::vector<Term> args;
  const auto n = uniform(rng, 0, 3);
  for (std::int64_t i = 0; i < n; ++i) args.push_back(random_term(rng, depth - 1));
  return Term::compound(heads[uniform(rng, 0, heads.size() - 1)], std::move(args));
}

inline ConceptionSet set_of(const Registry& reg, const std::vector<std::string>& ids) {
  ConceptionSet out;
  for (const auto& id : ids) out.push_back(&reg.conception(id));
  return out;
}

/// Status and minimal witness length found by enumerating every operator
/// sequence up to `depth` (plus one level to decide whether the budget cut
/// anything off), with no memoization.
struct OracleResult {
  SolveStatus status = SolveStatus::Exhausted;
  std::optional<std::size_t> min_length;
  std::size_t sequences = 0;
};

inline OracleResult brute_force_solve(const ConceptionSet& cs, const Term& problem, int depth,
                                      bool strict = false) {
  OracleResult out;
  bool pruned = false;
  std::set<Term> reached{problem};
  std::set<Term> beyond;

  auto solved_by = [&](const Conception& actor, const Term& t) {
    if (strict) return assess(actor.controls, t, ControlScope::Solution).verdict == Verdict::Solved;
    for (const auto* c : cs)
      if (assess(c->controls, t, ControlScope::Solution).verdict == Verdict::Solved) return true;
    return false;
  };

  auto dfs = [&](auto&& self, const Term& t, int len) -> void {
    for (const auto* c : cs) {
      for (const auto& op : c->operators) {
        for (const auto& app : apply_operator(op, t)) {
          ++out.sequences;
          if (assess(c->controls, app.result, ControlScope::Step).verdict == Verdict::Invalid) {
            if (len < depth) pruned = true;
            continue;
          }
          if (len + 1 > depth) {
            beyond.insert(app.result);
            continue;
          }
          const auto l = static_cast<std::size_t>(len + 1);
          if (solved_by(*c, app.result) && (!out.min_length || l < *out.min_length)) out.min_length = l;
          reached.insert(app.result);
          self(self, app.result, len + 1);
        }
      }
    }
  };
  dfs(dfs, problem, 0);

  if (out.min_length) {
    out.status = SolveStatus::Solved;
    return out;
  }
  bool closed = true;
  for (const auto& t : beyond) closed = closed && reached.contains(t);
  out.status = (closed && pruned) ? SolveStatus::PrunedAll : SolveStatus::Exhausted;
  return out;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Runs the installed binary through the shell; returns stdout and exit code.
inline CliRun run_binary(const std::string& command_line) {
  CliRun r;
  FILE* pipe = popen(command_line.c_str(), "r");
  if (!pipe) {
    r.code = -1;
    return r;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace ckc::test
