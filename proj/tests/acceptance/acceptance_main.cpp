// One line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ckc/diagnosis.hpp"
#include "ckc/learning_graph.hpp"
#include "ckc/packs.hpp"
#include "ckc/relations.hpp"
#include "../support.hpp"

namespace {

using namespace ckc;
using Clock = std::chrono::steady_clock;

// Pinned limits.
constexpr double kEgyptSeconds = 0.1;
constexpr double kAdditionSeconds = 1.0;
constexpr int kAdditionDepth = 12;
constexpr int kOracleDepth = 6;
constexpr double kOracleSeconds = 30.0;
constexpr int kReplayRuns = 1000;
constexpr std::uint64_t kReplaySeed = 0x5eed0001;
constexpr int kDeterminismRuns = 5;

/// Collects the first failed check of a criterion.
class Check {
 public:
  void require(bool cond, const std::string& what) {
    if (!cond && failure_.empty()) failure_ = what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  const std::string& notes() const { return notes_; }

 private:
  std::string failure_;
  std::string notes_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << "s";
  return os.str();
}

/// Digits of the integer shown on a calculator screen term.
std::size_t digits_of(const Term& screen) { return to_string(screen.args()[0]).size(); }

std::vector<Registry> builtin_registries() {
  std::vector<Registry> out;
  for (const auto& m : builtin_packs()) out.push_back(load_builtin(m.id));
  return out;
}

std::vector<ConceptionSet> all_subsets(const Registry& reg) {
  const auto& cs = reg.conceptions();
  std::vector<ConceptionSet> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << cs.size()); ++mask) {
    ConceptionSet s;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(&cs[i]);
    out.push_back(std::move(s));
  }
  return out;
}

void egyptian_fixture(Check& c) {
  const Rational q(4055, 4093);
  const auto t0 = Clock::now();
  const auto units = egypt_decompose(q);
  const double dt = seconds_since(t0);
  const std::vector<Rational> expected{Rational(1, 2),  Rational(1, 3),     Rational(1, 7),
                                       Rational(1, 69), Rational(1, 30650), Rational(BigInt(1), BigInt("10098761225"))};
  c.require(units == expected, "decomposition differs");
  Rational sum = 0;
  for (const auto& u : units) sum += u;
  c.require(sum == q, "sum is not 4055/4093");
  c.require(dt < kEgyptSeconds, "took " + fmt(dt));
  c.note(fmt(dt));
}

void addition_suite(Check& c) {
  const auto reg = load_builtin("addition");
  const Budget budget{kAdditionDepth, 100000};
  struct Run {
    const char* conception;
    const char* problem;
    SolveStatus status;
    const char* final_term;
    const char* pruned_by;
  };
  const std::vector<Run> runs{
      {"C1", "p_5+4", SolveStatus::Solved, "(count 9)", nullptr},
      {"C2", "p_16+4", SolveStatus::Solved, "(count 20)", nullptr},
      {"C2", "p_16+23", SolveStatus::PrunedAll, nullptr, nullptr},
      {"C3", "p_16+23", SolveStatus::Solved, "(num 39)", nullptr},
      {"C4", "p_big", SolveStatus::PrunedAll, nullptr, "c4-overflow"},
  };
  double worst = 0;
  for (const auto& r : runs) {
    const std::string label = std::string(r.conception) + " on " + r.problem;
    const auto t0 = Clock::now();
    const auto res = solves(test::set_of(reg, {r.conception}), reg.problem(r.problem).term, budget);
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    c.require(dt < kAdditionSeconds, label + " took " + fmt(dt));
    c.require(res.status == r.status, label + ": status " + to_string(res.status));
    if (r.final_term)
      c.require(res.final_term && *res.final_term == parse_term(r.final_term), label + ": wrong final term");
    if (r.pruned_by) {
      c.require(res.first_pruning && res.first_pruning->control == r.pruned_by, label + ": not pruned by the screen");
      c.require(res.first_pruning && digits_of(res.first_pruning->term) == 9, label + ": pruned result is not 9 digits");
    }
  }
  c.note("slowest " + fmt(worst));
}

void generality_fixtures(Check& c) {
  const auto reg = load_builtin("addition");
  const auto& c2 = reg.conception("C2");
  const auto& c3 = reg.conception("C3");
  const auto& c4 = reg.conception("C4");
  c.require(more_general(c3, c2, reg.translation("f_count2dec")).holds, "C3 over C2 fails");
  c.require(more_general(c3, c4, reg.translation("f_keys2dec")).holds, "C3 over C4 fails");
  const auto back = more_general(c2, c3, reg.translation("f_dec2count"));
  c.require(!back.holds, "C2 over C3 holds");
  c.require(back.counterexample && back.counterexample->term == parse_term("(add 16 23)"),
            "counterexample is not (add 16 23)");
}

void falsity_fixture(Check& c) {
  const auto reg = load_builtin("triangle");
  const auto& n = reg.conception("naive-anglesum");
  const auto& e = reg.conception("euclid");
  const auto f = reg.translation("f_N2E");
  const auto r = falsity(n, e, f, FalsityOptions{1});
  c.require(r.holds && r.witness, "no witness");
  if (!r.witness) return;
  const auto& w = *r.witness;
  c.require(w.steps.size() == 1, "witness longer than one step");
  c.require(replay_falsity(n, e, f, w), "witness does not replay");
  const auto after = replay_witness({&n}, w.problem, w.steps).back().after;
  const auto sigma = assess(n.controls, after, ControlScope::Step);
  const auto sigma_prime = assess(e.controls, translate(f, after), ControlScope::Step);
  c.require(sigma.verdict == Verdict::Valid && sigma.control == w.sigma, "first verdict is not valid");
  c.require(sigma_prime.verdict == Verdict::Invalid && sigma_prime.control == w.sigma_prime,
            "second verdict is not invalid");
  c.note(to_string(w.problem) + " -> " + to_string(w.rewritten));
}

void oracle_equivalence(Check& c) {
  const auto t0 = Clock::now();
  std::size_t pairs = 0;
  for (const auto& reg : builtin_registries())
    for (const auto& set : all_subsets(reg))
      for (const auto& p : reg.problems())
        for (int depth = 1; depth <= kOracleDepth; ++depth) {
          const auto got = solves(set, p.term, Budget{depth, 1000000});
          const auto want = test::brute_force_solve(set, p.term, depth);
          ++pairs;
          std::string ids;
          for (const auto* k : set) ids += k->id + " ";
          const auto label = reg.packs().front().id + " {" + ids + "} " + p.id + " depth " + std::to_string(depth);
          c.require(got.status == want.status, label + ": status " + to_string(got.status) + " vs " + to_string(want.status));
          if (want.min_length) c.require(got.witness.size() == *want.min_length, label + ": witness length differs");
        }
  const double dt = seconds_since(t0);
  c.require(dt < kOracleSeconds, "took " + fmt(dt));
  c.note(std::to_string(pairs) + " runs in " + fmt(dt));
}

void witness_replay(Check& c) {
  const auto regs = builtin_registries();
  test::Rng rng(kReplaySeed);
  std::size_t solved = 0, failures = 0;
  for (int i = 0; i < kReplayRuns; ++i) {
    const auto& reg = regs[test::uniform(rng, 0, regs.size() - 1)];
    ConceptionSet set;
    for (const auto& k : reg.conceptions())
      if (test::uniform(rng, 0, 1)) set.push_back(&k);
    if (set.empty()) set.push_back(&reg.conceptions()[test::uniform(rng, 0, reg.conceptions().size() - 1)]);
    std::vector<Term> starts;
    for (const auto& p : reg.problems()) starts.push_back(p.term);
    for (const auto& k : reg.conceptions())
      for (const auto& p : k.problems.prototypes) starts.push_back(p.term);
    const auto& start = starts[test::uniform(rng, 0, starts.size() - 1)];
    const Budget budget{static_cast<int>(test::uniform(rng, 1, 12)), 100000};
    const auto r = solves(set, start, budget, SolveOptions{test::uniform(rng, 0, 3) == 0});
    if (r.status != SolveStatus::Solved) continue;
    ++solved;
    if (!verify_solved(set, start, r)) ++failures;
  }
  c.require(failures == 0, std::to_string(failures) + " witnesses failed to replay");
  c.require(solved > 0, "no run solved");
  c.note(std::to_string(solved) + "/" + std::to_string(kReplayRuns) + " solved, 0 replay failures");
}

/// The identity when the languages agree, else every declared translation.
std::vector<Translation> declared(const Registry& reg, const Language& from, const Language& to) {
  if (from.id == to.id) return {reg.translation("id:" + from.id)};
  std::vector<Translation> out;
  for (const auto* f : reg.translations_between(from.id, to.id)) out.push_back(*f);
  return out;
}

void relation_algebra(Check& c) {
  std::size_t reflexive = 0, symmetric = 0, transitive = 0;
  for (const auto& reg : builtin_registries()) {
    for (const auto& k : reg.conceptions()) {
      const auto id = reg.translation("id:" + k.language->id);
      c.require(more_general(k, k, id).holds, "generality not reflexive on " + k.id);
      c.require(same_object(k, k, k, id, id).holds, "same-object not reflexive on " + k.id);
      ++reflexive;
    }
    for (const auto& ref : reg.references()) {
      const auto& a = reg.conception(ref);
      for (const auto& x : reg.conceptions())
        for (const auto& y : reg.conceptions()) {
          for (const auto& f : declared(reg, *x.language, *a.language))
            for (const auto& g : declared(reg, *y.language, *a.language)) {
              c.require(same_object(x, y, a, f, g).holds == same_object(y, x, a, g, f).holds,
                        "same-object not symmetric on " + x.id + ", " + y.id);
              ++symmetric;
            }
        }
    }
    const auto& cs = reg.conceptions();
    for (const auto& x : cs)
      for (const auto& y : cs)
        for (const auto& z : cs)
          for (const auto& f : declared(reg, *y.language, *x.language))
            for (const auto& g : declared(reg, *z.language, *y.language)) {
              if (!more_general(x, y, f).holds || !more_general(y, z, g).holds) continue;
              c.require(more_general(x, z, compose(g, f)).holds,
                        "generality not transitive on " + x.id + " > " + y.id + " > " + z.id);
              ++transitive;
            }
  }
  c.require(symmetric > 0 && transitive > 0, "no declared pairs exercised");
  c.note(std::to_string(reflexive) + " reflexive, " + std::to_string(symmetric) + " symmetric, " +
         std::to_string(transitive) + " transitive checks");
}

void concept_partition_fixture(Check& c) {
  const auto add = load_builtin("addition");
  const auto classes = concept_partition(add);
  std::vector<std::string> members;
  if (classes.size() == 1)
    for (const auto& m : classes[0].members) members.push_back(m.conception);
  c.require(members == std::vector<std::string>{"C1", "C2", "C3", "C4"}, "addition is not one class {C1..C4}");

  const auto merged = Registry::merge({load_builtin("addition"), load_builtin("triangle")});
  const auto two = concept_partition(merged);
  c.require(two.size() == 2, "merged registry has " + std::to_string(two.size()) + " classes");
  bool rejected = false;
  try {
    define_knowing(merged, "mixed", "subject", {"C1", "naive-anglesum"});
  } catch (const KnowingError&) {
    rejected = true;
  }
  c.require(rejected, "cross-class knowing accepted");
  c.require(define_knowing(add, "pupil-A-addition", "pupil-A", {"C1", "C2"}).members.size() == 2,
            "in-class knowing rejected");
}

void learning_paths(Check& c) {
  const auto ag = build_graph(load_builtin("addition"));
  const auto p = plan_path("C2", "C3", ag);
  c.require(p && p->problems == std::vector<std::string>{"p_16+23"} &&
                p->conceptions == std::vector<std::string>{"C2", "C3"},
            "C2 -> C3 is not [C2, p_16+23, C3]");
  c.require(p && path_valid(*p, ag), "C2 -> C3 path invalid");

  const auto tg = build_graph(load_builtin("triangle"));
  const auto q = plan_path("naive-anglesum", "euclid", tg);
  c.require(q && q->problems == std::vector<std::string>{"p_repeat-measure"},
            "naive -> euclid does not pass through p_repeat-measure");
  c.require(q && path_valid(*q, tg), "naive -> euclid path invalid");
}

void diagnosis_loop(Check& c) {
  const auto reg = load_builtin("addition");
  struct Case {
    const char* conception;
    const char* problem;
  };
  for (auto [cid, pid] : {Case{"C1", "p_5+4"}, Case{"C2", "p_16+4"}, Case{"C3", "p_16+23"}}) {
    const auto set = test::set_of(reg, {cid});
    const auto& term = reg.problem(pid).term;
    const auto r = solves(set, term);
    c.require(r.status == SolveStatus::Solved, std::string(cid) + " does not solve " + pid);
    if (r.status != SolveStatus::Solved) continue;
    const auto d = diagnose(reg, trace_from_witness(set, term, r.witness));
    c.require(d.ranking[0].conception == cid && d.ranking[0].coverage == 1,
              std::string(cid) + " is not first with coverage 1");
  }
  const Trace mixed{{{parse_term("(state 16 4)"), parse_term("(state 17 3)"), Verdict::Valid},
                     {parse_term("(state 17 3)"), parse_term("(state 18 2)"), Verdict::Valid},
                     {parse_term("(add 16 23)"), parse_term("(num 39)"), Verdict::Valid}}};
  const auto d = diagnose(reg, mixed);
  c.require(d.score("C2").coverage == Rational(2, 3), "C2 coverage is not 2/3");
  c.require(d.score("C3").coverage == Rational(1, 3), "C3 coverage is not 1/3");
}

void cli_determinism(Check& c) {
  const std::string bin = CKC_BINARY;
  const auto dir = std::filesystem::temp_directory_path() / "ckc-acceptance";
  std::filesystem::create_directories(dir);
  const auto trace = (dir / "trace.json").string();
  std::ofstream(trace) << R"j([{"before": "(state 16 4)", "after": "(state 17 3)", "assessment": "valid"},
    {"before": "(state 17 3)", "after": "(state 18 2)", "assessment": "valid"},
    {"before": "(add 16 23)", "after": "(num 39)", "assessment": "valid"}])j";

  const std::string add = " --pack builtin:addition --format json";
  const std::vector<std::string> commands{
      "validate --pack builtin:addition --pack builtin:triangle --format json",
      "solve --conceptions C2 --problem p_16+4" + add,
      "solve --conceptions C2,C3 --problem p_16+23" + add,
      "relate --kind generality --from C3 --to C2 --translation f_count2dec" + add,
      "relate --kind same-object --from C1 --to C3" + add,
      "relate --kind falsity --from naive-anglesum --to euclid --pack builtin:triangle --format json",
      "graph --pack builtin:fractions --format json",
      "plan --from C2 --to C3" + add,
      "diagnose --trace " + trace + add,
      "packs --replay --format json",
  };
  for (const auto& cmd : commands) {
    const auto first = test::run_binary(bin + " " + cmd + " 2>/dev/null");
    c.require(first.code == 0 || first.code == 1, "'" + cmd + "' exited " + std::to_string(first.code));
    c.require(!first.out.empty() && first.out.front() == '{', "'" + cmd + "' printed no JSON");
    for (int i = 1; i < kDeterminismRuns; ++i) {
      const auto again = test::run_binary(bin + " " + cmd + " 2>/dev/null");
      c.require(again.out == first.out && again.code == first.code, "'" + cmd + "' output changed on run " + std::to_string(i + 1));
    }
  }
  c.note(std::to_string(commands.size()) + " commands x " + std::to_string(kDeterminismRuns) + " runs");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Egyptian fixture 4055/4093", egyptian_fixture},
      {2, "addition solver suite", addition_suite},
      {3, "generality fixtures", generality_fixtures},
      {4, "falsity witness replay", falsity_fixture},
      {5, "oracle equivalence at depth <= 6", oracle_equivalence},
      {6, "witness replay over 1000 runs", witness_replay},
      {7, "relation algebra", relation_algebra},
      {8, "concept partition", concept_partition_fixture},
      {9, "learning paths", learning_paths},
      {10, "diagnosis closed loop", diagnosis_loop},
      {11, "CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& k : criteria) {
    Check c;
    try {
      k.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "[PASS] " : "[FAIL] ") << k.id << " " << k.name;
    if (!c.ok()) std::cout << ": " << c.failure();
    if (!c.notes().empty()) std::cout << " (" << c.notes() << ")";
    std::cout << "\n";
    if (!c.ok()) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
