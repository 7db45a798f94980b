#include "ckc/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "ckc/parallel.hpp"
#include "ckc/report.hpp"

namespace ckc::cli {

namespace {

using report::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::vector<std::string> packs;
  int depth = 12;
  long long states = 100000;
  std::string out;
  std::string format = "text";
  bool timestamps = false;
  int threads = 0;
};

struct Outcome {
  int code = kHolds;
  Json inputs = Json::object();
  Json result = Json::object();
  Json evidence = Json::object();
  std::string text;
  std::optional<std::string> dot;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--pack", c.packs, "Pack file or builtin:<name>; repeat to merge");
  sub->add_option("--budget-depth", c.depth, "Maximum operator sequence length")->capture_default_str();
  sub->add_option("--budget-states", c.states, "Maximum distinct states per search")->capture_default_str();
  sub->add_option("--out", c.out, "Also write the structured report to this file");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "dot", "text"}))
      ->capture_default_str();
  sub->add_flag("--timestamps", c.timestamps, "Include a generation timestamp in structured output");
  sub->add_option("--threads", c.threads, "Worker threads for parallel kernels (0: runtime default)");
}

Registry load(const Common& c) {
  if (c.packs.empty()) throw UsageError("--pack is required");
  std::vector<Registry> parts;
  for (const auto& spec : c.packs) parts.push_back(load_pack_spec(spec));
  if (parts.size() == 1) return std::move(parts.front());
  return Registry::merge(parts);
}

Budget budget_of(const Common& c) {
  if (c.depth <= 0 || c.states <= 0) throw UsageError("budget values must be positive");
  return Budget{c.depth, static_cast<std::size_t>(c.states)};
}

Json budget_json(const Budget& b) { return {{"max_depth", b.max_depth}, {"max_states", b.max_states}}; }

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string describe_step(const StepRecord& s) {
  return s.tag.conception + " " + s.tag.op + " @ " + to_string(s.tag.position) + ": " + to_string(s.before) +
         " -> " + to_string(s.after);
}

// A named problem, or a literal term when no problem has that id. A named
// problem in a foreign language is rendered for a set sharing one language.
Term resolve_problem(const Registry& reg, const ConceptionSet& set, const std::string& text, Json& info) {
  if (const Problem* p = reg.find_problem(text)) {
    info = {{"id", p->id}, {"language", p->language}, {"term", to_string(p->term)}};
    const auto& first = *set.front();
    bool shared = true;
    for (const auto* c : set) shared = shared && c->language->id == first.language->id;
    if (shared && !conforms(*first.language, p->term)) {
      if (auto r = render_problem(reg, first, *p)) {
        info["rendered"] = to_string(r->term);
        info["translation"] = r->translation;
        return r->term;
      }
    }
    return p->term;
  }
  try {
    Term t = parse_term(text);
    info = {{"id", nullptr}, {"term", to_string(t)}};
    return t;
  } catch (const SyntaxError& e) {
    throw UsageError("'" + text + "' is neither a problem id nor a term: " + e.what());
  }
}

Outcome cmd_validate(const Common& c) {
  const Registry reg = load(c);
  Outcome o;
  o.inputs = {{"packs", c.packs}};
  Json packs = Json::array();
  for (const auto& p : reg.packs()) packs.push_back({{"id", p.id}, {"description", p.description}});
  o.result = {{"valid", true},
              {"packs", packs},
              {"languages", reg.languages().size()},
              {"translations", reg.translations().size()},
              {"conceptions", reg.conceptions().size()},
              {"problems", reg.problems().size()},
              {"references", reg.references()}};
  Json ids = Json::object();
  for (const auto& l : reg.languages()) ids["languages"].push_back(l->id);
  for (const auto& t : reg.translations()) ids["translations"].push_back(t.id());
  for (const auto& k : reg.conceptions()) ids["conceptions"].push_back(k.id);
  for (const auto& p : reg.problems()) ids["problems"].push_back(p.id);
  o.evidence = ids;
  std::ostringstream os;
  os << "valid: " << reg.packs().size() << " pack(s), " << reg.languages().size() << " languages, "
     << reg.translations().size() << " translations, " << reg.conceptions().size() << " conceptions, "
     << reg.problems().size() << " problems\n";
  o.text = os.str();
  return o;
}

Outcome cmd_solve(const Common& c, const std::string& conceptions, const std::string& problem, bool strict) {
  const Registry reg = load(c);
  const Budget budget = budget_of(c);
  const auto ids = split_ids(conceptions);
  if (ids.empty()) throw UsageError("--conceptions needs at least one id");
  ConceptionSet set;
  for (const auto& id : ids) set.push_back(&reg.conception(id));
  Json pinfo;
  const Term start = resolve_problem(reg, set, problem, pinfo);

  const auto r = solves(set, start, budget, SolveOptions{strict});
  Outcome o;
  o.code = r.status == SolveStatus::Solved ? kHolds : kDoesNotHold;
  o.inputs = {{"packs", c.packs}, {"conceptions", ids}, {"problem", pinfo}, {"budget", budget_json(budget)},
              {"strict_last_actor", strict}};
  o.result = report::solve_result(r);
  const auto steps = replay_witness(set, start, r.witness);
  o.evidence = {{"initial", to_string(start)}, {"replay", report::replay(steps)}};

  std::ostringstream os;
  os << "status: " << to_string(r.status) << "\n";
  if (r.final_term)
    os << "final: " << to_string(*r.final_term) << " (" << *r.final_control << " of " << *r.final_conception
       << ")\n";
  if (!steps.empty()) {
    os << "witness (" << steps.size() << " steps):\n";
    for (std::size_t i = 0; i < steps.size(); ++i) os << "  " << i + 1 << ". " << describe_step(steps[i]) << "\n";
  }
  if (r.first_pruning)
    os << "first pruning: " << to_string(r.first_pruning->term) << " by " << r.first_pruning->control << " of "
       << r.first_pruning->conception << "\n";
  os << "states explored: " << r.states_explored << ", prunings: " << r.prunings
     << (r.budget_hit ? ", budget reached" : "") << "\n";
  o.text = os.str();
  return o;
}

struct RelateArgs {
  std::string kind, from, to, via, translation, translation2;
  int max_sequence = 1;
};

Translation pick(const Registry& reg, const std::string& spec, const Conception& src, const Conception& dst) {
  if (!spec.empty()) return reg.translation(spec);
  if (auto r = reg.route(src.language->id, dst.language->id)) return *r;
  throw UsageError("no translation from " + src.language->id + " to " + dst.language->id + "; pass --translation");
}

Json images(const Conception& c, const Translation& f) {
  Json out = Json::array();
  for (const auto& p : c.problems.prototypes) {
    Json j = {{"prototype", p.name}, {"term", to_string(p.term)}};
    try {
      j["translated"] = to_string(translate(f, p.term));
    } catch (const Error& e) {
      j["translated"] = nullptr;
      j["error"] = e.what();
    }
    out.push_back(j);
  }
  return out;
}

Outcome cmd_relate(const Common& c, const RelateArgs& a) {
  const Registry reg = load(c);
  const auto kind = parse_relation_kind(a.kind);
  const auto& from = reg.conception(a.from);
  const auto& to = reg.conception(a.to);
  Outcome o;
  RelationReport r;
  std::ostringstream os;
  switch (kind) {
    case RelationKind::Generality: {
      const auto f = pick(reg, a.translation, to, from);
      r = more_general(from, to, f);
      Json ev = images(to, f);
      for (auto& item : ev)
        if (!item["translated"].is_null())
          item["member"] = membership(from.problems, parse_term(item["translated"].get<std::string>()));
      o.evidence = {{"prototypes", ev}};
      os << from.id << " is " << (r.holds ? "" : "not ") << "more general than " << to.id << " via " << f.id()
         << "\n";
      break;
    }
    case RelationKind::Falsity: {
      const auto f = pick(reg, a.translation, from, to);
      r = falsity(from, to, f, FalsityOptions{a.max_sequence});
      if (r.witness) {
        const auto steps = replay_witness({&from}, r.witness->problem, r.witness->steps);
        o.evidence = {{"replay", report::replay(steps)},
                      {"replayed", replay_falsity(from, to, f, *r.witness)},
                      {"sigma_prime_verdict", to_string(assess(to.controls, r.witness->translated, ControlScope::Step).verdict)}};
      }
      os << from.id << " is " << (r.holds ? "" : "not shown ") << "false from the point of view of " << to.id
         << " via " << f.id() << "\n";
      if (r.witness)
        os << "  " << to_string(r.witness->problem) << " -> " << to_string(r.witness->rewritten) << " valid by "
           << r.witness->sigma << "; " << to_string(r.witness->translated) << " invalid by "
           << r.witness->sigma_prime << "\n";
      break;
    }
    case RelationKind::SameObject: {
      if (a.via.empty() && reg.references().empty()) throw UsageError("--via is required");
      const auto& via = reg.conception(a.via.empty() ? reg.references().front() : a.via);
      const auto f = pick(reg, a.translation, from, via);
      const auto g = pick(reg, a.translation2, to, via);
      r = same_object(from, to, via, f, g);
      o.evidence = {{"from_images", images(from, f)}, {"to_images", images(to, g)}, {"via", via.id}};
      os << from.id << " and " << to.id << (r.holds ? " have" : " do not have") << " the same object w.r.t. "
         << via.id << "\n";
      break;
    }
  }
  if (r.counterexample)
    os << "  counterexample: " << to_string(r.counterexample->term) << " (" << r.counterexample->reason << ")\n";
  for (const auto& s : r.skipped) os << "  skipped " << to_string(s.term) << ": " << s.reason << "\n";
  o.code = r.holds ? kHolds : kDoesNotHold;
  o.inputs = {{"packs", c.packs}, {"kind", a.kind},          {"from", a.from},
              {"to", a.to},       {"via", a.via},            {"translation", a.translation},
              {"translation2", a.translation2}, {"max_sequence", a.max_sequence}};
  o.result = report::relation(r);
  o.text = os.str();
  return o;
}

Outcome cmd_graph(const Common& c) {
  const Registry reg = load(c);
  const Budget budget = budget_of(c);
  const auto g = build_graph(reg, budget);
  Outcome o;
  o.inputs = {{"packs", c.packs}, {"budget", budget_json(budget)}};
  o.result = report::graph(g);
  Json replays = Json::object();
  for (const auto& e : g.edges)
    if (e.kind == EdgeKind::Solves)
      replays[e.conception + " " + e.problem] =
          report::replay(replay_witness({&reg.conception(e.conception)}, e.rendering.term, e.result.witness));
  o.evidence = {{"solves_replays", replays}};
  o.dot = to_dot(g);
  std::ostringstream os;
  os << g.conceptions.size() << " conceptions, " << g.problems.size() << " problems, " << g.edges.size()
     << " edges\n";
  for (const auto& e : g.edges) {
    if (e.kind == EdgeKind::Solves)
      os << "  " << e.conception << " solves " << e.problem << (e.reinforcing ? " (reinforcing)" : "") << "\n";
    else
      os << "  " << e.problem << " destabilizes " << e.conception
         << (e.invalid_witnessed ? " (invalid verdict witnessed)" : " (exhausted)") << "\n";
  }
  o.text = os.str();
  return o;
}

Outcome cmd_plan(const Common& c, const std::string& from, const std::string& to) {
  const Registry reg = load(c);
  const Budget budget = budget_of(c);
  const auto& source = reg.conception(from);
  const auto& target = reg.conception(to);
  const auto g = build_graph(reg, budget);
  const auto p = plan_path(from, to, g);
  Outcome o;
  o.code = p ? kHolds : kDoesNotHold;
  o.inputs = {{"packs", c.packs}, {"from", from}, {"to", to}, {"budget", budget_json(budget)}};
  o.result = {{"reachable", p.has_value()}, {"path", p ? report::path(*p) : Json(nullptr)}};
  Json edges = Json::array();
  if (p)
    for (std::size_t i = 0; i < p->problems.size(); ++i) {
      const auto* d = g.find_edge(p->conceptions[i], p->problems[i]);
      const auto* s = g.find_edge(p->conceptions[i + 1], p->problems[i]);
      edges.push_back({{"problem", p->problems[i]},
                       {"destabilizes", {{"conception", d->conception},
                                         {"activation", d->activation ? report::witness_step(*d->activation) : Json(nullptr)},
                                         {"result", report::solve_result(d->result)}}},
                       {"solves", {{"conception", s->conception}, {"result", report::solve_result(s->result)}}}});
    }
  o.evidence = {{"steps", edges}, {"conflicts", report::conflicts(conflict_problems(source, target, reg, budget))}};
  std::ostringstream os;
  if (p) {
    os << p->conceptions.front();
    for (std::size_t i = 0; i < p->problems.size(); ++i) os << " -> " << p->problems[i] << " -> " << p->conceptions[i + 1];
    os << "\n";
  } else {
    os << "unreachable\n";
  }
  o.text = os.str();
  return o;
}

Outcome cmd_diagnose(const Common& c, const std::string& trace_file) {
  const Registry reg = load(c);
  std::ifstream in(trace_file, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file " + trace_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  const Trace trace = parse_trace(buf.str(), reg);
  const auto d = diagnose(reg, trace);
  Outcome o;
  o.code = d.ranking.empty() || d.ranking.front().explained == 0 ? kDoesNotHold : kHolds;
  o.inputs = {{"packs", c.packs}, {"trace", trace_file}};
  o.result = report::diagnosis(d);
  o.evidence = {{"trace", report::trace(trace)}};
  std::ostringstream os;
  os << d.total_events << " events\n";
  for (const auto& s : d.ranking)
    os << "  " << s.rank << ". " << s.conception << " coverage " << to_string(Term::number(s.coverage)) << " ("
       << s.explained << "/" << d.total_events << ")\n";
  o.text = os.str();
  return o;
}

Outcome cmd_packs(bool replay) {
  Outcome o;
  o.inputs = {{"replay", replay}};
  Json list = Json::array();
  Json outcomes = Json::object();
  std::ostringstream os;
  for (const auto& m : builtin_packs()) {
    list.push_back(report::manifest(m));
    os << "builtin:" << m.id << "  " << m.description << "\n";
    if (!replay) continue;
    Json items = Json::array();
    for (const auto& f : replay_fixtures(m)) {
      items.push_back({{"index", f.index}, {"kind", f.kind}, {"passed", f.passed}, {"detail", f.detail}});
      os << "  fixture " << f.index << " (" << f.kind << "): " << (f.passed ? "ok" : "FAILED " + f.detail) << "\n";
      if (!f.passed) o.code = kDoesNotHold;
    }
    outcomes[m.id] = items;
  }
  o.result = {{"packs", list}};
  if (replay) o.evidence = {{"fixtures", outcomes}};
  o.text = os.str();
  return o;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conception calculus toolkit", "ckc"};
  app.require_subcommand(1);
  Common common;
  std::string conceptions, problem, trace_file, plan_from, plan_to;
  bool strict = false, replay = false;
  RelateArgs rel;

  auto* validate = app.add_subcommand("validate", "Load and validate packs");
  add_common(validate, common);

  auto* solve = app.add_subcommand("solve", "Search for a solving operator sequence");
  add_common(solve, common);
  solve->add_option("--conceptions", conceptions, "Comma-separated conception ids")->required();
  solve->add_option("--problem", problem, "Problem id or literal term")->required();
  solve->add_flag("--strict-last-actor", strict, "Only the last acting conception may pronounce solved");

  auto* relate = app.add_subcommand("relate", "Check a relation between two conceptions");
  add_common(relate, common);
  relate->add_option("--kind", rel.kind, "Relation")
      ->required()
      ->check(CLI::IsMember({"generality", "falsity", "same-object"}));
  relate->add_option("--from", rel.from, "First conception")->required();
  relate->add_option("--to", rel.to, "Second conception")->required();
  relate->add_option("--via", rel.via, "Reference conception for same-object");
  relate->add_option("--translation", rel.translation, "Translation id, id:<L> or chain f,g");
  relate->add_option("--translation2", rel.translation2, "Second translation for same-object");
  relate->add_option("--max-sequence", rel.max_sequence, "Operator sequence length searched for falsity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* graph = app.add_subcommand("graph", "Build the conception/problem graph");
  add_common(graph, common);

  auto* plan = app.add_subcommand("plan", "Plan a learning path between conceptions");
  add_common(plan, common);
  plan->add_option("--from", plan_from, "Source conception")->required();
  plan->add_option("--to", plan_to, "Target conception")->required();

  auto* diag = app.add_subcommand("diagnose", "Rank conceptions against an observed trace");
  add_common(diag, common);
  diag->add_option("--trace", trace_file, "Trace file (JSON)")->required();

  auto* packs = app.add_subcommand("packs", "List builtin packs");
  add_common(packs, common);
  packs->add_flag("--replay", replay, "Replay every pack fixture");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kUsage;
  }

  set_worker_threads(common.threads);
  Outcome o;
  std::string command;
  try {
    if (validate->parsed()) {
      command = "validate";
      o = cmd_validate(common);
    } else if (solve->parsed()) {
      command = "solve";
      o = cmd_solve(common, conceptions, problem, strict);
    } else if (relate->parsed()) {
      command = "relate";
      o = cmd_relate(common, rel);
    } else if (graph->parsed()) {
      command = "graph";
      o = cmd_graph(common);
    } else if (plan->parsed()) {
      command = "plan";
      o = cmd_plan(common, plan_from, plan_to);
    } else if (diag->parsed()) {
      command = "diagnose";
      o = cmd_diagnose(common, trace_file);
    } else {
      command = "packs";
      o = cmd_packs(replay);
    }
    if (common.format == "dot" && !o.dot) throw UsageError("--format dot is only available for graph");
  } catch (const ValidationError& e) {
    err << "error: pack validation failed\n";
    for (const auto& i : e.issues())
      err << "  " << (i.location.empty() ? "" : i.location + ": ") << (i.id.empty() ? "" : "[" + i.id + "] ")
          << i.reason << "\n";
    return kValidation;
  } catch (const TraceError& e) {
    err << "error: invalid trace: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Json doc = {{"command", command}, {"inputs", o.inputs}, {"result", o.result}, {"evidence", o.evidence},
              {"exit_code", o.code}};
  if (common.timestamps) doc["generated_at"] = utc_now();

  if (common.format == "json")
    out << doc.dump(2) << "\n";
  else if (common.format == "dot")
    out << *o.dot;
  else
    out << o.text;

  if (!common.out.empty()) {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << common.out << "\n";
      return kUsage;
    }
    file << doc.dump(2) << "\n";
  }
  return o.code;
}

}  // namespace ckc::cli
