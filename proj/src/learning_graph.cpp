#include "ckc/learning_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "ckc/parallel.hpp"

namespace ckc {

std::string to_string(EdgeKind k) { return k == EdgeKind::Solves ? "solves" : "destabilizes"; }

std::optional<Rendering> render_problem(const Registry& reg, const Conception& c, const Problem& p) {
  if (conforms(*c.language, p.term) || membership(c.problems, p.term)) return Rendering{p.term, ""};
  for (const auto* f : reg.translations_between(p.language, c.language->id)) {
    try {
      return Rendering{translate(*f, p.term), f->id()};
    } catch (const TranslationError&) {
    }
  }
  return std::nullopt;
}

namespace {

std::optional<WitnessStep> first_activation(const Conception& c, const Term& t) {
  for (const auto& op : c.operators) {
    auto apps = apply_operator(op, t);
    if (!apps.empty()) return WitnessStep{c.id, op.id, apps.front().position};
  }
  return std::nullopt;
}

std::optional<Edge> compute_edge(const Registry& reg, const Conception& c, const Problem& p,
                                 const Budget& budget) {
  auto rendering = render_problem(reg, c, p);
  if (!rendering) return std::nullopt;
  Edge e;
  e.conception = c.id;
  e.problem = p.id;
  e.result = solves({&c}, rendering->term, budget);
  if (e.result.status == SolveStatus::Solved) {
    e.kind = EdgeKind::Solves;
    e.reinforcing = membership(c.problems, rendering->term);
  } else {
    e.activation = first_activation(c, rendering->term);
    if (!e.activation) return std::nullopt;
    e.kind = EdgeKind::Destabilizes;
    e.invalid_witnessed = e.result.prunings > 0;
  }
  e.rendering = std::move(*rendering);
  return e;
}

LearningGraph skeleton(const Registry& reg, const Budget& budget) {
  LearningGraph g;
  g.budget = budget;
  for (const auto& c : reg.conceptions()) g.conceptions.push_back(c.id);
  for (const auto& p : reg.problems()) g.problems.push_back(p.id);
  return g;
}

}  // namespace

Destabilization destabilizes(const Term& p, const Conception& c, const Budget& budget) {
  Destabilization d;
  d.representable = conforms(*c.language, p) || membership(c.problems, p);
  if (!d.representable) return d;
  d.activation = first_activation(c, p);
  if (!d.activation) return d;
  d.result = solves({&c}, p, budget);
  d.invalid_witnessed = d.result.prunings > 0;
  d.holds = d.result.status != SolveStatus::Solved;
  return d;
}

const Edge* LearningGraph::find_edge(std::string_view conception, std::string_view problem) const {
  for (const auto& e : edges)
    if (e.conception == conception && e.problem == problem) return &e;
  return nullptr;
}

LearningGraph build_graph(const Registry& reg, const Budget& budget) {
  auto g = skeleton(reg, budget);
  const auto& cs = reg.conceptions();
  const auto& ps = reg.problems();
  const std::size_t np = ps.size();
  auto cells = parallel_map(cs.size() * np, [&](std::size_t k) {
    return compute_edge(reg, cs[k / np], ps[k % np], budget);
  });
  for (auto& cell : cells)
    if (cell) g.edges.push_back(std::move(*cell));
  return g;
}

namespace serial {

LearningGraph build_graph(const Registry& reg, const Budget& budget) {
  auto g = skeleton(reg, budget);
  for (const auto& c : reg.conceptions())
    for (const auto& p : reg.problems())
      if (auto e = compute_edge(reg, c, p, budget)) g.edges.push_back(std::move(*e));
  return g;
}

}  // namespace serial

std::vector<Conflict> conflict_problems(const Conception& c, const Conception& c_t, const Registry& reg,
                                        const Budget& budget) {
  std::vector<Conflict> out;
  for (const auto& p : reg.problems()) {
    const auto rc = render_problem(reg, c, p);
    const auto rt = render_problem(reg, c_t, p);
    if (!rc || !rt) continue;
    auto d = destabilizes(rc->term, c, budget);
    if (!d.holds) continue;
    auto target = solves({&c_t}, rt->term, budget);
    if (target.status != SolveStatus::Solved) continue;
    out.push_back({p.id, std::move(d), std::move(target)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
    if (a.target.witness.size() != b.target.witness.size())
      return a.target.witness.size() < b.target.witness.size();
    return a.problem < b.problem;
  });
  return out;
}

namespace {

std::size_t index_of(const std::vector<std::string>& ids, std::string_view id) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw NotFound("no conception '" + std::string(id) + "' in the graph");
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

std::optional<LearningPath> plan_path(std::string_view source, std::string_view target,
                                      const LearningGraph& graph) {
  const auto src = index_of(graph.conceptions, source);
  const auto dst = index_of(graph.conceptions, target);
  const auto nc = graph.conceptions.size();
  const auto np = graph.problems.size();

  // destab[c] and solvers[p] in node order, so BFS ties resolve by node order.
  std::vector<std::vector<std::size_t>> destab(nc), solvers(np);
  std::map<std::string_view, std::size_t> pidx, cidx;
  for (std::size_t i = 0; i < np; ++i) pidx.emplace(graph.problems[i], i);
  for (std::size_t i = 0; i < nc; ++i) cidx.emplace(graph.conceptions[i], i);
  for (const auto& e : graph.edges) {
    const auto c = cidx.at(e.conception);
    const auto p = pidx.at(e.problem);
    if (e.kind == EdgeKind::Destabilizes)
      destab[c].push_back(p);
    else
      solvers[p].push_back(c);
  }
  for (auto& v : destab) std::sort(v.begin(), v.end());
  for (auto& v : solvers) std::sort(v.begin(), v.end());

  struct Prev {
    std::size_t conception;
    std::size_t problem;
  };
  std::vector<std::optional<Prev>> prev(nc);
  std::vector<char> seen(nc, 0);
  seen[src] = 1;
  std::deque<std::size_t> queue{src};
  while (!queue.empty() && !seen[dst]) {
    const auto c = queue.front();
    queue.pop_front();
    for (auto p : destab[c])
      for (auto next : solvers[p]) {
        if (seen[next]) continue;
        seen[next] = 1;
        prev[next] = Prev{c, p};
        queue.push_back(next);
      }
  }
  if (!seen[dst]) return std::nullopt;

  LearningPath path;
  for (auto at = dst;;) {
    path.conceptions.push_back(graph.conceptions[at]);
    if (!prev[at]) break;
    path.problems.push_back(graph.problems[prev[at]->problem]);
    at = prev[at]->conception;
  }
  std::reverse(path.conceptions.begin(), path.conceptions.end());
  std::reverse(path.problems.begin(), path.problems.end());
  if (!path_valid(path, graph)) throw std::logic_error("planned path violates alternation");
  return path;
}

bool path_valid(const LearningPath& path, const LearningGraph& graph) {
  if (path.conceptions.size() != path.problems.size() + 1) return false;
  for (const auto& c : path.conceptions)
    if (std::find(graph.conceptions.begin(), graph.conceptions.end(), c) == graph.conceptions.end())
      return false;
  for (std::size_t i = 0; i < path.problems.size(); ++i) {
    const auto* d = graph.find_edge(path.conceptions[i], path.problems[i]);
    const auto* s = graph.find_edge(path.conceptions[i + 1], path.problems[i]);
    if (!d || d->kind != EdgeKind::Destabilizes) return false;
    if (!s || s->kind != EdgeKind::Solves) return false;
  }
  return true;
}

namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string to_dot(const LearningGraph& graph) {
  std::ostringstream os;
  os << "digraph learning {\n  rankdir=LR;\n";
  for (const auto& c : graph.conceptions) os << "  " << quoted("C:" + c) << " [shape=box, label=" << quoted(c) << "];\n";
  for (const auto& p : graph.problems)
    os << "  " << quoted("P:" + p) << " [shape=ellipse, label=" << quoted(p) << "];\n";
  for (const auto& e : graph.edges) {
    if (e.kind == EdgeKind::Solves)
      os << "  " << quoted("C:" + e.conception) << " -> " << quoted("P:" + e.problem)
         << " [style=solid, label=" << quoted(e.reinforcing ? "solves (reinforcing)" : "solves") << "];\n";
    else
      os << "  " << quoted("P:" + e.problem) << " -> " << quoted("C:" + e.conception)
         << " [style=dashed, label=\"destabilizes\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ckc
