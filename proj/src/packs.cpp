#include "ckc/packs.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "ckc/learning_graph.hpp"
#include "ckc/relations.hpp"
#include "ckc/solver.hpp"

namespace ckc {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_packs();
}

namespace {

using nlohmann::json;

PackManifest make_manifest(std::string_view name, std::string_view text) {
  const Registry reg = load_pack_text(text, "builtin:" + std::string(name));
  PackManifest m;
  m.id = reg.packs().front().id;
  m.description = reg.packs().front().description;
  for (const auto& l : reg.languages()) m.languages.push_back(l->id);
  for (const auto& c : reg.conceptions()) m.conceptions.push_back(c.id);
  for (const auto& p : reg.problems()) m.problems.push_back(p.id);
  for (const auto& t : reg.translations()) m.translations.push_back(t.id());
  if (!reg.references().empty()) m.reference = reg.references().front();
  const auto doc = json::parse(text);
  if (doc.contains("fixtures"))
    for (const auto& f : doc["fixtures"]) m.fixtures.push_back(f.dump());
  m.source = text;
  return m;
}

ConceptionSet conception_set(const Registry& reg, const json& ids) {
  ConceptionSet set;
  for (const auto& id : ids) set.push_back(&reg.conception(id.get<std::string>()));
  return set;
}

std::string replay_solve(const Registry& reg, const json& f) {
  const auto set = conception_set(reg, f.at("conceptions"));
  const auto& problem = reg.problem(f.at("problem").get<std::string>());
  const auto r = solves(set, problem.term);
  std::ostringstream why;
  if (to_string(r.status) != f.at("status").get<std::string>()) why << "status " << to_string(r.status) << "; ";
  if (f.contains("final") && (!r.final_term || to_string(*r.final_term) != f["final"].get<std::string>()))
    why << "final " << (r.final_term ? to_string(*r.final_term) : "none") << "; ";
  if (f.contains("control") && r.final_control.value_or("") != f["control"].get<std::string>())
    why << "control " << r.final_control.value_or("none") << "; ";
  if (f.contains("witness_length") && r.witness.size() != f["witness_length"].get<std::size_t>())
    why << "witness length " << r.witness.size() << "; ";
  if (r.status == SolveStatus::Solved && !verify_solved(set, problem.term, r)) why << "witness does not replay; ";
  return why.str();
}

std::string replay_relation(const Registry& reg, const json& f) {
  const auto kind = parse_relation_kind(f.at("relation").get<std::string>());
  const auto& from = reg.conception(f.at("from").get<std::string>());
  const auto& to = reg.conception(f.at("to").get<std::string>());
  const auto tr = reg.translation(f.at("translation").get<std::string>());
  RelationReport r;
  bool replayed = true;
  switch (kind) {
    case RelationKind::Generality:
      r = more_general(from, to, tr);
      break;
    case RelationKind::Falsity:
      r = falsity(from, to, tr);
      if (r.witness) replayed = replay_falsity(from, to, tr, *r.witness);
      break;
    case RelationKind::SameObject:
      r = same_object(from, to, reg.conception(f.at("via").get<std::string>()), tr,
                      reg.translation(f.at("translation2").get<std::string>()));
      break;
  }
  std::ostringstream why;
  if (r.holds != f.at("holds").get<bool>()) why << "holds=" << r.holds << "; ";
  if (f.contains("counterexample")) {
    const auto got = r.counterexample ? to_string(r.counterexample->term) : std::string("none");
    if (got != f["counterexample"].get<std::string>()) why << "counterexample " << got << "; ";
  }
  if (f.contains("rewritten")) {
    const auto got = r.witness ? to_string(r.witness->rewritten) : std::string("none");
    if (got != f["rewritten"].get<std::string>()) why << "rewritten " << got << "; ";
  }
  if (!replayed) why << "witness does not replay; ";
  return why.str();
}

std::string replay_path(const Registry& reg, const json& f) {
  const auto g = build_graph(reg);
  const auto path = plan_path(f.at("from").get<std::string>(), f.at("to").get<std::string>(), g);
  json got = nullptr;
  if (path) {
    got = json::array();
    for (std::size_t i = 0; i < path->conceptions.size(); ++i) {
      if (i > 0) got.push_back(path->problems[i - 1]);
      got.push_back(path->conceptions[i]);
    }
  }
  return got == f.at("path") ? "" : "path " + got.dump();
}

std::string replay_partition(const Registry& reg, const json& f) {
  json got = json::array();
  for (const auto& cls : concept_partition(reg)) {
    json members = json::array();
    for (const auto& m : cls.members) members.push_back(m.conception);
    got.push_back(members);
  }
  return got == f.at("classes") ? "" : "classes " + got.dump();
}

std::string replay_egypt(const json& f) {
  const Term q = parse_term(f.at("q").get<std::string>());
  json got = json::array();
  for (const auto& u : egypt_decompose(q.value())) got.push_back(to_string(Term::number(u)));
  return got == f.at("units") ? "" : "units " + got.dump();
}

}  // namespace

const std::vector<PackManifest>& builtin_packs() {
  static const std::vector<PackManifest> packs = [] {
    std::vector<PackManifest> out;
    for (const auto& [name, text] : detail::embedded_packs()) out.push_back(make_manifest(name, text));
    return out;
  }();
  return packs;
}

const PackManifest& builtin_pack(std::string_view name) {
  for (const auto& m : builtin_packs())
    if (m.id == name) return m;
  throw NotFound("no builtin pack '" + std::string(name) + "'");
}

Registry load_builtin(std::string_view name) {
  return load_pack_text(builtin_pack(name).source, "builtin:" + std::string(name));
}

Registry load_pack_spec(std::string_view spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.starts_with(prefix)) {
    const auto name = spec.substr(prefix.size());
    try {
      return load_builtin(name);
    } catch (const NotFound& e) {
      throw ValidationError({{std::string(name), std::string(spec), e.what()}});
    }
  }
  return load_pack(std::filesystem::path(std::string(spec)));
}

std::vector<FixtureOutcome> replay_fixtures(const PackManifest& manifest) {
  const Registry reg = load_pack_text(manifest.source, manifest.id);
  std::vector<FixtureOutcome> out;
  for (std::size_t i = 0; i < manifest.fixtures.size(); ++i) {
    const auto f = json::parse(manifest.fixtures[i]);
    FixtureOutcome o;
    o.index = i;
    o.kind = f.value("kind", std::string());
    try {
      if (o.kind == "solve")
        o.detail = replay_solve(reg, f);
      else if (o.kind == "relation")
        o.detail = replay_relation(reg, f);
      else if (o.kind == "path")
        o.detail = replay_path(reg, f);
      else if (o.kind == "partition")
        o.detail = replay_partition(reg, f);
      else if (o.kind == "egypt")
        o.detail = replay_egypt(f);
      else
        o.detail = "unknown fixture kind";
    } catch (const std::exception& e) {
      o.detail = e.what();
    }
    o.passed = o.detail.empty();
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Rational> egypt_decompose(const Rational& q) {
  if (q <= 0 || q > 1) throw std::domain_error("egypt_decompose needs 0 < q <= 1");
  std::vector<Rational> out;
  Rational rest = q;
  while (rest != 0) {
    const BigInt n = numerator(rest);
    const BigInt d = denominator(rest);
    const BigInt u = (d + n - 1) / n;
    out.emplace_back(BigInt(1), u);
    rest -= out.back();
  }
  return out;
}

}  // namespace ckc
