#include "ckc/relations.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ckc/parallel.hpp"

namespace ckc {

std::string to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Generality: return "generality";
    case RelationKind::Falsity: return "falsity";
    case RelationKind::SameObject: return "same-object";
  }
  return "?";
}

RelationKind parse_relation_kind(std::string_view s) {
  if (s == "generality") return RelationKind::Generality;
  if (s == "falsity") return RelationKind::Falsity;
  if (s == "same-object") return RelationKind::SameObject;
  throw std::invalid_argument("unknown relation kind '" + std::string(s) + "'");
}

namespace {

void require_languages(const Translation& f, const Conception& from, const Conception& to) {
  if (f.source().id != from.language->id || f.target().id != to.language->id)
    throw std::invalid_argument("translation " + f.id() + " maps " + f.source().id + " -> " +
                                f.target().id + ", expected " + from.language->id + " -> " +
                                to.language->id);
}

std::vector<std::string> ids_of(std::initializer_list<const Translation*> fs) {
  std::vector<std::string> out;
  for (const auto* f : fs)
    for (const auto& p : f->parts())
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

}  // namespace

RelationReport more_general(const Conception& c, const Conception& c_prime, const Translation& f) {
  require_languages(f, c_prime, c);
  RelationReport rep;
  rep.relation = RelationKind::Generality;
  rep.translations_used = ids_of({&f});
  for (const auto& proto : c_prime.problems.prototypes) {
    Term image;
    try {
      image = translate(f, proto.term);
    } catch (const Error& e) {
      rep.counterexample = Counterexample{c_prime.id, proto.name, proto.term, std::nullopt,
                                          std::string("untranslatable: ") + e.what()};
      return rep;
    }
    if (!membership(c.problems, image)) {
      rep.counterexample = Counterexample{c_prime.id, proto.name, proto.term, image,
                                          "translated problem is not in P of " + c.id};
      return rep;
    }
  }
  rep.holds = true;
  return rep;
}

RelationReport falsity(const Conception& c, const Conception& c_prime, const Translation& f,
                       const FalsityOptions& options) {
  require_languages(f, c, c_prime);
  RelationReport rep;
  rep.relation = RelationKind::Falsity;
  rep.translations_used = ids_of({&f});

  struct State {
    Term term;
    std::vector<WitnessStep> steps;
  };
  for (const auto& proto : c.problems.prototypes) {
    std::vector<State> frontier{{proto.term, {}}};
    for (int len = 1; len <= std::max(1, options.max_sequence); ++len) {
      std::vector<State> next;
      for (const auto& st : frontier) {
        for (const auto& op : c.operators) {
          for (auto& app : apply_operator(op, st.term)) {
            auto steps = st.steps;
            steps.push_back({c.id, op.id, app.position});
            const auto v = assess(c.controls, app.result, ControlScope::Step);
            if (v.verdict == Verdict::Invalid) continue;
            if (v.verdict == Verdict::Valid) {
              Term image;
              bool translated = true;
              try {
                image = translate(f, app.result);
              } catch (const Error& e) {
                rep.skipped.push_back({proto.name, app.result, e.what()});
                translated = false;
              }
              if (translated) {
                const auto v2 = assess(c_prime.controls, image, ControlScope::Step);
                if (v2.verdict == Verdict::Invalid) {
                  rep.holds = true;
                  rep.witness = FalsityWitness{proto.name, proto.term, std::move(steps), app.result,
                                               *v.control, image, *v2.control};
                  return rep;
                }
              }
            }
            next.push_back({app.result, std::move(steps)});
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return rep;
}

bool replay_falsity(const Conception& c, const Conception& c_prime, const Translation& f,
                    const FalsityWitness& w) {
  try {
    const auto steps = replay_witness({&c}, w.problem, w.steps);
    if (steps.empty() || steps.back().after != w.rewritten) return false;
    const auto v = assess(c.controls, w.rewritten, ControlScope::Step);
    if (v.verdict != Verdict::Valid || v.control != w.sigma) return false;
    const Term image = translate(f, w.rewritten);
    if (image != w.translated) return false;
    const auto v2 = assess(c_prime.controls, image, ControlScope::Step);
    return v2.verdict == Verdict::Invalid && v2.control == w.sigma_prime;
  } catch (const std::exception&) {
    return false;
  }
}

RelationReport same_object(const Conception& c, const Conception& c_prime, const Conception& c_a,
                           const Translation& f, const Translation& f_prime) {
  require_languages(f, c, c_a);
  require_languages(f_prime, c_prime, c_a);
  RelationReport rep;
  rep.relation = RelationKind::SameObject;
  rep.translations_used = ids_of({&f, &f_prime});

  struct Image {
    const Prototype* proto;
    std::optional<Term> term;
  };
  auto images = [&](const Conception& owner, const Translation& tr) {
    std::vector<Image> out;
    for (const auto& p : owner.problems.prototypes) {
      try {
        out.push_back({&p, translate(tr, p.term)});
      } catch (const Error& e) {
        rep.skipped.push_back({p.name, p.term, e.what()});
        out.push_back({&p, std::nullopt});
      }
    }
    return out;
  };
  const auto left = images(c, f);
  const auto right = images(c_prime, f_prime);
  std::set<Term> left_set, right_set;
  for (const auto& i : left)
    if (i.term) left_set.insert(*i.term);
  for (const auto& i : right)
    if (i.term) right_set.insert(*i.term);

  auto unmatched = [&](const Conception& owner, const std::vector<Image>& side,
                       const std::set<Term>& other, const std::string& other_id) -> bool {
    for (const auto& i : side) {
      if (!i.term) {
        rep.counterexample = Counterexample{owner.id, i.proto->name, i.proto->term, std::nullopt,
                                            "untranslatable: " + rep.skipped.front().reason};
        return true;
      }
      if (!other.contains(*i.term)) {
        rep.counterexample = Counterexample{owner.id, i.proto->name, i.proto->term, *i.term,
                                            "no prototype of " + other_id + " translates to the same problem"};
        return true;
      }
    }
    return false;
  };
  if (unmatched(c, left, right_set, c_prime.id)) return rep;
  if (unmatched(c_prime, right, left_set, c.id)) return rep;
  rep.holds = true;
  return rep;
}

namespace {

struct Routed {
  std::size_t index;  // into reg.conceptions()
  std::optional<std::size_t> reference;
  std::optional<Translation> route;
};

std::vector<Routed> route_members(const Registry& reg) {
  std::vector<Routed> out;
  const auto& cs = reg.conceptions();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (reg.is_reference(cs[i].id)) continue;
    Routed r{i, std::nullopt, std::nullopt};
    for (const auto& ref_id : reg.references()) {
      const auto ref_idx = reg.conception_index(ref_id);
      if (!ref_idx) continue;
      if (auto t = reg.route(cs[i].language->id, cs[*ref_idx].language->id)) {
        r.reference = ref_idx;
        r.route = std::move(t);
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(const std::vector<Routed>& members) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (members[i].reference && members[i].reference == members[j].reference) pairs.emplace_back(i, j);
  return pairs;
}

bool pair_same_object(const Registry& reg, const std::vector<Routed>& members,
                      std::pair<std::size_t, std::size_t> pr) {
  const auto& cs = reg.conceptions();
  const auto& a = members[pr.first];
  const auto& b = members[pr.second];
  return same_object(cs[a.index], cs[b.index], cs[*a.reference], *a.route, *b.route).holds;
}

std::vector<ConceptClass> assemble(const Registry& reg, const std::vector<Routed>& members,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                   const std::vector<char>& same) {
  std::vector<std::size_t> parent(members.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!same[k]) continue;
    const auto ra = find(pairs[k].first);
    const auto rb = find(pairs[k].second);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  const auto& cs = reg.conceptions();
  std::map<std::size_t, std::size_t> class_of_root;
  std::vector<ConceptClass> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto root = find(i);
    auto [it, fresh] = class_of_root.emplace(root, out.size());
    if (fresh) {
      ConceptClass cc;
      cc.id = "class-" + std::to_string(out.size() + 1);
      if (members[i].reference) cc.reference = cs[*members[i].reference].id;
      cc.unrelated = !members[i].reference;
      out.push_back(std::move(cc));
    }
    out[it->second].members.push_back(
        {cs[members[i].index].id, members[i].route ? members[i].route->id() : std::string()});
  }
  return out;
}

}  // namespace

std::vector<ConceptClass> concept_partition(const Registry& reg) {
  const auto members = route_members(reg);
  const auto pairs = candidate_pairs(members);
  const auto same = parallel_map(pairs.size(), [&](std::size_t k) -> char {
    return pair_same_object(reg, members, pairs[k]) ? 1 : 0;
  });
  return assemble(reg, members, pairs, same);
}

namespace serial {

std::vector<ConceptClass> concept_partition(const Registry& reg) {
  const auto members = route_members(reg);
  const auto pairs = candidate_pairs(members);
  std::vector<char> same;
  same.reserve(pairs.size());
  for (const auto& pr : pairs) same.push_back(pair_same_object(reg, members, pr) ? 1 : 0);
  return assemble(reg, members, pairs, same);
}

}  // namespace serial

Knowing define_knowing(const Registry& reg, std::string label, std::string subject,
                       std::vector<std::string> members) {
  if (members.empty()) throw KnowingError("a knowing needs at least one conception");
  for (const auto& m : members)
    if (!reg.find_conception(m)) throw KnowingError("unknown conception " + m);
  const auto classes = concept_partition(reg);
  std::set<std::string> touched;
  for (const auto& m : members) {
    std::string owner;
    for (const auto& cc : classes)
      for (const auto& cm : cc.members)
        if (cm.conception == m) owner = cc.id;
    if (owner.empty()) throw KnowingError("conception " + m + " is a reference and belongs to no concept class");
    touched.insert(owner);
  }
  if (touched.size() > 1)
    throw KnowingError("members straddle " + std::to_string(touched.size()) + " concept classes");
  return Knowing{std::move(label), std::move(subject), std::move(members), *touched.begin()};
}

}  // namespace ckc
