#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "ckc/relations.hpp"
#include "support.hpp"

using namespace ckc;

namespace {

std::vector<Registry> all_packs() {
  std::vector<Registry> out;
  for (const auto& m : builtin_packs()) out.push_back(load_builtin(m.id));
  return out;
}

/// Identity plus every declared translation from `source` to `target`.
std::vector<Translation> translations(const Registry& reg, const Language& source, const Language& target) {
  std::vector<Translation> out;
  if (source.id == target.id) out.push_back(reg.translation("id:" + source.id));
  for (const auto* f : reg.translations_between(source.id, target.id)) out.push_back(*f);
  return out;
}

}  // namespace

TEST_CASE("generality between addition conceptions") {
  const auto reg = load_builtin("addition");
  const auto& c2 = reg.conception("C2");
  const auto& c3 = reg.conception("C3");
  const auto& c4 = reg.conception("C4");

  auto r = more_general(c3, c2, reg.translation("f_count2dec"));
  CHECK(r.holds);
  CHECK(r.relation == RelationKind::Generality);
  CHECK(r.translations_used == std::vector<std::string>{"f_count2dec"});
  CHECK(more_general(c3, c4, reg.translation("f_keys2dec")).holds);

  r = more_general(c2, c3, reg.translation("f_dec2count"));
  CHECK(!r.holds);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->term == parse_term("(add 16 23)"));
  CHECK(r.counterexample->conception == "C3");

  CHECK(more_general(c3, c3, reg.translation("id:L_dec")).holds);
  CHECK_THROWS_AS(more_general(c3, c2, reg.translation("f_keys2dec")), std::invalid_argument);
}

TEST_CASE("falsity of the naive angle sum from the Euclidean view") {
  const auto reg = load_builtin("triangle");
  const auto& n = reg.conception("naive-anglesum");
  const auto& e = reg.conception("euclid");
  const auto f = reg.translation("f_N2E");
  const auto r = falsity(n, e, f);
  REQUIRE(r.holds);
  REQUIRE(r.witness);
  const auto& w = *r.witness;
  CHECK(w.problem == parse_term("(compare-sum (tri t0) (scaled t0 3))"));
  REQUIRE(w.steps.size() == 1);
  CHECK(w.steps[0].op == "bigger-bigger");
  CHECK(w.rewritten == parse_term("(sum-order gt (scaled t0 3) (tri t0))"));
  CHECK(w.sigma == "n-visual");
  CHECK(w.sigma_prime == "e-sum-180");
  CHECK(replay_falsity(n, e, f, w));

  auto tampered = w;
  tampered.sigma_prime = "e-equal";
  CHECK(!replay_falsity(n, e, f, tampered));
  tampered = w;
  tampered.rewritten = parse_term("(sum-order eq (scaled t0 3) (tri t0))");
  CHECK(!replay_falsity(n, e, f, tampered));
}

TEST_CASE("falsity absent") {
  const auto add = load_builtin("addition");
  const auto r = falsity(add.conception("C2"), add.conception("C3"), add.translation("f_count2dec"));
  CHECK(!r.holds);
  CHECK(!r.witness);
  for (const auto& reg : all_packs())
    for (const auto& c : reg.conceptions())
      CHECK(!falsity(c, c, reg.translation("id:" + c.language->id)).holds);
}

TEST_CASE("same object") {
  const auto add = load_builtin("addition");
  const auto& mu = add.conception("C_mu");
  auto r = same_object(add.conception("C1"), add.conception("C3"), mu, add.translation("f_count2mu"),
                       add.translation("f_dec2mu"));
  CHECK(r.holds);
  CHECK(r.relation == RelationKind::SameObject);

  const auto fr = load_builtin("fractions");
  r = same_object(fr.conception("C_eg-mult"), fr.conception("C_rat-mult"), fr.conception("C_mu_rat"),
                  fr.translation("f_eg2rat"), fr.translation("id:L_rat"));
  CHECK(r.holds);

  const auto tri = load_builtin("triangle");
  CHECK_THROWS_AS(same_object(tri.conception("naive-anglesum"), add.conception("C1"), mu,
                              tri.translation("f_N2geo"), add.translation("f_count2mu")),
                  std::invalid_argument);
  r = same_object(tri.conception("naive-anglesum"), tri.conception("euclid"), tri.conception("C_mu_tri"),
                  tri.translation("f_N2geo"), tri.translation("f_E2geo"));
  CHECK(r.holds == same_object(tri.conception("euclid"), tri.conception("naive-anglesum"),
                               tri.conception("C_mu_tri"), tri.translation("f_E2geo"), tri.translation("f_N2geo"))
                       .holds);
}

TEST_CASE("property: reflexivity on every pack conception") {
  for (const auto& reg : all_packs()) {
    for (const auto& c : reg.conceptions()) {
      const auto id = reg.translation("id:" + c.language->id);
      CHECK_MESSAGE(more_general(c, c, id).holds, c.id);
      CHECK_MESSAGE(same_object(c, c, c, id, id).holds, c.id);
    }
  }
}

TEST_CASE("property: same object is symmetric") {
  std::size_t pairs = 0;
  for (const auto& reg : all_packs()) {
    for (const auto& ref : reg.references()) {
      const auto& a = reg.conception(ref);
      for (const auto& c : reg.conceptions())
        for (const auto& d : reg.conceptions()) {
          const auto f = reg.route(c.language->id, a.language->id);
          const auto g = reg.route(d.language->id, a.language->id);
          if (!f || !g) continue;
          ++pairs;
          CHECK(same_object(c, d, a, *f, *g).holds == same_object(d, c, a, *g, *f).holds);
        }
    }
  }
  CHECK(pairs > 20);
}

TEST_CASE("property: generality is transitive under composition") {
  std::size_t chains = 0;
  for (const auto& reg : all_packs()) {
    const auto& cs = reg.conceptions();
    for (const auto& c : cs)
      for (const auto& c1 : cs)
        for (const auto& c2 : cs)
          for (const auto& f : translations(reg, *c1.language, *c.language))
            for (const auto& g : translations(reg, *c2.language, *c1.language)) {
              if (!more_general(c, c1, f).holds || !more_general(c1, c2, g).holds) continue;
              ++chains;
              CHECK_MESSAGE(more_general(c, c2, compose(g, f)).holds, c.id << " > " << c1.id << " > " << c2.id);
            }
  }
  CHECK(chains > 10);
}

TEST_CASE("concept partition of the addition pack") {
  const auto reg = load_builtin("addition");
  const auto classes = concept_partition(reg);
  REQUIRE(classes.size() == 1);
  std::vector<std::string> ids;
  for (const auto& m : classes[0].members) ids.push_back(m.conception);
  CHECK(ids == std::vector<std::string>{"C1", "C2", "C3", "C4"});
  CHECK(classes[0].reference == "C_mu");
  CHECK(!classes[0].unrelated);
}

TEST_CASE("merged packs split into two classes") {
  const auto reg = Registry::merge({load_builtin("addition"), load_builtin("triangle")});
  const auto classes = concept_partition(reg);
  CHECK(classes.size() == 2);
  CHECK(serial::concept_partition(reg).size() == 2);
}

TEST_CASE("a lone conception is a singleton class") {
  const auto reg = load_pack_text(R"j({
    "pack": "lone",
    "languages": [{"id": "L", "signature": ["f/1"], "atom_sorts": ["int"]}],
    "translations": [],
    "conceptions": [{"id": "C", "language": "L",
      "problems": {"prototypes": [{"name": "p", "term": "(f 1)"}]},
      "operators": [{"id": "g", "lhs": "(f ?x)", "rhs": "?x"}],
      "controls": []}],
    "problems": []
  })j");
  const auto classes = concept_partition(reg);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].members.size() == 1);
  CHECK(classes[0].unrelated);
}

TEST_CASE("property: partitions are disjoint and cover every conception") {
  std::vector<Registry> regs = all_packs();
  regs.push_back(Registry::merge({load_builtin("addition"), load_builtin("triangle")}));
  regs.push_back(Registry::merge(all_packs()));
  for (const auto& reg : regs) {
    const auto classes = concept_partition(reg);
    const auto ref = serial::concept_partition(reg);
    REQUIRE(classes.size() == ref.size());
    std::multiset<std::string> seen;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      CHECK(classes[i].id == ref[i].id);
      CHECK(classes[i].reference == ref[i].reference);
      REQUIRE(classes[i].members.size() == ref[i].members.size());
      for (std::size_t j = 0; j < classes[i].members.size(); ++j) {
        CHECK(classes[i].members[j].conception == ref[i].members[j].conception);
        CHECK(classes[i].members[j].translation == ref[i].members[j].translation);
        seen.insert(classes[i].members[j].conception);
      }
    }
    std::multiset<std::string> expected;
    for (const auto& c : reg.conceptions())
      if (!reg.is_reference(c.id)) expected.insert(c.id);
    CHECK(seen == expected);
  }
}

TEST_CASE("knowings lie in one class") {
  const auto add = load_builtin("addition");
  const auto k = define_knowing(add, "pupil-A-addition", "pupil-A", {"C1", "C2"});
  CHECK(k.members == std::vector<std::string>{"C1", "C2"});
  CHECK(k.concept_class == "class-1");
  CHECK(define_knowing(add, "solo", "pupil-B", {"C3"}).members.size() == 1);
  CHECK_THROWS_AS(define_knowing(add, "empty", "x", {}), KnowingError);
  CHECK_THROWS_AS(define_knowing(add, "ghost", "x", {"C9"}), KnowingError);

  const auto merged = Registry::merge({load_builtin("addition"), load_builtin("triangle")});
  try {
    define_knowing(merged, "mixed", "x", {"C1", "naive-anglesum"});
    FAIL("expected a straddling knowing to be rejected");
  } catch (const KnowingError& e) {
    CHECK(std::string(e.what()).find("straddle 2 concept classes") != std::string::npos);
  }
}

TEST_CASE("relation kind names") {
  for (auto k : {RelationKind::Generality, RelationKind::Falsity, RelationKind::SameObject})
    CHECK(parse_relation_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_relation_kind("kinship"), std::invalid_argument);
}
