#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "json.hpp"

#include "ckc/registry.hpp"
#include "support.hpp"

using namespace ckc;
using nlohmann::json;

namespace {

json tiny_pack() {
  return json::parse(R"j({
    "pack": "tiny",
    "languages": [{"id": "L", "signature": ["add/2", "num/1"], "atom_sorts": ["int"]}],
    "translations": [],
    "conceptions": [{
      "id": "C",
      "language": "L",
      "problems": {"prototypes": [{"name": "p", "term": "(add 1 2)"}]},
      "operators": [{"id": "go", "lhs": "(add ?a ?b)", "rhs": "(num @add(?a ?b))"}],
      "controls": [{"id": "done", "scope": "solution", "pattern": "(num ?n)", "verdict": "solved"}]
    }],
    "problems": [{"id": "p1", "language": "L", "term": "(add 1 2)"}]
  })j");
}

std::vector<ValidationIssue> issues_of(const json& pack) {
  try {
    load_pack_text(pack.dump());
  } catch (const ValidationError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<ValidationIssue>& issues, std::string_view needle) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.reason.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("the addition pack loads its four conceptions") {
  const auto reg = load_builtin("addition");
  std::vector<std::string> ids;
  for (const auto& c : reg.conceptions()) ids.push_back(c.id);
  CHECK(ids == std::vector<std::string>{"C1", "C2", "C3", "C4", "C_mu"});
  CHECK(reg.references() == std::vector<std::string>{"C_mu"});
  CHECK(reg.is_reference("C_mu"));
  CHECK(!reg.is_reference("C1"));
  CHECK(reg.problem("p_16+23").term == parse_term("(add 16 23)"));
  CHECK(reg.conception_index("C3") == 2u);
  CHECK_THROWS_AS(reg.conception("C9"), NotFound);
  CHECK_THROWS_AS(reg.problem("p_none"), NotFound);
  CHECK(reg.find_problem("p_none") == nullptr);
}

TEST_CASE("a minimal pack loads") {
  const auto reg = load_pack_text(tiny_pack().dump());
  CHECK(reg.conceptions().size() == 1);
  CHECK(reg.references().empty());
}

TEST_CASE("unbound template variables are rejected") {
  auto pack = tiny_pack();
  pack["conceptions"][0]["operators"][0]["rhs"] = "(num ?z)";
  const auto issues = issues_of(pack);
  CHECK(mentions(issues, "unbound variable z"));
}

TEST_CASE("non-conforming prototypes are rejected") {
  auto pack = tiny_pack();
  pack["languages"][0]["signature"] = json::array({"num/1"});
  pack["conceptions"][0]["operators"][0]["lhs"] = "(num ?a)";
  pack["conceptions"][0]["operators"][0]["rhs"] = "(num ?a)";
  pack["problems"] = json::array();
  const auto issues = issues_of(pack);
  CHECK(mentions(issues, "does not conform to language L"));
}

TEST_CASE("validation collects every issue") {
  auto pack = tiny_pack();
  pack["conceptions"][0]["operators"][0]["rhs"] = "(num ?z)";
  pack["conceptions"][0]["controls"][0]["verdict"] = "sometimes";
  pack["problems"][0]["language"] = "L_missing";
  pack["c_mu"] = "C_missing";
  const auto issues = issues_of(pack);
  CHECK(issues.size() >= 4);
  CHECK(mentions(issues, "unknown language L_missing"));
  CHECK(mentions(issues, "unknown conception C_missing"));
  CHECK_THROWS_AS(load_pack_text("{not json"), ValidationError);
  CHECK_THROWS_AS(load_pack_text("[]"), ValidationError);
}

TEST_CASE("translation specs") {
  const auto reg = load_builtin("addition");
  CHECK(reg.translation("f_count2dec").id() == "f_count2dec");
  const auto id = reg.translation("id:L_dec");
  CHECK(id.source().id == "L_dec");
  CHECK(translate(id, parse_term("(num 4)")) == parse_term("(num 4)"));
  const auto chain = reg.translation("f_count2dec,f_dec2mu");
  CHECK(chain.source().id == "L_count");
  CHECK(chain.target().id == "L_mu");
  CHECK(chain.parts() == std::vector<std::string>{"f_count2dec", "f_dec2mu"});
  CHECK_THROWS_AS(reg.translation("f_none"), NotFound);
  CHECK_THROWS_AS(reg.translation("id:L_none"), NotFound);
  CHECK_THROWS_AS(reg.translation("f_count2dec,f_count2dec"), std::invalid_argument);
}

TEST_CASE("routes prefer identity, then direct, then two steps") {
  const auto reg = load_builtin("addition");
  CHECK(reg.route("L_dec", "L_dec")->id() == "id:L_dec");
  CHECK(reg.route("L_count", "L_mu")->id() == "f_count2mu");
  CHECK(reg.route("L_keys", "L_count")->parts() == std::vector<std::string>{"f_keys2dec", "f_dec2count"});
  CHECK(!reg.route("L_mu", "L_count"));
  CHECK(reg.translations_between("L_count", "L_dec").size() == 1);
}

TEST_CASE("merge keeps packs apart and rejects duplicates") {
  const auto merged = Registry::merge({load_builtin("addition"), load_builtin("triangle")});
  CHECK(merged.conceptions().size() == 8);
  CHECK(merged.references() == std::vector<std::string>{"C_mu", "C_mu_tri"});
  CHECK(merged.packs().size() == 2);
  CHECK_THROWS_AS(Registry::merge({load_builtin("addition"), load_builtin("addition")}), ValidationError);
}

TEST_CASE("load is insensitive to the order of declarations") {
  auto pack = json::parse(builtin_pack("addition").source);
  const auto base = load_pack_text(pack.dump());
  for (const auto* key : {"languages", "translations", "conceptions", "problems"})
    std::reverse(pack[key].begin(), pack[key].end());
  const auto reversed = load_pack_text(pack.dump());

  auto ids = [](const Registry& r) {
    std::vector<std::string> out;
    for (const auto& c : r.conceptions()) out.push_back(c.id);
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(ids(base) == ids(reversed));
  for (const auto& c : base.conceptions()) {
    const auto& d = reversed.conception(c.id);
    REQUIRE(c.operators.size() == d.operators.size());
    for (std::size_t i = 0; i < c.operators.size(); ++i) {
      CHECK(c.operators[i].id == d.operators[i].id);
      CHECK(c.operators[i].rhs == d.operators[i].rhs);
    }
    CHECK(c.language->id == d.language->id);
  }
  for (const auto& p : base.problems()) CHECK(reversed.problem(p.id).term == p.term);
}
