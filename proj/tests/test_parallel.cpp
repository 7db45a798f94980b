#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "ckc/diagnosis.hpp"
#include "ckc/learning_graph.hpp"
#include "ckc/parallel.hpp"
#include "ckc/relations.hpp"
#include "support.hpp"

using namespace ckc;

TEST_CASE("results keep input order") {
  const auto v = parallel_map(1000, [](std::size_t i) { return i * i; });
  REQUIRE(v.size() == 1000);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  CHECK(parallel_map(0, [](std::size_t i) { return i; }).empty());
}

TEST_CASE("the lowest failing index wins") {
  try {
    parallel_map(100, [](std::size_t i) -> int {
      if (i == 70 || i == 30) throw std::runtime_error("failed at " + std::to_string(i));
      return 0;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "failed at 30");
  }
}

TEST_CASE("kernels agree with their serial references at any thread count") {
  const auto reg = Registry::merge({load_builtin("addition"), load_builtin("fractions"), load_builtin("triangle")});
  const auto ref_graph = serial::build_graph(reg);
  const auto ref_dot = to_dot(ref_graph);
  const auto ref_classes = serial::concept_partition(reg);
  Trace trace{{{parse_term("(state 16 4)"), parse_term("(state 17 3)"), Verdict::Valid},
               {parse_term("(add 16 23)"), parse_term("(num 39)"), std::nullopt}}};
  const auto ref_diag = serial::diagnose(reg, trace);

  for (int threads : {1, 2, 4}) {
    set_worker_threads(threads);
    CHECK(to_dot(build_graph(reg)) == ref_dot);
    const auto classes = concept_partition(reg);
    REQUIRE(classes.size() == ref_classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      CHECK(classes[i].id == ref_classes[i].id);
      REQUIRE(classes[i].members.size() == ref_classes[i].members.size());
      for (std::size_t j = 0; j < classes[i].members.size(); ++j)
        CHECK(classes[i].members[j].conception == ref_classes[i].members[j].conception);
    }
    const auto d = diagnose(reg, trace);
    REQUIRE(d.ranking.size() == ref_diag.ranking.size());
    for (std::size_t i = 0; i < d.ranking.size(); ++i) {
      CHECK(d.ranking[i].conception == ref_diag.ranking[i].conception);
      CHECK(d.ranking[i].coverage == ref_diag.ranking[i].coverage);
    }
  }
  CHECK(worker_threads() >= 1);
}
