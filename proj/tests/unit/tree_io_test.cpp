#include <doctest.h>

#include "mrz/random_tree.hpp"
#include "mrz/rng.hpp"
#include "mrz/tree_io.hpp"
#include "oracle.hpp"

using namespace mrz;

TEST_CASE("tree round trip is the identity") {
  SplitMix64 rng(21);
  const FiltrationTree tree = random_tree(rng, 4, 4);
  const FiltrationTree back = tree_from_json(tree_to_json(tree));
  REQUIRE(back.depth() == tree.depth());
  for (int n = 0; n <= tree.depth(); ++n) {
    REQUIRE(back.width(n) == tree.width(n));
    for (std::size_t i = 0; i < tree.width(n); ++i) {
      CHECK(back.prob(n, i) == tree.prob(n, i));
      CHECK(back.parent(n, i) == tree.parent(n, i));
    }
  }
}

TEST_CASE("variable round trip is the identity") {
  SplitMix64 rng(22);
  const FiltrationTree tree = random_tree(rng, 3, 4);
  const RandomVariable f = random_variable(rng, tree, 2, 5.0);
  const RandomVariable back = variable_from_json(variable_to_json(f), tree);
  CHECK(back.level() == 2);
  CHECK(oracle::rel_gap(f, back) == 0.0);
}

TEST_CASE("parsing names the first violated invariant") {
  SUBCASE("root level must be a single atom") {
    const char* doc = R"({"levels": [[{"p": 1.0, "parent": -1}, {"p": 1.0, "parent": -1}]]})";
    try {
      tree_from_json(doc);
      FAIL("expected InvariantError");
    } catch (const InvariantError& e) {
      CHECK(e.invariant() == "root-level-single-atom");
    }
  }
  SUBCASE("children must sum to the parent") {
    const char* doc =
        R"({"levels": [[{"p": 1.0, "parent": -1}],
                       [{"p": 0.5, "parent": 0}, {"p": 0.6, "parent": 0}]]})";
    try {
      tree_from_json(doc);
      FAIL("expected InvariantError");
    } catch (const InvariantError& e) {
      CHECK(e.invariant() == "children-probability-sum");
    }
  }
  SUBCASE("probabilities must be positive") {
    const char* doc =
        R"({"levels": [[{"p": 1.0, "parent": -1}],
                       [{"p": 0.0, "parent": 0}, {"p": 1.0, "parent": 0}]]})";
    try {
      tree_from_json(doc);
      FAIL("expected InvariantError");
    } catch (const InvariantError& e) {
      CHECK(e.invariant() == "positive-probability");
    }
  }
}

TEST_CASE("malformed documents are rejected without naming an invariant") {
  CHECK_THROWS_AS(tree_from_json(""), std::runtime_error);
  CHECK_THROWS_AS(tree_from_json("{"), std::exception);      // json parse error
  CHECK_THROWS(tree_from_json("{"));
  CHECK_THROWS_AS(tree_from_json(R"({"nope": 1})"), std::runtime_error);

  const FiltrationTree tree = tree_from_json(
      R"({"levels": [[{"p": 1.0, "parent": -1}], [{"p": 0.5, "parent": 0}, {"p": 0.5, "parent": 0}]]})");
  CHECK_THROWS_AS(variable_from_json("", tree), std::runtime_error);
  CHECK_THROWS_AS(variable_from_json(R"({"level": 1})", tree), std::runtime_error);

  // Wrong value count is an invariant violation, not a parse error.
  try {
    variable_from_json(R"({"level": 1, "values": [1.0]})", tree);
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(e.invariant() == "values-length");
  }
}
