#include <doctest.h>

#include <cmath>

#include "mrz/random_tree.hpp"
#include "mrz/riesz.hpp"
#include "mrz/rng.hpp"
#include "mrz/single_step.hpp"
#include "oracle.hpp"

using namespace mrz;

namespace {

FiltrationTree two_atom_tree() {
  return FiltrationTree({{{1.0, -1}}, {{0.5, 0}, {0.5, 0}}});
}

SingleStepData random_decomposition(std::uint64_t seed, int max_depth = 6) {
  SplitMix64 rng(seed);
  const int depth = 1 + static_cast<int>(rng.next_below(max_depth));
  const FiltrationTree tree = random_tree(rng, depth, 5);
  const RandomVariable f = random_variable(rng, tree, depth, 2.0);
  const double p = rng.next_uniform(1.05, 5.0);
  return decompose(f, 1.0 - 1.0 / p);
}

}  // namespace

TEST_CASE("two-atom decomposition, p = 2") {
  const FiltrationTree tree = two_atom_tree();
  const RandomVariable f(tree, 1, {2.0, 0.0});
  const SingleStepData d = decompose(f, 0.5);

  CHECK(d.p == doctest::Approx(2.0));
  CHECK(d.fbar == doctest::Approx(1.0));
  CHECK(d.x_j[0] == doctest::Approx(1.0));
  CHECK(d.x_j[1] == doctest::Approx(0.5));

  const double expected_a = 0.7071067811865476;  // 2^{-1/2}
  CHECK(d.A[0] == doctest::Approx(expected_a).epsilon(1e-14));
  CHECK(d.A[1] == doctest::Approx(expected_a).epsilon(1e-14));
  CHECK(d.A_j[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(d.A_j[1] == doctest::Approx(0.5).epsilon(1e-13));

  // Depth 1: the full maximal function is the one-step one.
  CHECK(d.y_j[0] == doctest::Approx(d.x_j[0]));
  CHECK(d.y_j[1] == doctest::Approx(d.x_j[1]));

  const ConditionReport nonsing = check_nonsingularity(d);
  CHECK(nonsing.passed());
  CHECK(nonsing.worst_slack == doctest::Approx(0.5).epsilon(1e-12));

  const ConditionReport abound = check_A_bound(d);
  CHECK(abound.passed());
  // A_1 = 1/2 against the cap 3/4.
  CHECK(abound.worst_slack == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("constant variables decompose trivially") {
  // On any tree the maximal masses collapse to p_j |fbar|.
  SplitMix64 rng(31);
  const FiltrationTree tree = random_tree(rng, 3, 4);
  const RandomVariable c = lift(RandomVariable::constant(tree, 4.0), 3);
  const SingleStepData d = decompose(c, 0.5);
  for (std::size_t j = 0; j < d.s; ++j) {
    CHECK(d.x_j[j] == doctest::Approx(d.p_j[j] * 4.0));
    CHECK(d.y_j[j] == doctest::Approx(d.p_j[j] * 4.0));
  }

  // The conjugate potential multiplies before differencing, so its summands
  // only vanish for constants when every split is even; check that case.
  const FiltrationTree even({{{1.0, -1}},
                             {{0.5, 0}, {0.5, 0}},
                             {{0.25, 0}, {0.25, 0}, {0.25, 1}, {0.25, 1}}});
  const SingleStepData de = decompose(lift(RandomVariable::constant(even, 4.0), 2), 0.5);
  for (std::size_t j = 0; j < de.s; ++j) CHECK(de.A_j[j] == doctest::Approx(0.0));
  for (std::size_t i = 0; i < de.B.size(); ++i) CHECK(de.B[i] == doctest::Approx(0.0));
}

TEST_CASE("alpha outside (0,1) and flat trees are rejected") {
  const FiltrationTree tree = two_atom_tree();
  const RandomVariable f(tree, 1, {1.0, 2.0});
  CHECK_THROWS_AS(decompose(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(decompose(f, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(decompose(RandomVariable::constant(FiltrationTree::trivial(), 1.0), 0.5),
                  std::invalid_argument);
}

TEST_CASE("probabilities and maximal masses are consistent") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SingleStepData d = random_decomposition(seed);
    double psum = 0.0, ysum = 0.0, xsum = 0.0;
    for (std::size_t j = 0; j < d.s; ++j) {
      psum += d.p_j[j];
      ysum += d.y_j[j];
      xsum += d.x_j[j];
      CHECK(d.y_j[j] >= d.x_j[j] * (1.0 - 1e-12));
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));

    const MartingaleProcess m = martingale_from(d.terminal);
    CHECK(ysum == doctest::Approx(h1_norm(m)).epsilon(1e-12));

    // One-step maximal mass: the martingale stopped after the first step.
    const MartingaleProcess one_step = martingale_from(lift(m.step(1), m.tree().depth()));
    CHECK(xsum == doctest::Approx(h1_norm(one_step)).epsilon(1e-12));
  }
}

TEST_CASE("|A|_p^p equals the sum of A_j^p") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const SingleStepData d = random_decomposition(seed);
    double sum = 0.0;
    for (double a : d.A_j) sum += std::pow(a, d.p);
    CHECK(lp_norm_pow(d.A, d.p) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("signed split recombines to the conjugate potential") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const SingleStepData d = random_decomposition(seed);
    const RandomVariable a_lifted = lift(d.A, d.conj.level());
    const RandomVariable s_lifted = lift(d.a_sign, d.conj.level());
    const double scale = std::max({1e-300, sup_norm(d.conj), sup_norm(d.A), sup_norm(d.B)});
    for (std::size_t i = 0; i < d.conj.size(); ++i) {
      const double recombined = s_lifted[i] * a_lifted[i] + d.b_sign[i] * d.B[i];
      CHECK(std::abs(recombined - d.conj[i]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("both condition checks pass on a fuzz corpus") {
  for (std::uint64_t seed = 1000; seed < 2000; ++seed) {
    const SingleStepData d = random_decomposition(seed);
    CHECK(check_nonsingularity(d).passed());
    CHECK(check_A_bound(d).passed());
  }
}

TEST_CASE("single-atom first level is degenerate but valid") {
  // One child at level 1 that splits later.
  const FiltrationTree tree({{{1.0, -1}}, {{1.0, 0}}, {{0.3, 0}, {0.7, 0}}});
  const RandomVariable f(tree, 2, {2.0, -1.0});
  const SingleStepData d = decompose(f, 0.5);
  REQUIRE(d.s == 1);
  CHECK(d.A[0] == doctest::Approx(0.0));
  CHECK(check_nonsingularity(d).passed());
  CHECK(check_A_bound(d).passed());
}

TEST_CASE("conditional subtree rescales probabilities") {
  SplitMix64 rng(55);
  const FiltrationTree tree = random_tree(rng, 4, 3);
  for (std::size_t j = 0; j < tree.width(1); ++j) {
    const ConditionalSubtree sub = conditional_subtree(tree, j);
    CHECK(sub.tree.depth() == tree.depth() - 1);
    for (int m = 0; m < sub.tree.depth(); ++m) {
      for (std::size_t i = 0; i < sub.tree.width(m); ++i) {
        CHECK(sub.tree.prob(m, i) ==
              doctest::Approx(tree.prob(m + 1, sub.atom_map[m][i]) / tree.prob(1, j)));
      }
    }
  }
}

TEST_CASE("tail identity on the trivial depth-1 tree") {
  const FiltrationTree tree = two_atom_tree();
  const SingleStepData d = decompose(RandomVariable(tree, 1, {2.0, 0.0}), 0.5);
  const TailBoundReport report = check_b_bound(d);
  CHECK(report.identity_ok);
  CHECK(report.identity_gap == doctest::Approx(0.0));
  CHECK(report.tail_integral[0] == doctest::Approx(0.0));
}

TEST_CASE("tail identity on a uniform dyadic depth-2 tree") {
  const FiltrationTree tree({{{1.0, -1}},
                             {{0.5, 0}, {0.5, 0}},
                             {{0.25, 0}, {0.25, 0}, {0.25, 1}, {0.25, 1}}});
  SplitMix64 rng(77);
  const RandomVariable f = random_variable(rng, tree, 2, 3.0);
  const SingleStepData d = decompose(f, 0.5);
  const TailBoundReport report = check_b_bound(d);
  CHECK(report.identity_ok);
  CHECK(report.identity_gap <= 1e-10);
}

TEST_CASE("tail identity holds on random trees and the bound respects a searched constant") {
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 3000; seed < 3300; ++seed) {
    const SingleStepData d = random_decomposition(seed);
    const TailBoundReport report = check_b_bound(d);
    CHECK(report.identity_ok);
    worst_ratio = std::max(worst_ratio, report.worst_ratio);
  }
  // A fresh corpus stays below twice the worst ratio seen above.
  for (std::uint64_t seed = 9000; seed < 9150; ++seed) {
    const SingleStepData d = random_decomposition(seed);
    const TailBoundReport report = check_b_bound(d, 2.0 * worst_ratio);
    CHECK(report.bound_ok);
  }
}

TEST_CASE("condition report serializes to the expected shape") {
  const SingleStepData d = random_decomposition(4);
  const std::string json = check_nonsingularity(d).to_json();
  CHECK(json.find("\"condition\"") != std::string::npos);
  CHECK(json.find("\"worst_slack\"") != std::string::npos);
  CHECK(json.find("\"violations\": []") != std::string::npos);
}
