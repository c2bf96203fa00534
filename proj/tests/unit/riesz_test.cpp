#include <doctest.h>

#include <cmath>

#include "mrz/random_tree.hpp"
#include "mrz/riesz.hpp"
#include "mrz/rng.hpp"
#include "oracle.hpp"

using namespace mrz;

namespace {

FiltrationTree two_atom_tree() {
  return FiltrationTree({{{1.0, -1}}, {{0.5, 0}, {0.5, 0}}});
}

// Depth-2 tree with an uneven first split; the two potentials differ here.
FiltrationTree witness_tree() {
  return FiltrationTree({{{1.0, -1}},
                         {{0.25, 0}, {0.75, 0}},
                         {{0.125, 0}, {0.125, 0}, {0.75, 1}}});
}

}  // namespace

TEST_CASE("zero exponent telescopes to F_N - F_0") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitMix64 rng(seed);
    const int depth = 1 + static_cast<int>(rng.next_below(4));
    const FiltrationTree tree = random_tree(rng, depth, 4);
    const RandomVariable f = random_variable(rng, tree, depth, 2.0);
    const RandomVariable f0 = condition(f, 0);

    for (const RieszResult& res :
         {riesz(f, 0.0, depth), conj_riesz(f, 0.0, depth)}) {
      for (std::size_t i = 0; i < res.value.size(); ++i) {
        CHECK(res.value[i] == doctest::Approx(f[i] - f0[0]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("two-atom evaluation") {
  const FiltrationTree tree = two_atom_tree();
  const RandomVariable f(tree, 1, {2.0, 0.0});
  const double expected = 0.7071067811865476;  // 2^{-1/2}

  const RieszResult plain = riesz(f, 0.5, 1);
  CHECK(plain.value[0] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(plain.value[1] == doctest::Approx(-expected).epsilon(1e-14));

  const RieszResult conj = conj_riesz(f, 0.5, 1);
  CHECK(conj.value[0] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(conj.value[1] == doctest::Approx(-expected).epsilon(1e-14));
}

TEST_CASE("constant variables are annihilated by the plain potential") {
  SplitMix64 rng(5);
  const FiltrationTree tree = random_tree(rng, 4, 4);
  const RandomVariable c = lift(RandomVariable::constant(tree, 9.0), 4);
  const RieszResult res = riesz(c, 0.5, 4);
  for (std::size_t i = 0; i < res.value.size(); ++i) CHECK(res.value[i] == doctest::Approx(0.0));
}

TEST_CASE("both potentials match the brute-force oracle") {
  for (std::uint64_t seed = 50; seed < 65; ++seed) {
    SplitMix64 rng(seed);
    const int depth = 1 + static_cast<int>(rng.next_below(5));
    const FiltrationTree tree = random_tree(rng, depth, 4);
    const RandomVariable f = random_variable(rng, tree, depth, 2.0);
    const double alpha = rng.next_double();
    CHECK(oracle::rel_gap(riesz(f, alpha, depth).value, oracle::riesz(f, alpha, depth)) <= 1e-12);
    CHECK(oracle::rel_gap(conj_riesz(f, alpha, depth).value,
                          oracle::conj_riesz(f, alpha, depth)) <= 1e-12);
  }
}

TEST_CASE("both potentials are linear") {
  SplitMix64 rng(77);
  const FiltrationTree tree = random_tree(rng, 4, 4);
  const RandomVariable f = random_variable(rng, tree, 4, 2.0);
  const RandomVariable g = random_variable(rng, tree, 4, 2.0);
  std::vector<double> combo(f.size());
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.5 * f[i] - 1.25 * g[i];
  const RandomVariable h(tree, 4, std::move(combo));

  for (double alpha : {0.25, 0.5, 0.9}) {
    const RandomVariable th = conj_riesz(h, alpha, 4).value;
    const RandomVariable tf = conj_riesz(f, alpha, 4).value;
    const RandomVariable tg = conj_riesz(g, alpha, 4).value;
    double scale = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) scale = std::max(scale, std::abs(th[i]));
    for (std::size_t i = 0; i < th.size(); ++i) {
      CHECK(std::abs(th[i] - (2.5 * tf[i] - 1.25 * tg[i])) <= 1e-12 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("partial sums of the conjugate potential are its conditionings") {
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    SplitMix64 rng(seed);
    const int depth = 1 + static_cast<int>(rng.next_below(5));
    const FiltrationTree tree = random_tree(rng, depth, 4);
    const RandomVariable f = random_variable(rng, tree, depth, 2.0);
    const double alpha = rng.next_double();
    const RieszResult res = conj_riesz(f, alpha, depth, /*with_partials=*/true);
    REQUIRE(res.partials.size() == static_cast<std::size_t>(depth) + 1);
    const double scale = std::max(1.0, sup_norm(res.value));
    for (int n = 0; n <= depth; ++n) {
      CHECK(res.partials[n].level() == n);
      CHECK(max_abs_deviation(res.partials[n], condition(res.value, n)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("duality gap vanishes on random pairs") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    SplitMix64 rng(seed);
    const int depth = 1 + static_cast<int>(rng.next_below(6));
    const FiltrationTree tree = random_tree(rng, depth, 4);
    const RandomVariable f = random_variable(rng, tree, depth, 2.0);
    const RandomVariable g = random_variable(rng, tree, depth, 2.0);
    const double alpha = rng.next_double();
    const double scale = std::max(1e-300, lp_norm(f, 2.0) * lp_norm(g, 2.0));
    CHECK(duality_gap(f, g, alpha, depth) <= 1e-10 * scale);
  }
}

TEST_CASE("duality against the constant one, both sides brute-forced") {
  SplitMix64 rng(404);
  const FiltrationTree tree = random_tree(rng, 4, 4);
  const RandomVariable f = random_variable(rng, tree, 4, 2.0);
  const RandomVariable one = lift(RandomVariable::constant(tree, 1.0), 4);
  const double alpha = 0.5;

  const double lhs = oracle::inner(oracle::riesz(f, alpha, 4), one);
  const double rhs = oracle::inner(f, oracle::conj_riesz(one, alpha, 4));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  CHECK(inner_product(riesz(f, alpha, 4).value, one) == doctest::Approx(lhs).epsilon(1e-10));
}

TEST_CASE("constant pairs give zero on both sides") {
  const FiltrationTree tree = two_atom_tree();
  const RandomVariable c = lift(RandomVariable::constant(tree, 3.0), 1);
  CHECK(inner_product(riesz(c, 0.5, 1).value, c) == doctest::Approx(0.0));
  CHECK(duality_gap(c, c, 0.5, 1) <= 1e-14);
}

TEST_CASE("the two potentials differ on an uneven tree") {
  const FiltrationTree tree = witness_tree();
  const RandomVariable f(tree, 2, {4.0, 0.0, 0.0});

  const RandomVariable plain = riesz(f, 0.5, 2).value;
  const RandomVariable conj = conj_riesz(f, 0.5, 2).value;

  // Frozen by direct evaluation: both agree on the first two leaves and
  // differ on the third.
  CHECK(plain[0] == doctest::Approx(1.4571067811865476).epsilon(1e-12));
  CHECK(plain[1] == doctest::Approx(0.0428932188134524).epsilon(1e-10));
  CHECK(plain[2] == doctest::Approx(-0.4330127018922193).epsilon(1e-12));
  CHECK(conj[0] == doctest::Approx(1.4571067811865476).epsilon(1e-12));
  CHECK(conj[1] == doctest::Approx(0.0428932188134524).epsilon(1e-10));
  CHECK(conj[2] == doctest::Approx(-0.25).epsilon(1e-12));

  CHECK(oracle::rel_gap(plain, conj) > 0.05);
}

TEST_CASE("horizon beyond the tree depth is rejected") {
  const FiltrationTree tree = two_atom_tree();
  const RandomVariable f(tree, 1, {1.0, -1.0});
  CHECK_THROWS_AS(riesz(f, 0.5, 2), std::out_of_range);
}
