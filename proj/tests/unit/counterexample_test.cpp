#include <doctest.h>

#include <cmath>

#include "mrz/counterexample.hpp"
#include "mrz/riesz.hpp"
#include "mrz/tree_io.hpp"

using namespace mrz;

TEST_CASE("dyadic chain builds one new sibling per split") {
  const FiltrationTree tree = build_chain(ChainSpec::dyadic(3));
  REQUIRE(tree.depth() == 3);
  CHECK(tree.width(0) == 1);
  CHECK(tree.width(1) == 2);
  CHECK(tree.width(2) == 3);
  CHECK(tree.width(3) == 4);
  CHECK(tree.prob(3, 0) == doctest::Approx(0.125));
}

TEST_CASE("constant chain is a single-atom column") {
  ChainSpec spec;
  spec.d = {1.0, 1.0, 1.0};
  const FiltrationTree tree = build_chain(spec);
  for (int n = 0; n <= 2; ++n) CHECK(tree.width(n) == 1);

  // Every per-step coefficient vanishes, so the whole curve is zero.
  const GrowthCurve curve = growth_curve(spec, 2.0);
  for (const GrowthPoint& pt : curve.points) {
    CHECK(pt.norm_p_pow == doctest::Approx(0.0));
    CHECK(pt.closed_form_pow == doctest::Approx(0.0));
  }
}

TEST_CASE("chain trees survive a serialization round trip") {
  const ChainSpec spec = ChainSpec::dyadic(5);
  const FiltrationTree tree = build_chain(spec);
  const FiltrationTree back = tree_from_json(tree_to_json(tree));
  REQUIRE(back.depth() == tree.depth());
  for (int n = 0; n <= tree.depth(); ++n) {
    for (std::size_t i = 0; i < tree.width(n); ++i) {
      CHECK(back.prob(n, i) == tree.prob(n, i));
      CHECK(back.parent(n, i) == tree.parent(n, i));
    }
  }
}

TEST_CASE("chain specs are validated") {
  ChainSpec bad;
  bad.d = {1.0, 0.6};  // neither kept nor halved
  CHECK(validate_chain(bad) == "keep-or-halve");
  CHECK_THROWS_AS(build_chain(bad), InvariantError);

  ChainSpec shifted;
  shifted.d = {0.5, 0.25};
  CHECK(validate_chain(shifted) == "starts-at-one");

  ChainSpec underflow;
  underflow.d = {1.0};
  for (int i = 0; i < 520; ++i) underflow.d.push_back(underflow.d.back() / 2.0);
  CHECK(validate_chain(underflow) == "probability-underflow");
}

TEST_CASE("chain martingale has unit mass at every step") {
  const ChainSpec spec = ChainSpec::dyadic(40);
  const FiltrationTree tree = build_chain(spec);
  const MartingaleProcess m = chain_martingale(tree, spec);
  CHECK(m.step(0)[0] == 1.0);
  for (int n = 0; n <= 40; ++n) {
    CHECK(lp_norm(m.step(n), 1.0) == 1.0);  // exact for dyadic probabilities
  }
  CHECK(tower_gap(m) <= 1e-12);
}

TEST_CASE("dyadic coefficients match the geometric form") {
  const ChainSpec spec = ChainSpec::dyadic(30);
  const double factor = 1.0 - std::pow(2.0, -0.5);
  for (int n = 0; n < 30; ++n) {
    const double expected = factor * std::pow(2.0, 0.5 * n);
    CHECK(chain_coefficient(spec, n, 2.0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("growth curve agrees with direct operator evaluation") {
  const ChainSpec spec = ChainSpec::dyadic(12);
  const GrowthCurve curve = growth_curve(spec, 2.0);  // internal 1e-9 cross-check
  REQUIRE(curve.points.size() == 12);

  const FiltrationTree tree = build_chain(spec);
  const MartingaleProcess m = chain_martingale(tree, spec);
  const RieszResult res = conj_riesz(m.terminal(), 0.5, 12, true);
  for (const GrowthPoint& pt : curve.points) {
    CHECK(pt.norm_p_pow == doctest::Approx(lp_norm_pow(res.partials[pt.n], 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("growth curve is nondecreasing and eventually linear for the dyadic chain") {
  const ChainSpec spec = ChainSpec::dyadic(40);
  const GrowthCurve curve = growth_curve(spec, 2.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].norm_p_pow >= curve.points[i - 1].norm_p_pow * (1.0 - 1e-12));
  }
  const double slope = fitted_slope(curve.points, 15, 40);
  CHECK(slope == doctest::Approx(0.5).epsilon(0.1));

  // Threshold step for p = 2: first n with (1 - 2^{-1/2}) 2^{n/2} > 2.
  CHECK(curve.k_threshold == 6);
}

TEST_CASE("dyadic growth is unbounded at desk scale") {
  const GrowthCurve curve = growth_curve(ChainSpec::dyadic(60), 2.0);
  const double at_30 = curve.points.at(29).norm_p_pow;
  const double at_60 = curve.points.at(59).norm_p_pow;
  CHECK(at_60 - at_30 >= 10.0);
}

TEST_CASE("a kept step contributes nothing to the curve") {
  ChainSpec spec;
  spec.d = {1.0, 0.5, 0.5, 0.25};
  const GrowthCurve curve = growth_curve(spec, 2.0);
  CHECK(curve.points[1].norm_p_pow == doctest::Approx(curve.points[0].norm_p_pow));
}

TEST_CASE("mixed chains also match their closed form") {
  ChainSpec spec;
  spec.d = {1.0, 0.5, 0.5, 0.125, 0.125, 0.03125};
  const GrowthCurve curve = growth_curve(spec, 1.5);  // throws on disagreement
  CHECK(curve.points.back().norm_p_pow > 0.0);
}
