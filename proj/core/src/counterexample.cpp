#include "mrz/counterexample.hpp"

#include <cmath>

#include "mrz/riesz.hpp"

namespace mrz {

namespace {

constexpr double kAgreementTol = 1e-9;
constexpr double kProbFloorLog2 = -500.0;  // d_n below 2^-500 risks overflow in d_n^{-1/p}

}  // namespace

ChainSpec ChainSpec::dyadic(int depth) {
  ChainSpec spec;
  spec.d.resize(depth + 1);
  double v = 1.0;
  for (int n = 0; n <= depth; ++n, v *= 0.5) spec.d[n] = v;
  return spec;
}

std::string validate_chain(const ChainSpec& spec) {
  if (spec.d.empty() || spec.d[0] != 1.0) return "starts-at-one";
  for (std::size_t n = 0; n < spec.d.size(); ++n) {
    if (!(spec.d[n] > 0.0) || !std::isfinite(spec.d[n])) return "positive-probability";
    if (std::log2(spec.d[n]) < kProbFloorLog2) return "probability-underflow";
  }
  for (std::size_t n = 0; n + 1 < spec.d.size(); ++n) {
    const bool keep = spec.d[n + 1] == spec.d[n];
    const bool halve = spec.d[n + 1] <= 0.5 * spec.d[n];
    if (!keep && !halve) return "keep-or-halve";
  }
  return "";
}

FiltrationTree build_chain(const ChainSpec& spec) {
  const std::string violated = validate_chain(spec);
  if (!violated.empty()) throw InvariantError(violated, "chain spec violates " + violated);

  std::vector<std::vector<Atom>> levels;
  levels.push_back({Atom{1.0, -1}});
  std::vector<double> sibling_probs;  // siblings alive at the previous level, in birth order
  for (int n = 1; n <= spec.depth(); ++n) {
    std::vector<Atom> level;
    level.push_back(Atom{spec.d[n], 0});  // the chain atom descends from slot 0
    for (std::size_t i = 0; i < sibling_probs.size(); ++i) {
      level.push_back(Atom{sibling_probs[i], static_cast<int>(i + 1)});
    }
    if (spec.d[n] < spec.d[n - 1]) {
      level.push_back(Atom{spec.d[n - 1] - spec.d[n], 0});
      sibling_probs.push_back(spec.d[n - 1] - spec.d[n]);
    }
    levels.push_back(std::move(level));
  }
  return FiltrationTree(std::move(levels));
}

MartingaleProcess chain_martingale(const FiltrationTree& tree, const ChainSpec& spec) {
  if (tree.depth() != spec.depth()) {
    throw std::invalid_argument("tree depth does not match the chain spec");
  }
  std::vector<RandomVariable> steps;
  steps.reserve(spec.depth() + 1);
  for (int n = 0; n <= spec.depth(); ++n) {
    std::vector<double> values(tree.width(n), 0.0);
    values[0] = 1.0 / spec.d[n];
    steps.emplace_back(tree, n, std::move(values));
  }
  return MartingaleProcess(std::move(steps));
}

double chain_coefficient(const ChainSpec& spec, int n, double p) {
  const double inv_p = 1.0 / p;
  const double inv_pp = 1.0 - inv_p;
  return std::pow(spec.d[n], -inv_p) - std::pow(spec.d[n + 1], inv_pp) / spec.d[n];
}

GrowthCurve growth_curve(const ChainSpec& spec, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("growth curve requires p > 1");
  const std::string violated = validate_chain(spec);
  if (!violated.empty()) throw InvariantError(violated, "chain spec violates " + violated);

  const double inv_p = 1.0 / p;
  const double inv_pp = 1.0 - inv_p;
  const double alpha = inv_pp;
  const int depth = spec.depth();

  GrowthCurve curve;
  curve.p = p;
  curve.alpha = alpha;

  const FiltrationTree tree = build_chain(spec);
  const MartingaleProcess m = chain_martingale(tree, spec);
  const RieszResult res = conj_riesz(m.terminal(), alpha, depth, /*with_partials=*/true);

  // The trigger threshold: first split step where the minimum per-level
  // magnitude (1 - 2^{-1/p'}) d_n^{-1/p} exceeds 2.
  const double trigger = 1.0 - std::pow(2.0, -inv_pp);
  for (int n = 0; n < depth; ++n) {
    if (spec.d[n + 1] < spec.d[n] && trigger * std::pow(spec.d[n], -inv_p) > 2.0) {
      curve.k_threshold = n;
      break;
    }
  }

  // Closed form: prefix sums of the per-step coefficients give the value on
  // each frozen sibling region; the chain atom carries the truncation tail.
  std::vector<double> prefix(depth + 1, 0.0);
  for (int n = 0; n < depth; ++n) prefix[n + 1] = prefix[n] + chain_coefficient(spec, n, p);

  // Birth step of each sibling slot at any level: sibling k was created at
  // the k-th split step.
  std::vector<int> split_steps;
  for (int n = 1; n <= depth; ++n) {
    if (spec.d[n] < spec.d[n - 1]) split_steps.push_back(n);
  }

  curve.points.reserve(depth);
  for (int n = 1; n <= depth; ++n) {
    const RandomVariable& partial = res.partials[n];
    const double pw = lp_norm_pow(partial, p);

    double cf = 0.0;
    {
      // Chain atom: prefix through step n-1 plus the truncation tail.
      const double value = prefix[n] + std::pow(spec.d[n], -inv_p) - 1.0;
      cf += std::pow(std::abs(value), p) * spec.d[n];
    }
    for (std::size_t k = 0; k < split_steps.size() && split_steps[k] <= n; ++k) {
      const int born = split_steps[k];
      // A sibling frozen at step `born` sees exactly the first `born`
      // coefficients and no truncation tail.
      const double value = prefix[born] - 1.0;
      const double prob = spec.d[born - 1] - spec.d[born];
      cf += std::pow(std::abs(value), p) * prob;
    }

    if (std::abs(pw - cf) > kAgreementTol * std::max({pw, cf, 1.0})) {
      throw InvariantError("closed-form-agreement",
                           "operator and closed-form evaluations disagree at horizon " +
                               std::to_string(n));
    }
    curve.points.push_back(GrowthPoint{n, pw, cf});
  }
  return curve;
}

double fitted_slope(const std::vector<GrowthPoint>& points, int n_min, int n_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long count = 0;
  for (const GrowthPoint& pt : points) {
    if (pt.n < n_min || pt.n > n_max) continue;
    sx += pt.n;
    sy += pt.norm_p_pow;
    sxx += static_cast<double>(pt.n) * pt.n;
    sxy += pt.n * pt.norm_p_pow;
    ++count;
  }
  if (count < 2) throw std::invalid_argument("slope needs at least two points in range");
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace mrz
