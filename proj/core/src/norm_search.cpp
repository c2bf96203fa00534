#include "mrz/norm_search.hpp"

#include <algorithm>
#include <cmath>

#include "mrz/counterexample.hpp"
#include "mrz/parallel.hpp"
#include "mrz/random_tree.hpp"
#include "mrz/riesz.hpp"

namespace mrz {

namespace {

double ratio_for(NormMode mode, const Params& params, const RandomVariable& f) {
  const int depth = f.tree().depth();
  switch (mode) {
    case NormMode::lp_to_lq: {
      const double denom = lp_norm(f, params.p);
      if (denom == 0.0) return 0.0;
      return lp_norm(riesz(f, params.alpha, depth).value, *params.q) / denom;
    }
    case NormMode::lr_to_bmo: {
      const double denom = lp_norm(f, *params.r);
      if (denom == 0.0) return 0.0;
      const RandomVariable img = riesz(f, params.alpha, depth).value;
      return bmo_norm(martingale_from(img)) / denom;
    }
    case NormMode::h1_to_lp: {
      const double denom = h1_norm(martingale_from(f));
      if (denom == 0.0) return 0.0;
      return lp_norm(conj_riesz(f, params.alpha, depth).value, params.p) / denom;
    }
    case NormMode::chain_l1: {
      const double denom = lp_norm(f, 1.0);
      if (denom == 0.0) return 0.0;
      return lp_norm_pow(conj_riesz(f, params.alpha, depth).value, params.p) /
             std::pow(denom, params.p);
    }
  }
  return 0.0;
}

void validate_params(NormMode mode, const Params& params) {
  switch (mode) {
    case NormMode::lp_to_lq:
      if (!params.q || !(params.p > 1.0) || !(*params.q > params.p)) {
        throw std::invalid_argument("the L_p -> L_q regime requires 1 < p < q < inf");
      }
      if (std::abs(params.alpha - (1.0 / params.p - 1.0 / *params.q)) > 1e-12) {
        throw std::invalid_argument("alpha must equal 1/p - 1/q in the L_p -> L_q regime");
      }
      break;
    case NormMode::lr_to_bmo:
      if (!params.r || !(*params.r > 1.0)) {
        throw std::invalid_argument("the BMO regime requires 1 < r < inf");
      }
      if (std::abs(params.alpha - 1.0 / *params.r) > 1e-12) {
        throw std::invalid_argument("alpha must equal 1/r in the BMO regime");
      }
      break;
    case NormMode::h1_to_lp:
    case NormMode::chain_l1:
      if (!(params.p > 1.0)) {
        throw std::invalid_argument("the conjugate regime requires 1 < p < inf");
      }
      if (std::abs(params.alpha - (1.0 - 1.0 / params.p)) > 1e-12) {
        throw std::invalid_argument("alpha must equal 1/p' in the conjugate regime");
      }
      break;
  }
}

// Keep-or-halve chain of the given depth; trial 0 always explores the pure
// dyadic chain, the sharpest standard instance.
ChainSpec random_chain(SplitMix64& rng, long trial, int depth) {
  ChainSpec spec;
  spec.d.resize(depth + 1);
  spec.d[0] = 1.0;
  for (int n = 1; n <= depth; ++n) {
    const bool halve = trial == 0 || rng.next_bool(0.75);
    spec.d[n] = halve ? spec.d[n - 1] * 0.5 : spec.d[n - 1];
  }
  return spec;
}

struct RestartOutcome {
  double ratio = 0.0;
  long evaluations = 0;
};

RestartOutcome run_restart(NormMode mode, const Params& params, const SearchConfig& cfg,
                           long trial) {
  SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(trial));
  RestartOutcome out;

  if (mode == NormMode::chain_l1) {
    const ChainSpec spec = random_chain(rng, trial, cfg.max_depth);
    const FiltrationTree tree = build_chain(spec);
    const MartingaleProcess m = chain_martingale(tree, spec);
    out.ratio = ratio_for(mode, params, m.terminal());
    out.evaluations = 1;
    return out;
  }

  const int depth =
      cfg.min_depth + static_cast<int>(rng.next_below(cfg.max_depth - cfg.min_depth + 1));
  const FiltrationTree tree = random_tree(rng, depth, cfg.max_branch, cfg.max_atoms);
  const std::size_t leaves = tree.width(depth);

  // Alternate between flat random starts and a sharp single-atom start; the
  // sharp profile is where the conjugate regime is extremal.
  RandomVariable f = random_variable(rng, tree, depth);
  if (trial % 2 == 1) {
    std::vector<double> values(leaves, 0.0);
    const std::size_t pick = rng.next_below(leaves);
    values[pick] = 1.0 / tree.prob(depth, pick);
    f = RandomVariable(tree, depth, std::move(values));
  }

  double cur = ratio_for(mode, params, f);
  out.evaluations = 1;
  std::vector<double> values(f.values().begin(), f.values().end());
  for (int step = 0; step < cfg.climb_steps; ++step) {
    const std::size_t idx = rng.next_below(leaves);
    double factor = std::exp(cfg.step * rng.next_uniform(-1.0, 1.0));
    if (rng.next_bool(0.1)) factor = -factor;
    const double saved = values[idx];
    values[idx] = saved == 0.0 ? factor - 1.0 : saved * factor;
    const double cand = ratio_for(mode, params, RandomVariable(tree, depth, values));
    ++out.evaluations;
    if (cand > cur) {
      cur = cand;
    } else {
      values[idx] = saved;
    }
  }
  out.ratio = cur;
  return out;
}

}  // namespace

NormEstimate estimate_operator_norm(NormMode mode, const Params& params,
                                    const SearchConfig& cfg) {
  validate_params(mode, params);
  if (cfg.min_depth < 0 || cfg.max_depth < cfg.min_depth || cfg.max_branch < 1 ||
      !(cfg.step > 0.0) || cfg.climb_steps < 0) {
    throw std::invalid_argument("search configuration fields must be positive");
  }
  if (cfg.trials <= 0) return {};

  std::vector<RestartOutcome> outcomes(cfg.trials);
  parallel_for(cfg.trials, cfg.threads,
               [&](long i) { outcomes[i] = run_restart(mode, params, cfg, i); });

  NormEstimate out;
  out.trace.reserve(cfg.trials);
  for (long i = 0; i < cfg.trials; ++i) {
    out.evaluations += outcomes[i].evaluations;
    if (outcomes[i].ratio > out.estimate) {
      out.estimate = outcomes[i].ratio;
      out.best_trial = i;
    }
    out.trace.push_back(NormTraceRow{i, outcomes[i].ratio, out.estimate});
  }
  return out;
}

}  // namespace mrz
