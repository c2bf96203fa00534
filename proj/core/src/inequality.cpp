#include "mrz/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrz/parallel.hpp"

namespace mrz {

namespace {

constexpr double kCondTol = 1e-12;
constexpr double kHoldTol = 1e-12;
constexpr double kBisectRelTol = 1e-6;

double power_sum(std::span<const double> v, double p) {
  double sum = 0.0;
  for (double x : v) sum += std::pow(x, p);
  return sum;
}

}  // namespace

std::string validate_instance(const InequalityInstance& inst) {
  const std::size_t s = inst.size();
  if (!(inst.p > 1.0)) return "exponent-range";
  if (!(inst.mu > 0.0)) return "weight-positive";
  if (inst.x_j.size() != s || inst.y_j.size() != s || inst.A_j.size() != s) {
    return "sequence-lengths";
  }
  if (s == 0) return "sequence-nonempty";

  double psum = 0.0;
  for (double pj : inst.p_j) {
    if (!(pj >= 0.0)) return "probabilities-nonnegative";
    psum += pj;
  }
  if (std::abs(psum - 1.0) > kCondTol) return "probabilities-sum-to-one";

  for (std::size_t j = 0; j < s; ++j) {
    if (!(inst.x_j[j] >= 0.0) || !(inst.y_j[j] >= 0.0) || !(inst.A_j[j] >= 0.0)) {
      return "sequences-nonnegative";
    }
    if (inst.y_j[j] < inst.x_j[j] * (1.0 - kCondTol)) return "y-dominates-x";
  }

  double xsum = 0.0;
  for (double x : inst.x_j) xsum += x;
  for (std::size_t j = 0; j < s; ++j) {
    const double lhs = (1.0 - inst.p_j[j]) * inst.x_j[j];
    const double rhs = 2.0 * (xsum - inst.x_j[j]);
    if (lhs > rhs + kCondTol * std::max(1.0, lhs)) return "non-singularity";
  }

  const double inv_p = 1.0 / inst.p;
  const double inv_pp = 1.0 - inv_p;
  const double sum_xp = power_sum(inst.x_j, inst.p);
  for (std::size_t j = 0; j < s; ++j) {
    const double rest = std::max(0.0, sum_xp - std::pow(inst.x_j[j], inst.p));
    const double cap = inst.x_j[j] * (1.0 - inst.p_j[j]) +
                       std::pow(inst.p_j[j], inv_p) * std::pow(rest, inv_p) *
                           std::pow(1.0 - inst.p_j[j], inv_pp);
    if (inst.A_j[j] > cap + kCondTol * std::max(1.0, cap)) return "first-summand-bound";
  }
  return "";
}

InequalityInstance make_instance(double p, double mu, std::vector<double> p_j,
                                 std::vector<double> x_j, std::vector<double> y_j,
                                 std::vector<double> A_j) {
  InequalityInstance inst{p, mu, std::move(p_j), std::move(x_j), std::move(y_j), std::move(A_j)};
  const std::string violated = validate_instance(inst);
  if (!violated.empty()) {
    throw InvariantError(violated, "inequality instance violates " + violated);
  }
  return inst;
}

NumineqEval check_numineq(const InequalityInstance& inst, double C) {
  const double p = inst.p;
  double sum_Ap = 0.0, sum_Ayp = 0.0, sum_y = 0.0, sum_yp = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    sum_Ap += std::pow(inst.A_j[j], p);
    sum_Ayp += inst.A_j[j] * std::pow(inst.y_j[j], p - 1.0);
    sum_y += inst.y_j[j];
    sum_yp += std::pow(inst.y_j[j], p);
  }
  NumineqEval out;
  out.lhs = inst.mu * sum_Ap + inst.mu * std::pow(C, (p - 1.0) / p) * sum_Ayp;
  out.rhs = C * (std::pow(sum_y, p) - sum_yp);
  out.holds = out.lhs <= out.rhs + kHoldTol * std::max(std::abs(out.lhs), std::abs(out.rhs));
  return out;
}

double min_constant_for(const InequalityInstance& inst) {
  const double p = inst.p;
  // Cache the three sums; each bisection step then costs one pow.
  double sum_Ap = 0.0, sum_Ayp = 0.0, sum_y = 0.0, sum_yp = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    sum_Ap += std::pow(inst.A_j[j], p);
    sum_Ayp += inst.A_j[j] * std::pow(inst.y_j[j], p - 1.0);
    sum_y += inst.y_j[j];
    sum_yp += std::pow(inst.y_j[j], p);
  }
  const double gap = std::pow(sum_y, p) - sum_yp;
  const double mu = inst.mu;
  const double ce = (p - 1.0) / p;

  if (sum_Ap == 0.0 && sum_Ayp == 0.0) return 0.0;
  if (gap <= 0.0) return std::numeric_limits<double>::infinity();

  const auto holds = [&](double C) {
    const double lhs = mu * sum_Ap + mu * std::pow(C, ce) * sum_Ayp;
    const double rhs = C * gap;
    return lhs <= rhs + kHoldTol * std::max(lhs, std::abs(rhs));
  };

  double hi = 1.0;
  int doublings = 0;
  while (!holds(hi)) {
    hi *= 2.0;
    if (++doublings > 1100) return std::numeric_limits<double>::infinity();
  }
  double lo = hi == 1.0 ? 0.0 : hi / 2.0;
  // The difference rhs - lhs decreases then increases in C, so the first
  // holding point of the doubling scan brackets the final sign change.
  while (hi - lo > kBisectRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

InequalityInstance random_instance(SplitMix64& rng, double p, double mu, std::size_t max_s) {
  const std::size_t s = 1 + rng.next_below(max_s);
  std::vector<double> p_j(s), x_j(s), y_j(s), A_j(s);

  double psum = 0.0;
  for (double& v : p_j) {
    v = rng.next_exponential();
    psum += v;
  }
  for (double& v : p_j) v /= psum;

  double xsum = 0.0;
  for (double& v : x_j) {
    v = rng.next_exponential();
    xsum += v;
  }
  if (s > 1) {
    // At most one coordinate can violate non-singularity; pull it to its cap.
    for (std::size_t j = 0; j < s; ++j) {
      const double rest = xsum - x_j[j];
      if ((1.0 - p_j[j]) * x_j[j] > 2.0 * rest) {
        x_j[j] = 2.0 * rest / (1.0 - p_j[j]);
        xsum = rest + x_j[j];
        break;
      }
    }
  }

  const bool pin_y = rng.next_bool(0.5);
  for (std::size_t j = 0; j < s; ++j) {
    y_j[j] = pin_y ? x_j[j] : x_j[j] * (1.0 + rng.next_exponential());
  }

  const bool pin_A = rng.next_bool(0.5);
  const double inv_p = 1.0 / p;
  const double inv_pp = 1.0 - inv_p;
  const double sum_xp = power_sum(x_j, p);
  for (std::size_t j = 0; j < s; ++j) {
    const double rest = std::max(0.0, sum_xp - std::pow(x_j[j], p));
    const double cap = x_j[j] * (1.0 - p_j[j]) +
                       std::pow(p_j[j], inv_p) * std::pow(rest, inv_p) *
                           std::pow(1.0 - p_j[j], inv_pp);
    A_j[j] = pin_A ? cap : cap * rng.next_double();
  }

  return InequalityInstance{p, mu, std::move(p_j), std::move(x_j), std::move(y_j),
                            std::move(A_j)};
}

namespace {

// Instance on the extremal family: probabilities from logits, x from log
// scales (repaired onto the non-singularity cap like the random generator),
// y = x inflated by nonnegative slack, A pinned at its cap, where the
// left-hand side is largest.
InequalityInstance family_instance(double p, double mu, std::span<const double> logit,
                                   std::span<const double> log_x,
                                   std::span<const double> slack) {
  const std::size_t s = logit.size();
  std::vector<double> p_j(s), x_j(s), y_j(s), A_j(s);
  double psum = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    p_j[j] = std::exp(logit[j]);
    psum += p_j[j];
  }
  for (double& v : p_j) v /= psum;

  double xsum = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    x_j[j] = std::exp(log_x[j]);
    xsum += x_j[j];
  }
  if (s > 1) {
    for (std::size_t j = 0; j < s; ++j) {
      const double rest = xsum - x_j[j];
      if ((1.0 - p_j[j]) * x_j[j] > 2.0 * rest) {
        x_j[j] = 2.0 * rest / (1.0 - p_j[j]);
        break;
      }
    }
  }

  const double inv_p = 1.0 / p;
  const double inv_pp = 1.0 - inv_p;
  const double sum_xp = power_sum(x_j, p);
  for (std::size_t j = 0; j < s; ++j) {
    y_j[j] = x_j[j] * (1.0 + std::max(0.0, slack[j]));
    const double rest = std::max(0.0, sum_xp - std::pow(x_j[j], p));
    A_j[j] = x_j[j] * (1.0 - p_j[j]) +
             std::pow(p_j[j], inv_p) * std::pow(rest, inv_p) * std::pow(1.0 - p_j[j], inv_pp);
  }
  return InequalityInstance{p, mu, std::move(p_j), std::move(x_j), std::move(y_j),
                            std::move(A_j)};
}

}  // namespace

double extremal_constant_probe(double p, double mu, std::size_t max_s) {
  double best = 0.0;
  for (std::size_t s = 1; s <= std::min<std::size_t>(4, max_s); ++s) {
    for (int start = 0; start < 24; ++start) {
      SplitMix64 rng(SplitMix64::mix(0x5eed0fabULL, s * 131 + start));
      std::vector<double> logit(s), log_x(s), slack(s, 0.0);
      for (std::size_t j = 0; j < s; ++j) {
        logit[j] = rng.next_uniform(-3.0, 3.0);
        log_x[j] = rng.next_uniform(-7.0, 1.0);
      }
      double cur = min_constant_for(family_instance(p, mu, logit, log_x, slack));
      for (int step = 0; step < 400; ++step) {
        const double sigma = 1.0 * std::pow(0.05, step / 400.0);
        const std::size_t dim = rng.next_below(3 * s);
        std::vector<double>* target = dim < s ? &logit : dim < 2 * s ? &log_x : &slack;
        const std::size_t j = dim % s;
        const double saved = (*target)[j];
        (*target)[j] = saved + rng.next_uniform(-sigma, sigma);
        const double cand = min_constant_for(family_instance(p, mu, logit, log_x, slack));
        if (cand > cur && std::isfinite(cand)) {
          cur = cand;
        } else {
          (*target)[j] = saved;
        }
      }
      best = std::max(best, cur);
    }
  }
  return best;
}

MinConstantResult min_constant(double p, double mu, const SearchConfig& cfg,
                               const std::function<void(long, std::size_t, double)>& row_sink) {
  if (cfg.trials <= 0) return {};
  std::vector<double> results(cfg.trials);
  std::vector<std::size_t> sizes(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](long i) {
    SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(i));
    const InequalityInstance inst = random_instance(rng, p, mu, cfg.max_s);
    results[i] = min_constant_for(inst);
    sizes[i] = inst.size();
  });

  MinConstantResult out;
  double total = 0.0;
  for (long i = 0; i < cfg.trials; ++i) {
    if (row_sink) row_sink(i, sizes[i], results[i]);
    if (std::isinf(results[i])) {
      ++out.violations;
      continue;
    }
    total += results[i];
    if (results[i] > out.min_c) {
      out.min_c = results[i];
      out.worst_trial = i;
    }
  }
  out.mean_c = cfg.trials > 0 ? total / static_cast<double>(cfg.trials) : 0.0;
  out.probe_c = extremal_constant_probe(p, mu, cfg.max_s);
  out.min_c = std::max(out.min_c, out.probe_c);
  return out;
}

NonsingGap nonsing_gap(std::span<const double> x, std::span<const double> p_j, double p) {
  if (x.size() != p_j.size() || x.empty()) {
    throw std::invalid_argument("nonsing_gap requires matching nonempty sequences");
  }
  double xsum = 0.0;
  for (double v : x) xsum += v;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double lhs = (1.0 - p_j[j]) * x[j];
    const double rhs = 2.0 * (xsum - x[j]);
    if (lhs > rhs + kCondTol * std::max(1.0, lhs)) {
      throw InvariantError("non-singularity", "nonsing_gap input violates non-singularity");
    }
  }
  std::size_t lead = 0;
  for (std::size_t j = 1; j < p_j.size(); ++j) {
    if (p_j[j] > p_j[lead]) lead = j;
  }

  NonsingGap out;
  out.lhs = std::pow(xsum, p) - power_sum(x, p);
  out.rhs = (1.0 - p_j[lead]) * std::pow(x[lead], p) + std::pow(xsum - x[lead], p);
  out.ratio = out.rhs == 0.0 ? 0.0 : out.lhs / out.rhs;
  return out;
}

InequalityInstance reduce_to_nonsingular(const InequalityInstance& inst) {
  InequalityInstance out = inst;
  if (out.size() <= 1) return out;
  std::size_t k = 0;
  double ysum = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    ysum += out.y_j[j];
    if (out.y_j[j] > out.y_j[k]) k = j;
  }
  const double rest = ysum - out.y_j[k];
  const double stop = std::max(out.x_j[k], rest / 2.0);
  out.y_j[k] = std::min(out.y_j[k], stop);
  return out;
}

SplitRatios check_split_inequalities(const InequalityInstance& inst) {
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (inst.x_j[j] != inst.y_j[j]) {
      throw std::invalid_argument("split inequalities require the reduced case x_j == y_j");
    }
  }
  const double p = inst.p;
  double sum_y = 0.0, sum_yp = 0.0, num1 = 0.0, num2 = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    sum_y += inst.y_j[j];
    sum_yp += std::pow(inst.y_j[j], p);
    num1 += std::pow(inst.A_j[j], p);
    num2 += inst.A_j[j] * std::pow(inst.y_j[j], p - 1.0);
  }
  const double gap = std::pow(sum_y, p) - sum_yp;
  SplitRatios out;
  out.ratio1 = gap == 0.0 ? 0.0 : num1 / gap;
  out.ratio2 = gap == 0.0 ? 0.0 : num2 / gap;
  return out;
}

}  // namespace mrz
