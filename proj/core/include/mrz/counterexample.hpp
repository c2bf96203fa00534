#ifndef MRZ_COUNTEREXAMPLE_HPP
#define MRZ_COUNTEREXAMPLE_HPP

#include <string>
#include <vector>

#include "mrz/filtration.hpp"

namespace mrz {

// Nested chain of atoms a_0 = whole space, a_1, a_2, ... with probabilities
// d_n. At every step the chain atom either stays whole (d_{n+1} = d_n) or
// splits off a sibling, in which case it must lose at least half its mass
// (d_{n+1} <= d_n / 2). The canonical instance is the dyadic chain
// d_n = 2^-n.
struct ChainSpec {
  std::vector<double> d;  // d[0] == 1

  int depth() const { return static_cast<int>(d.size()) - 1; }
  static ChainSpec dyadic(int depth);
};

// Name of the first violated chain rule, or empty when valid. Rules:
// starts-at-one, positive-probability, keep-or-halve, probability-underflow
// (d_n must stay above 2^-500 so p-th powers remain representable).
std::string validate_chain(const ChainSpec& spec);

// Tree whose level n holds the chain atom a_n followed by every sibling
// frozen at an earlier split, in birth order. Throws InvariantError when the
// spec violates a chain rule.
FiltrationTree build_chain(const ChainSpec& spec);

// The martingale F_n = d_n^{-1} 1_{a_n}; every step has unit L_1 norm.
MartingaleProcess chain_martingale(const FiltrationTree& tree, const ChainSpec& spec);

// One point per truncation horizon n: the p-th power of the L_p norm of the
// truncated conjugate potential, evaluated both through the operator and
// through the closed form
//   sum_{l<n} (d_l^{-1/p} - d_{l+1}^{1/p'} / d_l) 1_{a_l}  +  d_n^{-1/p} 1_{a_n}  -  1.
struct GrowthPoint {
  int n = 0;
  double norm_p_pow = 0.0;
  double closed_form_pow = 0.0;
};

struct GrowthCurve {
  double p = 2.0;
  double alpha = 0.5;           // 1/p'
  int k_threshold = -1;         // first split step where (1 - 2^{-1/p'}) d_n^{-1/p} > 2
  std::vector<GrowthPoint> points;  // n = 1 .. depth
};

// Evaluates the truncations of the conjugate potential of the chain
// martingale with alpha = 1/p'. Throws InvariantError when operator and
// closed-form evaluations disagree beyond relative 1e-9.
GrowthCurve growth_curve(const ChainSpec& spec, double p);

// Per-step closed-form coefficient d_n^{-1/p} - d_{n+1}^{1/p'} / d_n.
double chain_coefficient(const ChainSpec& spec, int n, double p);

// Least-squares slope of (n, value) pairs.
double fitted_slope(const std::vector<GrowthPoint>& points, int n_min, int n_max);

}  // namespace mrz

#endif  // MRZ_COUNTEREXAMPLE_HPP
