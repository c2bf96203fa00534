#ifndef MRZ_SINGLE_STEP_HPP
#define MRZ_SINGLE_STEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "mrz/filtration.hpp"

namespace mrz {

// First-step decomposition of a martingale: the four per-atom sequences
// p_j, x_j, y_j, A_j together with the split of the conjugate potential into
// its first summand A and the tail B. A and B are stored as nonnegative
// magnitudes plus per-point signs so the pointwise recombination
//   conj = a_sign * A + b_sign * B
// stays checkable.
struct SingleStepData {
  double alpha = 0.5;  // multiplier exponent; p = 1 / (1 - alpha)
  double p = 2.0;
  std::size_t s = 0;  // number of first-level atoms
  double fbar = 0.0;  // F_0

  std::vector<double> p_j;  // atom probabilities, sum to 1
  std::vector<double> f_j;  // values of F_1
  std::vector<double> x_j;  // p_j * max(|f_j|, |fbar|): one-step maximal mass
  std::vector<double> y_j;  // integral of the full maximal function over a_j
  std::vector<double> A_j;  // p_j^(1/p) * (value of A on a_j)

  RandomVariable terminal;  // the generating variable, lifted to the deepest level
  RandomVariable A;         // |first summand|, level 1
  RandomVariable a_sign;    // +-1, level 1
  RandomVariable B;         // |tail|, deepest level
  RandomVariable b_sign;    // +-1, deepest level
  RandomVariable conj;      // full conjugate potential, deepest level
};

// Decomposes the martingale generated by f. The exponent p is derived from
// alpha via alpha = 1/p', so alpha must lie in (0, 1). The comparison inside
// x_j is taken against the mean value F_0 (the one-step maximal function).
SingleStepData decompose(const RandomVariable& f, double alpha);

struct ConditionReport {
  std::string condition;
  double worst_slack = 0.0;  // min over j of rhs - lhs; negative means violated
  std::vector<std::size_t> violations;

  bool passed() const { return violations.empty(); }
  std::string to_json() const;
};

// (1 - p_j) x_j <= 2 sum_{k != j} x_k for every j.
ConditionReport check_nonsingularity(const SingleStepData& d);

// A_j <= x_j (1 - p_j) + p_j^(1/p) (sum_{k != j} x_k^p)^(1/p) (1 - p_j)^(1/p').
ConditionReport check_A_bound(const SingleStepData& d);

// Conditional subspace below a first-level atom: probabilities rescaled by
// 1/p_j, levels shifted down by one. atom_map[m][i] is the original index at
// level m+1 of subtree atom (m, i).
struct ConditionalSubtree {
  FiltrationTree tree;
  std::vector<std::vector<std::size_t>> atom_map;
};

ConditionalSubtree conditional_subtree(const FiltrationTree& tree, std::size_t level1_atom);

// Restriction of a deepest-level variable to the subtree's deepest level.
RandomVariable restrict_to_subtree(const RandomVariable& f, const ConditionalSubtree& sub);

struct TailBoundReport {
  // Signed tail restricted to a_j versus p_j^(1/p') times the conjugate
  // potential of the conditional martingale on the rescaled subtree.
  double identity_gap = 0.0;  // max relative deviation over all atoms/points
  bool identity_ok = false;   // identity_gap <= 1e-10

  std::vector<double> tail_integral;  // per atom: integral of B^p over a_j
  double worst_ratio = 0.0;           // max_j tail_integral[j] / y_j^p (0/0 -> 0)

  std::optional<double> constant;  // the C that was checked, if any
  std::vector<std::size_t> bound_violations;
  bool bound_ok = true;  // tail_integral[j] <= C y_j^p for all j
};

TailBoundReport check_b_bound(const SingleStepData& d, std::optional<double> C = std::nullopt);

}  // namespace mrz

#endif  // MRZ_SINGLE_STEP_HPP
