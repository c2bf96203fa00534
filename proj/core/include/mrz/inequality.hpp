#ifndef MRZ_INEQUALITY_HPP
#define MRZ_INEQUALITY_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrz/filtration.hpp"
#include "mrz/rng.hpp"

namespace mrz {

// Abstract instance of the sequence inequality: four nonnegative sequences
// subject to
//   (1) sum p_j = 1
//   (2) y_j >= x_j
//   (3) (1 - p_j) x_j <= 2 sum_{k != j} x_k            (non-singularity)
//   (4) A_j <= x_j (1 - p_j)
//            + p_j^(1/p) (sum_{k != j} x_k^p)^(1/p) (1 - p_j)^(1/p')
struct InequalityInstance {
  double p = 2.0;
  double mu = 1.0;
  std::vector<double> p_j, x_j, y_j, A_j;

  std::size_t size() const { return p_j.size(); }
};

// Name of the first violated condition, or empty when the instance is valid.
std::string validate_instance(const InequalityInstance& inst);

// Validating constructor; throws InvariantError naming the violated condition.
InequalityInstance make_instance(double p, double mu, std::vector<double> p_j,
                                 std::vector<double> x_j, std::vector<double> y_j,
                                 std::vector<double> A_j);

struct NumineqEval {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Evaluates  mu sum A_j^p + mu C^((p-1)/p) sum A_j y_j^(p-1)
//        <=  C ((sum y_j)^p - sum y_j^p)
// exactly as written; holds iff lhs <= rhs up to relative 1e-12.
NumineqEval check_numineq(const InequalityInstance& inst, double C);

// Smallest C for which the inequality holds, by doubling then bisection to
// relative 1e-6. Returns +inf when no C works (a degenerate right-hand side
// with nonzero left-hand side, impossible for valid instances).
double min_constant_for(const InequalityInstance& inst);

// Random condition-satisfying instance. s is uniform in [1, max_s]; p_j are
// normalized exponential draws; x_j exponential draws with the single
// possible non-singularity violator rescaled down to its cap; y_j inflate
// x_j by nonnegative noise; A_j sit uniformly below their condition-4 caps.
// Half of the draws pin y_j = x_j exactly and half pin A_j at the cap, which
// concentrates sampling where the inequality is tight.
InequalityInstance random_instance(SplitMix64& rng, double p, double mu, std::size_t max_s = 64);

// Randomized-search configuration shared by the fuzzers and the operator-norm
// estimator. All counts must be positive.
struct SearchConfig {
  std::uint64_t seed = 1;
  long trials = 1000;       // corpus size / restarts
  int climb_steps = 0;      // hill-climbing moves per restart (norm search)
  double step = 0.5;        // log-scale multiplicative perturbation size
  int min_depth = 1;
  int max_depth = 5;
  int max_branch = 4;
  std::size_t max_s = 64;   // sequence length bound for instance corpora
  std::size_t max_atoms = 4096;
  int threads = 0;          // 0 = MRZ_THREADS env or hardware concurrency
};

struct MinConstantResult {
  double min_c = 0.0;   // supremum of per-instance minimal constants
  double mean_c = 0.0;
  double probe_c = 0.0; // deterministic extremal-family share of min_c
  long worst_trial = -1;
  long violations = 0;  // instances with no admissible constant (expected 0)
};

// Deterministic hill climb over the low-dimensional extremal family (short
// sequences, y inflations free, A pinned to its cap). Independent of any
// corpus seed, so repeated runs agree exactly. Sequences longer than max_s
// are never probed.
double extremal_constant_probe(double p, double mu, std::size_t max_s = 4);

// Supremum of per-instance minimal constants over a random corpus combined
// with the deterministic extremal probe; an empirical lower estimate of the
// constant in the sequence inequality. The probe anchors the max statistic,
// which would otherwise wander with the corpus seed. Optional sink receives
// (trial, s, min_c) rows in trial order.
MinConstantResult min_constant(double p, double mu, const SearchConfig& cfg,
                               const std::function<void(long, std::size_t, double)>& row_sink = {});

struct NonsingGap {
  double lhs = 0.0;   // (sum x)^p - sum x^p
  double rhs = 0.0;   // (1 - p_max) x_max^p + (sum of the rest)^p
  double ratio = 0.0; // lhs / rhs, 0 when both vanish
};

// Two sides of the non-singularity gap bound. The coordinate carrying the
// largest probability is singled out internally. Requires the x_j to satisfy
// the non-singularity condition. The implied constant is only estimated
// empirically (corpus maxima of rhs/lhs); in the flat regime the attainable
// lhs shrinks like 1 - (4/5)^(p-1), so the inverse ratio grows sharply as p
// approaches 1.
NonsingGap nonsing_gap(std::span<const double> x, std::span<const double> p_j, double p);

// Reduces the single maximal y_k to max(x_k, (sum of the others)/2) when that
// is smaller; afterwards the y-sequence satisfies the non-singularity
// condition. Never increases a coordinate and never breaks y_j >= x_j.
InequalityInstance reduce_to_nonsingular(const InequalityInstance& inst);

struct SplitRatios {
  double ratio1 = 0.0;  // sum A_j^p           / ((sum y)^p - sum y^p)
  double ratio2 = 0.0;  // sum A_j y_j^(p-1)   / ((sum y)^p - sum y^p)
};

// Ratios of the two split inequalities in the reduced case; requires
// x_j == y_j exactly. 0/0 is reported as 0.
SplitRatios check_split_inequalities(const InequalityInstance& inst);

}  // namespace mrz

#endif  // MRZ_INEQUALITY_HPP
