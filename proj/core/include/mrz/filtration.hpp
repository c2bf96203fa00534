#ifndef MRZ_FILTRATION_HPP
#define MRZ_FILTRATION_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrz {

// Thrown when a structural invariant of a tree, variable or instance is
// violated. `invariant()` names the first violated rule, which the CLI
// surfaces verbatim.
class InvariantError : public std::runtime_error {
 public:
  InvariantError(std::string invariant, const std::string& message)
      : std::runtime_error(message), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

struct Atom {
  double prob = 0.0;
  int parent = -1;  // index into the previous level; -1 for the root
};

// A finite filtration represented as a rooted tree of atoms. Level n holds
// the atoms generating the n-th sigma-algebra; level 0 is the whole space.
// Immutable after construction; copies share the underlying storage, so
// values may be passed around and across threads freely.
class FiltrationTree {
 public:
  // Validates on construction and throws InvariantError naming the first
  // violated rule. Required structure:
  //   - level 0 is a single atom of probability 1 with parent -1
  //   - every probability is strictly positive
  //   - parents index the previous level
  //   - children probabilities sum to the parent probability (rel. 1e-12)
  explicit FiltrationTree(std::vector<std::vector<Atom>> levels);

  // Depth-0 tree: just the whole space.
  static FiltrationTree trivial();

  int depth() const noexcept { return static_cast<int>(data_->levels.size()) - 1; }
  std::size_t width(int level) const { return data_->levels.at(level).size(); }
  const std::vector<Atom>& atoms(int level) const { return data_->levels.at(level); }
  double prob(int level, std::size_t atom) const { return data_->levels.at(level).at(atom).prob; }
  int parent(int level, std::size_t atom) const { return data_->levels.at(level).at(atom).parent; }

  // Children of (level, atom) at level + 1; empty at the deepest level.
  const std::vector<std::size_t>& children(int level, std::size_t atom) const {
    return data_->children.at(level).at(atom);
  }

  std::size_t total_atoms() const noexcept { return data_->total_atoms; }

  const std::vector<std::vector<Atom>>& levels() const noexcept { return data_->levels; }

  // Identity of the underlying storage. Operations on two variables require
  // them to live on the same tree object.
  bool same_as(const FiltrationTree& other) const noexcept { return data_ == other.data_; }

 private:
  struct Data {
    std::vector<std::vector<Atom>> levels;
    std::vector<std::vector<std::vector<std::size_t>>> children;
    std::size_t total_atoms = 0;
  };
  std::shared_ptr<const Data> data_;
};

// A random variable measurable with respect to the level-`level` algebra:
// one value per atom at that level.
class RandomVariable {
 public:
  RandomVariable(FiltrationTree tree, int level, std::vector<double> values);

  static RandomVariable constant(const FiltrationTree& tree, double value);
  static RandomVariable indicator(const FiltrationTree& tree, int level, std::size_t atom);

  const FiltrationTree& tree() const noexcept { return tree_; }
  int level() const noexcept { return level_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_.at(i); }
  std::size_t size() const noexcept { return values_.size(); }

  // In-place access for construction helpers; the library treats finished
  // variables as immutable.
  std::vector<double>& mutable_values() noexcept { return values_; }

 private:
  FiltrationTree tree_;
  int level_;
  std::vector<double> values_;
};

// The sequence F_0, ..., F_N of conditionings of a terminal variable, with
// F_n measurable at level n.
class MartingaleProcess {
 public:
  explicit MartingaleProcess(std::vector<RandomVariable> steps);

  int length() const noexcept { return static_cast<int>(steps_.size()) - 1; }
  const RandomVariable& step(int n) const { return steps_.at(n); }
  const RandomVariable& terminal() const { return steps_.back(); }
  const FiltrationTree& tree() const noexcept { return steps_.front().tree(); }
  const std::vector<RandomVariable>& steps() const noexcept { return steps_; }

 private:
  std::vector<RandomVariable> steps_;
};

// Canonical embedding of a variable into a deeper level: each descendant
// atom inherits the ancestor value. `level` must be >= f.level().
RandomVariable lift(const RandomVariable& f, int level);

// Conditional expectation with respect to the level-`level` algebra. For
// level >= f.level() this is the lift.
RandomVariable condition(const RandomVariable& f, int level);

// All conditionings E_0 f .. E_L f (L = f.level()), one upward sweep.
std::vector<RandomVariable> conditional_ladder(const RandomVariable& f);

// Multiplication by b_n^alpha where b_n(w) is the probability of the level-n
// atom containing w. The input is lifted to max(f.level(), level) first.
RandomVariable multiply(const RandomVariable& f, int level, double alpha);

// E(f g); both variables are lifted to a common level. Throws on mismatched
// trees.
double inner_product(const RandomVariable& f, const RandomVariable& g);

// Martingale generated by conditioning f on every level of its tree.
MartingaleProcess martingale_from(const RandomVariable& f);

// Pointwise sup over n of |F_n|, expressed at the deepest level of the tree.
RandomVariable maximal_function(const MartingaleProcess& m);

// (sum |v|^p prob)^(1/p); requires p >= 1.
double lp_norm(const RandomVariable& f, double p);

// sum |v|^p prob without the final root; avoids a pow round-trip when the
// p-th power itself is wanted.
double lp_norm_pow(const RandomVariable& f, double p);

// L_1 norm of the maximal function.
double h1_norm(const MartingaleProcess& m);

// sup over levels n and atoms a of the conditional standard deviation of the
// terminal variable given a.
double bmo_norm(const MartingaleProcess& m);

// Largest relative violation of E_{n-1} F_n = F_{n-1} over all steps.
double tower_gap(const MartingaleProcess& m);

// Largest pointwise deviation after lifting both variables to a common
// level, relative to the larger sup norm; zero when both vanish.
double max_rel_deviation(const RandomVariable& a, const RandomVariable& b);

// Largest absolute pointwise deviation after lifting to a common level.
// Identity checks divide this by the scale of the operands rather than of
// the compared results, which may cancel to rounding noise.
double max_abs_deviation(const RandomVariable& a, const RandomVariable& b);

double sup_norm(const RandomVariable& f);

// Exponent bundle shared by the operators and the inequality lab.
// p is the primary integrability exponent; alpha the multiplier exponent.
struct Params {
  double p = 2.0;
  double mu = 1.0;
  double alpha = 0.5;
  std::optional<double> q;  // target exponent for the L_p -> L_q regime
  std::optional<double> r;  // source exponent for the BMO regime

  double p_prime() const { return p / (p - 1.0); }

  // L_p -> L_q regime: requires 1 < p < q, sets alpha = 1/p - 1/q.
  static Params lp_to_lq(double p, double q);
  // L_r -> BMO regime: requires r > 1, sets alpha = 1/r.
  static Params lr_to_bmo(double r);
  // H_1 -> L_p regime of the conjugate operator: requires p > 1,
  // sets alpha = 1/p'.
  static Params h1_to_lp(double p);
  // Abstract sequence-inequality regime: requires p > 1, mu > 0.
  static Params numerical(double p, double mu);
};

}  // namespace mrz

#endif  // MRZ_FILTRATION_HPP
