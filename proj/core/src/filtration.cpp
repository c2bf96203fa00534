#include "mrz/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mrz {

namespace {

constexpr double kProbSumTol = 1e-12;

}  // namespace

FiltrationTree::FiltrationTree(std::vector<std::vector<Atom>> levels) {
  if (levels.empty()) {
    throw InvariantError("root-level-single-atom", "tree must have at least level 0");
  }
  if (levels[0].size() != 1) {
    throw InvariantError("root-level-single-atom",
                         "level 0 must contain exactly one atom, got " +
                             std::to_string(levels[0].size()));
  }
  if (levels[0][0].prob != 1.0) {
    throw InvariantError("root-probability-one", "the level-0 atom must have probability 1");
  }
  if (levels[0][0].parent != -1) {
    throw InvariantError("parent-range", "the level-0 atom must have parent -1");
  }
  for (std::size_t n = 0; n < levels.size(); ++n) {
    if (levels[n].empty()) {
      throw InvariantError("level-nonempty", "level " + std::to_string(n) + " has no atoms");
    }
    for (std::size_t i = 0; i < levels[n].size(); ++i) {
      const Atom& a = levels[n][i];
      if (!(a.prob > 0.0) || !std::isfinite(a.prob)) {
        throw InvariantError("positive-probability",
                             "atom (" + std::to_string(n) + "," + std::to_string(i) +
                                 ") has non-positive probability");
      }
      if (n > 0 && (a.parent < 0 || static_cast<std::size_t>(a.parent) >= levels[n - 1].size())) {
        throw InvariantError("parent-range", "atom (" + std::to_string(n) + "," +
                                                 std::to_string(i) + ") has parent out of range");
      }
    }
  }

  auto data = std::make_shared<Data>();
  data->levels = std::move(levels);
  data->children.resize(data->levels.size());
  std::size_t total = 0;
  for (std::size_t n = 0; n < data->levels.size(); ++n) {
    total += data->levels[n].size();
    data->children[n].resize(data->levels[n].size());
    if (n + 1 < data->levels.size()) {
      for (std::size_t i = 0; i < data->levels[n + 1].size(); ++i) {
        data->children[n][data->levels[n + 1][i].parent].push_back(i);
      }
    }
  }
  data->total_atoms = total;

  // Conservation of probability across each split.
  for (std::size_t n = 0; n + 1 < data->levels.size(); ++n) {
    for (std::size_t i = 0; i < data->levels[n].size(); ++i) {
      const auto& kids = data->children[n][i];
      if (kids.empty()) {
        throw InvariantError("children-probability-sum",
                             "atom (" + std::to_string(n) + "," + std::to_string(i) +
                                 ") has no children at the next level");
      }
      double sum = 0.0;
      for (std::size_t c : kids) sum += data->levels[n + 1][c].prob;
      double parent_prob = data->levels[n][i].prob;
      if (std::abs(sum - parent_prob) > kProbSumTol * std::max(1.0, parent_prob)) {
        throw InvariantError("children-probability-sum",
                             "children of atom (" + std::to_string(n) + "," + std::to_string(i) +
                                 ") sum to " + std::to_string(sum) + ", expected " +
                                 std::to_string(parent_prob));
      }
    }
  }

  data_ = std::move(data);
}

FiltrationTree FiltrationTree::trivial() {
  return FiltrationTree({{Atom{1.0, -1}}});
}

RandomVariable::RandomVariable(FiltrationTree tree, int level, std::vector<double> values)
    : tree_(std::move(tree)), level_(level), values_(std::move(values)) {
  if (level_ < 0 || level_ > tree_.depth()) {
    throw std::out_of_range("variable level " + std::to_string(level_) +
                            " outside tree depth " + std::to_string(tree_.depth()));
  }
  if (values_.size() != tree_.width(level_)) {
    throw InvariantError("values-length",
                         "variable at level " + std::to_string(level_) + " must have " +
                             std::to_string(tree_.width(level_)) + " values, got " +
                             std::to_string(values_.size()));
  }
}

RandomVariable RandomVariable::constant(const FiltrationTree& tree, double value) {
  return RandomVariable(tree, 0, {value});
}

RandomVariable RandomVariable::indicator(const FiltrationTree& tree, int level, std::size_t atom) {
  std::vector<double> v(tree.width(level), 0.0);
  v.at(atom) = 1.0;
  return RandomVariable(tree, level, std::move(v));
}

MartingaleProcess::MartingaleProcess(std::vector<RandomVariable> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("martingale process must have at least F_0");
  for (std::size_t n = 0; n < steps_.size(); ++n) {
    if (!steps_[n].tree().same_as(steps_[0].tree())) {
      throw std::invalid_argument("martingale steps live on different trees");
    }
    if (steps_[n].level() != static_cast<int>(n)) {
      throw std::invalid_argument("step " + std::to_string(n) + " is measurable at level " +
                                  std::to_string(steps_[n].level()) + ", expected " +
                                  std::to_string(n));
    }
  }
}

RandomVariable lift(const RandomVariable& f, int level) {
  const FiltrationTree& tree = f.tree();
  if (level < f.level()) throw std::out_of_range("lift target above the variable level");
  if (level > tree.depth()) throw std::out_of_range("lift target exceeds tree depth");
  if (level == f.level()) return f;
  std::vector<double> cur(f.values().begin(), f.values().end());
  for (int n = f.level(); n < level; ++n) {
    const auto& next_atoms = tree.atoms(n + 1);
    std::vector<double> next(next_atoms.size());
    for (std::size_t i = 0; i < next_atoms.size(); ++i) next[i] = cur[next_atoms[i].parent];
    cur = std::move(next);
  }
  return RandomVariable(tree, level, std::move(cur));
}

RandomVariable condition(const RandomVariable& f, int level) {
  const FiltrationTree& tree = f.tree();
  if (level < 0 || level > tree.depth()) {
    throw std::out_of_range("conditioning level " + std::to_string(level) +
                            " outside tree depth " + std::to_string(tree.depth()));
  }
  if (level >= f.level()) return lift(f, level);

  // Push probability mass up the tree, then renormalize at the target level.
  std::vector<double> mass(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mass[i] = f[i] * tree.prob(f.level(), i);
  for (int n = f.level(); n > level; --n) {
    const auto& atoms = tree.atoms(n);
    std::vector<double> up(tree.width(n - 1), 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i) up[atoms[i].parent] += mass[i];
    mass = std::move(up);
  }
  std::vector<double> vals(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) vals[i] = mass[i] / tree.prob(level, i);
  return RandomVariable(tree, level, std::move(vals));
}

std::vector<RandomVariable> conditional_ladder(const RandomVariable& f) {
  const FiltrationTree& tree = f.tree();
  const int top = f.level();
  std::vector<std::vector<double>> values(top + 1);
  std::vector<double> mass(f.size());
  values[top].assign(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < f.size(); ++i) mass[i] = f[i] * tree.prob(top, i);
  for (int n = top; n > 0; --n) {
    const auto& atoms = tree.atoms(n);
    std::vector<double> up(tree.width(n - 1), 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i) up[atoms[i].parent] += mass[i];
    mass = std::move(up);
    values[n - 1].resize(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) values[n - 1][i] = mass[i] / tree.prob(n - 1, i);
  }
  std::vector<RandomVariable> ladder;
  ladder.reserve(top + 1);
  for (int n = 0; n <= top; ++n) ladder.emplace_back(tree, n, std::move(values[n]));
  return ladder;
}

RandomVariable multiply(const RandomVariable& f, int level, double alpha) {
  const FiltrationTree& tree = f.tree();
  if (level < 0 || level > tree.depth()) {
    throw std::out_of_range("multiplier level " + std::to_string(level) + " outside tree depth " +
                            std::to_string(tree.depth()));
  }
  const int target = std::max(f.level(), level);
  RandomVariable g = lift(f, target);

  // Probability of the level-`level` ancestor of each atom at `target`.
  std::vector<double> base(tree.width(level));
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = tree.prob(level, i);
  for (int n = level; n < target; ++n) {
    const auto& next_atoms = tree.atoms(n + 1);
    std::vector<double> next(next_atoms.size());
    for (std::size_t i = 0; i < next_atoms.size(); ++i) next[i] = base[next_atoms[i].parent];
    base = std::move(next);
  }

  std::vector<double> vals(g.values().begin(), g.values().end());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= std::pow(base[i], alpha);
  return RandomVariable(tree, target, std::move(vals));
}

double inner_product(const RandomVariable& f, const RandomVariable& g) {
  if (!f.tree().same_as(g.tree())) {
    throw std::invalid_argument("inner product of variables on different trees");
  }
  const int level = std::max(f.level(), g.level());
  RandomVariable a = lift(f, level);
  RandomVariable b = lift(g, level);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i] * f.tree().prob(level, i);
  return sum;
}

MartingaleProcess martingale_from(const RandomVariable& f) {
  return MartingaleProcess(conditional_ladder(lift(f, f.tree().depth())));
}

RandomVariable maximal_function(const MartingaleProcess& m) {
  const FiltrationTree& tree = m.tree();
  const int top = m.length();
  std::vector<double> cur(m.step(0).size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = std::abs(m.step(0)[i]);
  for (int n = 1; n <= top; ++n) {
    const auto& atoms = tree.atoms(n);
    const RandomVariable& fn = m.step(n);
    std::vector<double> next(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      next[i] = std::max(cur[atoms[i].parent], std::abs(fn[i]));
    }
    cur = std::move(next);
  }
  return RandomVariable(tree, top, std::move(cur));
}

double lp_norm_pow(const RandomVariable& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm requires p >= 1");
  const FiltrationTree& tree = f.tree();
  double sum = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < f.size(); ++i) sum += std::abs(f[i]) * tree.prob(f.level(), i);
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) {
      sum += std::pow(std::abs(f[i]), p) * tree.prob(f.level(), i);
    }
  }
  return sum;
}

double lp_norm(const RandomVariable& f, double p) {
  const double sum = lp_norm_pow(f, p);
  return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
}

double h1_norm(const MartingaleProcess& m) { return lp_norm(maximal_function(m), 1.0); }

double bmo_norm(const MartingaleProcess& m) {
  const FiltrationTree& tree = m.tree();
  const int top = m.length();
  const RandomVariable& terminal = m.terminal();

  // One upward sweep accumulating first and second conditional moments.
  std::vector<double> m1(terminal.size()), m2(terminal.size());
  for (std::size_t i = 0; i < terminal.size(); ++i) {
    const double prob = tree.prob(top, i);
    m1[i] = terminal[i] * prob;
    m2[i] = terminal[i] * terminal[i] * prob;
  }
  double best = 0.0;
  for (int n = top; n >= 0; --n) {
    for (std::size_t i = 0; i < tree.width(n); ++i) {
      const double prob = tree.prob(n, i);
      const double mean = m1[i] / prob;
      const double var = std::max(0.0, m2[i] / prob - mean * mean);
      best = std::max(best, var);
    }
    if (n == 0) break;
    const auto& atoms = tree.atoms(n);
    std::vector<double> u1(tree.width(n - 1), 0.0), u2(tree.width(n - 1), 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      u1[atoms[i].parent] += m1[i];
      u2[atoms[i].parent] += m2[i];
    }
    m1 = std::move(u1);
    m2 = std::move(u2);
  }
  return std::sqrt(best);
}

double max_rel_deviation(const RandomVariable& a, const RandomVariable& b) {
  if (!a.tree().same_as(b.tree())) {
    throw std::invalid_argument("deviation of variables on different trees");
  }
  const int level = std::max(a.level(), b.level());
  const RandomVariable u = lift(a, level);
  const RandomVariable v = lift(b, level);
  double scale = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    scale = std::max({scale, std::abs(u[i]), std::abs(v[i])});
  }
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, std::abs(u[i] - v[i]) / scale);
  }
  return worst;
}

double max_abs_deviation(const RandomVariable& a, const RandomVariable& b) {
  if (!a.tree().same_as(b.tree())) {
    throw std::invalid_argument("deviation of variables on different trees");
  }
  const int level = std::max(a.level(), b.level());
  const RandomVariable u = lift(a, level);
  const RandomVariable v = lift(b, level);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, std::abs(u[i] - v[i]));
  }
  return worst;
}

double sup_norm(const RandomVariable& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f[i]));
  return best;
}

double tower_gap(const MartingaleProcess& m) {
  double worst = 0.0;
  for (int n = 1; n <= m.length(); ++n) {
    RandomVariable back = condition(m.step(n), n - 1);
    const RandomVariable& expected = m.step(n - 1);
    double scale = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) {
      scale = std::max({scale, std::abs(back[i]), std::abs(expected[i])});
    }
    if (scale == 0.0) continue;
    for (std::size_t i = 0; i < back.size(); ++i) {
      worst = std::max(worst, std::abs(back[i] - expected[i]) / scale);
    }
  }
  return worst;
}

Params Params::lp_to_lq(double p, double q) {
  if (!(p > 1.0) || !(q > p) || !std::isfinite(q)) {
    throw std::invalid_argument("the L_p -> L_q regime requires 1 < p < q < inf");
  }
  Params out;
  out.p = p;
  out.q = q;
  out.alpha = 1.0 / p - 1.0 / q;
  return out;
}

Params Params::lr_to_bmo(double r) {
  if (!(r > 1.0) || !std::isfinite(r)) {
    throw std::invalid_argument("the BMO regime requires 1 < r < inf");
  }
  Params out;
  out.p = r;
  out.r = r;
  out.alpha = 1.0 / r;
  return out;
}

Params Params::h1_to_lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("the H_1 -> L_p regime requires 1 < p < inf");
  }
  Params out;
  out.p = p;
  out.alpha = 1.0 - 1.0 / p;  // = 1/p'
  return out;
}

Params Params::numerical(double p, double mu) {
  if (!(p > 1.0) || !(mu > 0.0)) {
    throw std::invalid_argument("the sequence inequality requires p > 1 and mu > 0");
  }
  Params out;
  out.p = p;
  out.mu = mu;
  out.alpha = 1.0 - 1.0 / p;
  return out;
}

}  // namespace mrz
