#include "mrz/random_tree.hpp"

#include <stdexcept>

namespace mrz {

FiltrationTree random_tree(SplitMix64& rng, int depth, int max_branch, std::size_t max_atoms) {
  if (depth < 0) throw std::invalid_argument("tree depth must be nonnegative");
  if (max_branch < 1) throw std::invalid_argument("max branching must be at least 1");

  std::vector<std::vector<Atom>> levels;
  levels.push_back({Atom{1.0, -1}});
  for (int n = 0; n < depth; ++n) {
    const auto& prev = levels.back();
    std::vector<Atom> next;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      std::size_t branches = 1 + rng.next_below(static_cast<std::uint64_t>(max_branch));
      // Size cap: remaining parents still need one child each.
      if (next.size() + branches + (prev.size() - i - 1) > max_atoms) branches = 1;
      if (branches == 1) {
        next.push_back(Atom{prev[i].prob, static_cast<int>(i)});
        continue;
      }
      std::vector<double> draws(branches);
      double total = 0.0;
      for (double& d : draws) {
        d = rng.next_exponential();
        total += d;
      }
      for (std::size_t b = 0; b < branches; ++b) {
        next.push_back(Atom{prev[i].prob * (draws[b] / total), static_cast<int>(i)});
      }
    }
    levels.push_back(std::move(next));
  }
  return FiltrationTree(std::move(levels));
}

RandomVariable random_variable(SplitMix64& rng, const FiltrationTree& tree, int level,
                               double scale) {
  std::vector<double> values(tree.width(level));
  for (double& v : values) v = rng.next_uniform(-scale, scale);
  return RandomVariable(tree, level, std::move(values));
}

}  // namespace mrz
