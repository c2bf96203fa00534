#ifndef MRZ_RANDOM_TREE_HPP
#define MRZ_RANDOM_TREE_HPP

#include "mrz/filtration.hpp"
#include "mrz/rng.hpp"

namespace mrz {

// Random filtration tree of exactly `depth` steps. Each atom splits into a
// uniform number of children in [1, max_branch]; child probabilities are the
// parent probability distributed by normalized exponential draws. Atoms stop
// splitting once the tree holds `max_atoms` leaves, which keeps deep trees
// bounded without breaking determinism. Fully determined by the rng state.
FiltrationTree random_tree(SplitMix64& rng, int depth, int max_branch,
                           std::size_t max_atoms = 4096);

// Uniform values in [-scale, scale] at the given level.
RandomVariable random_variable(SplitMix64& rng, const FiltrationTree& tree, int level,
                               double scale = 1.0);

}  // namespace mrz

#endif  // MRZ_RANDOM_TREE_HPP
