#ifndef MRZ_NORM_SEARCH_HPP
#define MRZ_NORM_SEARCH_HPP

#include <vector>

#include "mrz/filtration.hpp"
#include "mrz/inequality.hpp"

namespace mrz {

// What the randomized search maximizes:
//   lp_to_lq:      |I_a f|_q / |f|_p          with alpha = 1/p - 1/q
//   lr_to_bmo:     |I_a f|_BMO / |f|_r        with alpha = 1/r
//   h1_to_lp:      |I'_a f|_p / |f*|_1        with alpha = 1/p'
//   chain_l1:      |I'_a F|_p^p / |F|_1^p     with alpha = 1/p'
// The first three sample random trees and hill-climb the variable with
// coordinate-wise multiplicative perturbations; every estimate is a lower
// bound on the corresponding operator norm. chain_l1 samples keep-or-halve
// chains carrying their canonical unit-L_1 martingales and reports the
// divergence functional (the p-th power of the norm ratio), the quantity
// whose growth in depth witnesses unboundedness into L_infinity.
enum class NormMode { lp_to_lq, lr_to_bmo, h1_to_lp, chain_l1 };

struct NormTraceRow {
  long trial = 0;
  double ratio = 0.0;  // best ratio reached within this restart
  double best = 0.0;   // running maximum after this restart
};

struct NormEstimate {
  double estimate = 0.0;
  long evaluations = 0;
  long best_trial = -1;
  std::vector<NormTraceRow> trace;
};

// Deterministic given cfg.seed; the estimate is a running maximum over
// restarts, so it is nondecreasing in cfg.trials for a fixed seed.
NormEstimate estimate_operator_norm(NormMode mode, const Params& params,
                                    const SearchConfig& cfg);

}  // namespace mrz

#endif  // MRZ_NORM_SEARCH_HPP
