#ifndef MRZ_RIESZ_HPP
#define MRZ_RIESZ_HPP

#include <vector>

#include "mrz/filtration.hpp"

namespace mrz {

// Result of evaluating a potential up to a finite horizon N.
// `value` is the full sum at the horizon level. When requested, `partials[n]`
// is the sum of the first n terms, measurable (and stored) at level n;
// partials[0] is identically zero. For the conjugate potential the partial
// sums coincide with the conditionings of the full value:
//   partials[n] == condition(value, n).
struct RieszResult {
  RandomVariable value;
  std::vector<RandomVariable> partials;
};

// Riesz potential: sum over n = 1..horizon of M_n (E_n - E_{n-1}) f.
// Requires horizon <= tree depth. Terms beyond f.level() vanish.
RieszResult riesz(const RandomVariable& f, double alpha, int horizon,
                  bool with_partials = false);

// Formally conjugate potential: sum over n = 1..horizon of (E_n - E_{n-1}) M_n f.
// Term n evaluated with F_n in place of f (the two agree term by term).
RieszResult conj_riesz(const RandomVariable& f, double alpha, int horizon,
                       bool with_partials = false);

// |E((I_a f) g) - E(f (I'_a g))|; zero in exact arithmetic.
double duality_gap(const RandomVariable& f, const RandomVariable& g, double alpha, int horizon);

}  // namespace mrz

#endif  // MRZ_RIESZ_HPP
