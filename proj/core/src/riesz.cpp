#include "mrz/riesz.hpp"

#include <cmath>
#include <stdexcept>

namespace mrz {

namespace {

enum class Flavor { plain, conjugate };

// Shared driver: both potentials are accumulated level by level in a single
// downward pass, so partial sums come out for free.
RieszResult evaluate(const RandomVariable& f, double alpha, int horizon, bool with_partials,
                     Flavor flavor) {
  const FiltrationTree& tree = f.tree();
  if (horizon < 0 || horizon > tree.depth()) {
    throw std::out_of_range("horizon " + std::to_string(horizon) + " exceeds tree depth " +
                            std::to_string(tree.depth()));
  }

  const std::vector<RandomVariable> ladder = conditional_ladder(f);
  const int active = std::min(horizon, f.level());

  std::vector<double> running(1, 0.0);  // partial sum, currently at level 0
  RieszResult out{RandomVariable(tree, 0, {0.0}), {}};
  if (with_partials) {
    out.partials.reserve(horizon + 1);
    out.partials.push_back(RandomVariable(tree, 0, {0.0}));
  }

  for (int n = 1; n <= horizon; ++n) {
    const auto& atoms = tree.atoms(n);
    // Lift the running sum one level down the tree.
    std::vector<double> next(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) next[i] = running[atoms[i].parent];
    running = std::move(next);

    if (n <= active) {
      const RandomVariable& fn = ladder[n];
      const RandomVariable& fprev = ladder[n - 1];
      if (flavor == Flavor::plain) {
        // M_n (F_n - F_{n-1})
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          const double diff = fn[i] - fprev[atoms[i].parent];
          running[i] += std::pow(atoms[i].prob, alpha) * diff;
        }
      } else {
        // (E_n - E_{n-1}) M_n F_n; the level-(n-1) average is a mass sum.
        std::vector<double> weighted(atoms.size());
        std::vector<double> up(tree.width(n - 1), 0.0);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          weighted[i] = std::pow(atoms[i].prob, alpha) * fn[i];
          up[atoms[i].parent] += weighted[i] * atoms[i].prob;
        }
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          const int par = atoms[i].parent;
          running[i] += weighted[i] - up[par] / tree.prob(n - 1, par);
        }
      }
    }
    if (with_partials) out.partials.push_back(RandomVariable(tree, n, running));
  }

  out.value = RandomVariable(tree, horizon, std::move(running));
  return out;
}

}  // namespace

RieszResult riesz(const RandomVariable& f, double alpha, int horizon, bool with_partials) {
  return evaluate(f, alpha, horizon, with_partials, Flavor::plain);
}

RieszResult conj_riesz(const RandomVariable& f, double alpha, int horizon, bool with_partials) {
  return evaluate(f, alpha, horizon, with_partials, Flavor::conjugate);
}

double duality_gap(const RandomVariable& f, const RandomVariable& g, double alpha, int horizon) {
  if (!f.tree().same_as(g.tree())) {
    throw std::invalid_argument("duality gap of variables on different trees");
  }
  const double lhs = inner_product(riesz(f, alpha, horizon).value, g);
  const double rhs = inner_product(f, conj_riesz(g, alpha, horizon).value);
  return std::abs(lhs - rhs);
}

}  // namespace mrz
