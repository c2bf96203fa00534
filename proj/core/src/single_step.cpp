#include "mrz/single_step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mrz/riesz.hpp"

namespace mrz {

namespace {

constexpr double kConditionTol = 1e-12;
constexpr double kIdentityTol = 1e-10;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

SingleStepData decompose(const RandomVariable& f, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("decompose requires alpha in (0, 1)");
  }
  const FiltrationTree& tree = f.tree();
  if (tree.depth() < 1) throw std::invalid_argument("decompose requires tree depth >= 1");

  const double p = 1.0 / (1.0 - alpha);
  const int top = tree.depth();
  RandomVariable fN = lift(f, top);
  const MartingaleProcess m = martingale_from(fN);

  SingleStepData d{alpha,
                   p,
                   tree.width(1),
                   m.step(0)[0],
                   {},
                   {},
                   {},
                   {},
                   {},
                   fN,
                   RandomVariable(tree, 0, {0.0}),
                   RandomVariable(tree, 0, {0.0}),
                   RandomVariable(tree, 0, {0.0}),
                   RandomVariable(tree, 0, {0.0}),
                   RandomVariable(tree, 0, {0.0})};

  const RandomVariable& f1 = m.step(1);
  d.p_j.resize(d.s);
  d.f_j.resize(d.s);
  d.x_j.resize(d.s);
  for (std::size_t j = 0; j < d.s; ++j) {
    d.p_j[j] = tree.prob(1, j);
    d.f_j[j] = f1[j];
    d.x_j[j] = d.p_j[j] * std::max(std::abs(d.f_j[j]), std::abs(d.fbar));
  }

  // y_j: mass of the maximal function over each first-level atom.
  const RandomVariable fstar = maximal_function(m);
  RandomVariable fstar1 = condition(fstar, 1);
  d.y_j.resize(d.s);
  for (std::size_t j = 0; j < d.s; ++j) d.y_j[j] = fstar1[j] * d.p_j[j];

  // Split of the conjugate potential into first summand and tail.
  RieszResult full = conj_riesz(fN, alpha, top, /*with_partials=*/true);
  const RandomVariable& first = full.partials[1];  // level 1

  std::vector<double> a_mag(d.s), a_sgn(d.s);
  for (std::size_t j = 0; j < d.s; ++j) {
    a_mag[j] = std::abs(first[j]);
    a_sgn[j] = sign_of(first[j]);
  }
  d.A = RandomVariable(tree, 1, std::move(a_mag));
  d.a_sign = RandomVariable(tree, 1, std::move(a_sgn));

  const RandomVariable first_lifted = lift(first, top);
  std::vector<double> b_mag(full.value.size()), b_sgn(full.value.size());
  for (std::size_t i = 0; i < full.value.size(); ++i) {
    const double tail = full.value[i] - first_lifted[i];
    b_mag[i] = std::abs(tail);
    b_sgn[i] = sign_of(tail);
  }
  d.B = RandomVariable(tree, top, std::move(b_mag));
  d.b_sign = RandomVariable(tree, top, std::move(b_sgn));
  d.conj = full.value;

  d.A_j.resize(d.s);
  for (std::size_t j = 0; j < d.s; ++j) d.A_j[j] = std::pow(d.p_j[j], 1.0 / p) * d.A[j];
  return d;
}

std::string ConditionReport::to_json() const {
  std::ostringstream out;
  out << "{\"condition\": \"" << condition << "\", \"worst_slack\": " << worst_slack
      << ", \"violations\": [";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << ", ";
    out << violations[i];
  }
  out << "]}";
  return out.str();
}

ConditionReport check_nonsingularity(const SingleStepData& d) {
  ConditionReport report{"non-singularity", std::numeric_limits<double>::infinity(), {}};
  double sum = 0.0;
  for (double x : d.x_j) sum += x;
  for (std::size_t j = 0; j < d.s; ++j) {
    const double lhs = (1.0 - d.p_j[j]) * d.x_j[j];
    const double rhs = 2.0 * (sum - d.x_j[j]);
    const double slack = rhs - lhs;
    report.worst_slack = std::min(report.worst_slack, slack);
    if (lhs > rhs + kConditionTol * std::max(1.0, lhs)) report.violations.push_back(j);
  }
  if (d.s == 0) report.worst_slack = 0.0;
  return report;
}

ConditionReport check_A_bound(const SingleStepData& d) {
  ConditionReport report{"first-summand-bound", std::numeric_limits<double>::infinity(), {}};
  const double p = d.p;
  const double inv_p = 1.0 / p;
  const double inv_pp = 1.0 - inv_p;
  double sum_xp = 0.0;
  for (double x : d.x_j) sum_xp += std::pow(x, p);
  for (std::size_t j = 0; j < d.s; ++j) {
    const double rest = std::max(0.0, sum_xp - std::pow(d.x_j[j], p));
    const double rhs = d.x_j[j] * (1.0 - d.p_j[j]) +
                       std::pow(d.p_j[j], inv_p) * std::pow(rest, inv_p) *
                           std::pow(1.0 - d.p_j[j], inv_pp);
    const double slack = rhs - d.A_j[j];
    report.worst_slack = std::min(report.worst_slack, slack);
    if (d.A_j[j] > rhs + kConditionTol * std::max(1.0, rhs)) report.violations.push_back(j);
  }
  if (d.s == 0) report.worst_slack = 0.0;
  return report;
}

ConditionalSubtree conditional_subtree(const FiltrationTree& tree, std::size_t level1_atom) {
  if (tree.depth() < 1) throw std::invalid_argument("conditional subspace needs depth >= 1");
  if (level1_atom >= tree.width(1)) throw std::out_of_range("no such first-level atom");

  const double scale = 1.0 / tree.prob(1, level1_atom);
  std::vector<std::vector<Atom>> levels;
  levels.push_back({Atom{1.0, -1}});
  std::vector<std::vector<std::size_t>> atom_map;
  atom_map.push_back({level1_atom});

  for (int n = 2; n <= tree.depth(); ++n) {
    const auto& prev_map = atom_map.back();
    std::vector<std::size_t> map;
    std::vector<Atom> atoms;
    for (std::size_t pi = 0; pi < prev_map.size(); ++pi) {
      for (std::size_t child : tree.children(n - 1, prev_map[pi])) {
        map.push_back(child);
        atoms.push_back(Atom{tree.prob(n, child) * scale, static_cast<int>(pi)});
      }
    }
    levels.push_back(std::move(atoms));
    atom_map.push_back(std::move(map));
  }
  return ConditionalSubtree{FiltrationTree(std::move(levels)), std::move(atom_map)};
}

RandomVariable restrict_to_subtree(const RandomVariable& f, const ConditionalSubtree& sub) {
  if (f.level() != f.tree().depth()) {
    throw std::invalid_argument("restriction expects a deepest-level variable");
  }
  const auto& map = sub.atom_map.back();
  std::vector<double> values(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) values[i] = f[map[i]];
  return RandomVariable(sub.tree, sub.tree.depth(), std::move(values));
}

TailBoundReport check_b_bound(const SingleStepData& d, std::optional<double> C) {
  TailBoundReport report;
  report.constant = C;
  const FiltrationTree& tree = d.B.tree();
  const int top = tree.depth();
  const double pp_exp = 1.0 - 1.0 / d.p;  // 1/p'

  // Signed tail at the deepest level.
  std::vector<double> tail(d.B.size());
  for (std::size_t i = 0; i < d.B.size(); ++i) tail[i] = d.b_sign[i] * d.B[i];

  // Near-constant variables drive both sides of the identity into rounding
  // noise, so the deviation is measured against the generating variable too.
  double scale = sup_norm(d.terminal);
  double max_abs_dev = 0.0;
  report.tail_integral.assign(d.s, 0.0);

  for (std::size_t j = 0; j < d.s; ++j) {
    ConditionalSubtree sub = conditional_subtree(tree, j);
    // The conditional martingale is generated by the restriction of the
    // original terminal variable; its potential picks up a p_j^(1/p') factor.
    RandomVariable g_terminal = restrict_to_subtree(d.terminal, sub);
    RandomVariable sub_conj = conj_riesz(g_terminal, d.alpha, sub.tree.depth()).value;
    const double factor = std::pow(d.p_j[j], pp_exp);

    const auto& leaf_map = sub.atom_map.back();
    for (std::size_t i = 0; i < leaf_map.size(); ++i) {
      const double lhs = tail[leaf_map[i]];
      const double rhs = factor * sub_conj[i];
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
      max_abs_dev = std::max(max_abs_dev, std::abs(lhs - rhs));
      report.tail_integral[j] += std::pow(std::abs(lhs), d.p) * tree.prob(top, leaf_map[i]);
    }
  }

  report.identity_gap = scale == 0.0 ? 0.0 : max_abs_dev / scale;
  report.identity_ok = report.identity_gap <= kIdentityTol;

  for (std::size_t j = 0; j < d.s; ++j) {
    const double denom = std::pow(d.y_j[j], d.p);
    if (report.tail_integral[j] > 0.0 && denom > 0.0) {
      report.worst_ratio = std::max(report.worst_ratio, report.tail_integral[j] / denom);
    }
    if (C) {
      const double cap = *C * denom;
      if (report.tail_integral[j] > cap + kConditionTol * std::max(1.0, cap)) {
        report.bound_violations.push_back(j);
      }
    }
  }
  report.bound_ok = report.bound_violations.empty();
  return report;
}

}  // namespace mrz
