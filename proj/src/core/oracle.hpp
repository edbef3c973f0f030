// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_ORACLE_HPP
#define WDRO_CORE_ORACLE_HPP

#include <span>
#include <vector>

#include "core/loss.hpp"

namespace wdro {

// Exact discrete optimal-transport discrepancy (min over couplings of the
// r-th cost moment, to the 1/r). Infinite-cost cells are forbidden arcs.
double wasserstein_discrete(const CostSpec& cost, double r, const DiscreteDistribution& p,
                            const DiscreteDistribution& q);

struct DualTraceEntry {
  double rho;
  double subgradient;
};

struct BudgetedLpSolution {
  double value = 0.0;
  Coupling coupling;
  std::vector<double> marginal_q;
  double rho_star = 0.0;
  bool tight = false;
};

// Exact optimum of   max_pi sum_ij pi_ij l(z_j)
//   s.t. sum_j pi_ij = mu_i,  sum_ij pi_ij d^r(z_j, Z_i) <= delta^r,  pi >= 0.
// The convex piecewise-linear dual in the single multiplier rho is minimized
// by bisection on the subgradient sign, then the primal is recovered by
// mixing the two tied argmax columns of the boundary atom.
BudgetedLpSolution sup_over_grid(const LossSpec& loss, const DiscreteDistribution& dist,
                                 double delta, std::span<const Point> grid,
                                 std::vector<DualTraceEntry>* trace = nullptr);

// min over rho >= 0 of rho*delta^r + E[max_j (l_j - rho c_ij)], the grid
// restriction of the dual bound; equals sup_over_grid by LP strong duality.
double dual_bound_I(const LossSpec& loss, const DiscreteDistribution& dist, double delta,
                    std::span<const Point> grid);

// Atoms, slope witnesses at a ladder of epsilon values (both the at-least-
// delta and the exact-distance flavors), and segment samples between each
// atom and its witnesses. Indicator costs only ever see label-preserving
// points by construction.
std::vector<Point> make_grid(const DiscreteDistribution& dist, const LossSpec& loss, double delta,
                             int resolution);

}  // namespace wdro

#endif
