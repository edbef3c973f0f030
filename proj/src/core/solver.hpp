// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_SOLVER_HPP
#define WDRO_CORE_SOLVER_HPP

#include <optional>
#include <vector>

#include "core/equivalence.hpp"

namespace wdro {

struct SolveConfig {
  LossSpec loss;            // family, cost, exponent; beta inside is ignored
  double delta = 0.0;
  double eta0 = 0.1;        // step eta0 / sqrt(k)
  int max_iters = 20000;
  double stall_tol = 0.0;   // stop when best improves by less than this ...
  int stall_window = 2000;  // ... over this many iterations (0 disables)
  bool record_trajectory = false;
};

struct SolveResult {
  std::vector<double> beta;
  double objective = 0.0;  // re-evaluated at beta
  int iterations = 0;
  std::vector<double> trajectory;  // best-so-far objective when recorded
};

bool family_is_convex(LossFamily family);

// Objective value F(beta) = (E[psi^r])^{1/r} + L(beta) * delta (the r-th root
// form), with the CVaR families using their risk-measure objective.
double solver_objective(const SolveConfig& config, const DiscreteDistribution& data,
                        const std::vector<double>& beta);

SolveResult minimize_regularized(const SolveConfig& config, const DiscreteDistribution& data,
                                 std::vector<double> beta0);

// Max relative deviation between the analytic subgradient and central
// differences with step h; meaningful away from kinks.
double finite_difference_check(const SolveConfig& config, const DiscreteDistribution& data,
                               const std::vector<double>& beta, double h);

}  // namespace wdro

#endif
