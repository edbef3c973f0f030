// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_EQUIVALENCE_HPP
#define WDRO_CORE_EQUIVALENCE_HPP

#include <functional>
#include <span>
#include <utility>

#include "core/oracle.hpp"

namespace wdro {

struct BoundsReport {
  double empirical_loss = 0.0;
  double upper_U = 0.0;
  double lower_L = 0.0;
  double per_point_lower = 0.0;  // populated when a per-point certificate exists
  double per_point_upper = 0.0;
  bool has_per_point = false;
  double delta = 0.0;
  double r = 1.0;
};

double empirical_loss(const LossSpec& loss, const DiscreteDistribution& dist);

// ((E^{1/r}) + L*delta)^r with the dataset-level constant; returns E exactly
// at delta = 0.
double upper_bound_U(const LossSpec& loss, const DiscreteDistribution& dist, double delta);

// Weighted sum of per-atom grid suprema under a per-atom moment budget (the
// singleton reduction); requires the grid to contain every atom.
double lower_bound_L(const LossSpec& loss, const DiscreteDistribution& dist, double delta,
                     std::span<const Point> grid);

// (E + sum_i mu_i L_i delta, E + max_i L_i delta) for per-point certified
// families at r = 1.
std::pair<double, double> per_point_bounds(const LossSpec& loss, const DiscreteDistribution& dist,
                                           double delta);

enum class WorstCaseRegime { R1, Rgt1Transport, Rgt1Mixture };

struct WorstCaseCertificate {
  DiscreteDistribution distribution;
  double achieved_value = 0.0;
  double wasserstein_radius = 0.0;  // re-verified through the transport oracle
  double epsilon = 0.0;
  WorstCaseRegime regime = WorstCaseRegime::R1;
};

// Constructive near-optimal feasible distribution: r=1 mixes each atom with a
// far witness at weight delta/d; r>1 with E != 0 transports every atom to an
// exact-distance witness; r>1 with E = 0 mixes at weight (delta/d)^r.
WorstCaseCertificate worst_case_distribution(const LossSpec& loss,
                                             const DiscreteDistribution& dist, double delta,
                                             double epsilon);

double default_epsilon(const LossSpec& loss, const DiscreteDistribution& dist, double delta);

// Exact discrete CVaR: threshold at the alpha-quantile atom, fractional tail.
double cvar(const DiscreteDistribution& dist, const std::function<double(const Point&)>& g,
            double alpha);

// CVaR(P_N) + L_G * delta / (1 - alpha) for the cataloged pairings.
double robust_cvar(const LossSpec& g_spec, const DiscreteDistribution& dist, double alpha,
                   double delta);

// Higher-moment coherent risk: nominal by golden-section over the threshold,
// robust adds L_G * delta / (1 - alpha).
std::pair<double, double> hmcr(const DiscreteDistribution& dist,
                               const std::function<double(const Point&)>& g, double alpha,
                               double r, double delta, double lipschitz_g);

BoundsReport bounds_report(const LossSpec& loss, const DiscreteDistribution& dist, double delta,
                           std::span<const Point> grid);

}  // namespace wdro

#endif
