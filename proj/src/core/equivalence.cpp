// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wdro {

namespace {

double pow_r(double base, double r) {
  if (r == 1.0) return base;
  if (r == 2.0) return base * base;
  return base == 0.0 ? 0.0 : std::pow(base, r);
}

double root_r(double v, double r) {
  if (r == 1.0) return v;
  if (v <= 0.0) return 0.0;
  return std::pow(v, 1.0 / r);
}

}  // namespace

double empirical_loss(const LossSpec& loss, const DiscreteDistribution& dist) {
  return dist.expectation([&](const Point& z) { return eval_loss(loss, z); });
}

double upper_bound_U(const LossSpec& loss, const DiscreteDistribution& dist, double delta) {
  if (delta < 0.0) fail(ErrorCode::DomainError, "delta must be nonnegative");
  const double e = empirical_loss(loss, dist);
  if (delta == 0.0) return e;
  const double L = weak_lipschitz(loss, dist).constant;
  return pow_r(root_r(e, loss.r) + L * delta, loss.r);
}

double lower_bound_L(const LossSpec& loss, const DiscreteDistribution& dist, double delta,
                     std::span<const Point> grid) {
  for (const Point& a : dist.atoms()) {
    bool found = false;
    for (const Point& g : grid)
      if (g.exactly_equal(a)) {
        found = true;
        break;
      }
    if (!found) fail(ErrorCode::GridMissingAtoms, "grid must contain every atom");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const DiscreteDistribution single = DiscreteDistribution::point_mass(dist.atom(i));
    total += dist.weight(i) * sup_over_grid(loss, single, delta, grid).value;
  }
  return total;
}

std::pair<double, double> per_point_bounds(const LossSpec& loss, const DiscreteDistribution& dist,
                                           double delta) {
  if (loss.r != 1.0)
    fail(ErrorCode::NoPerPointCertificate, "per-point bounds are an r = 1 statement");
  const LipschitzCertificate cert = weak_lipschitz(loss, dist);
  if (cert.scope != LipschitzScope::PerPoint)
    fail(ErrorCode::NoPerPointCertificate,
         "family carries a dataset-level constant, not per-point ones");
  const double e = empirical_loss(loss, dist);
  double mean_term = 0.0, max_term = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    mean_term += dist.weight(i) * cert.per_point[i];
    max_term = std::max(max_term, cert.per_point[i]);
  }
  return {e + mean_term * delta, e + max_term * delta};
}

double default_epsilon(const LossSpec& loss, const DiscreteDistribution& dist, double delta) {
  const double L = weak_lipschitz(loss, dist).constant;
  return std::min(L, delta * L) / 1000.0;
}

WorstCaseCertificate worst_case_distribution(const LossSpec& loss,
                                             const DiscreteDistribution& dist, double delta,
                                             double epsilon) {
  if (delta <= 0.0) fail(ErrorCode::DomainError, "worst-case construction needs delta > 0");
  const double L = weak_lipschitz(loss, dist).constant;
  if (!(epsilon > 0.0) || epsilon >= std::min(L, delta * L))
    fail(ErrorCode::EpsilonOutOfRange, "epsilon must lie in (0, min{L, delta L})");

  const double e = empirical_loss(loss, dist);
  const double eps_slope = epsilon / delta;  // the slope slack the proofs use

  WorstCaseCertificate cert;
  cert.epsilon = epsilon;

  std::vector<DiscreteDistribution> parts;
  parts.reserve(dist.size());
  if (loss.r == 1.0) {
    cert.regime = WorstCaseRegime::R1;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const Point& a = dist.atom(i);
      const Point w = witness(loss, a, eps_slope, delta, WitnessMode::SlopeAtDistance);
      const double d = eval_cost(loss.cost, w, a);
      const double eta = std::min(1.0, delta / d);
      if (eta >= 1.0)
        parts.push_back(DiscreteDistribution::point_mass(w));
      else
        parts.push_back(DiscreteDistribution::make({w, a}, {eta, 1.0 - eta}));
    }
  } else if (e != 0.0) {
    cert.regime = WorstCaseRegime::Rgt1Transport;
    const double e_root = root_r(e, loss.r);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const Point& a = dist.atom(i);
      const double target = eval_psi(loss, a) * delta / e_root;
      parts.push_back(DiscreteDistribution::point_mass(
          witness(loss, a, eps_slope, delta, WitnessMode::ExactDistance, target)));
    }
  } else {
    cert.regime = WorstCaseRegime::Rgt1Mixture;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const Point& a = dist.atom(i);
      const Point w = witness(loss, a, eps_slope, delta, WitnessMode::SlopeAtDistance);
      const double d = eval_cost(loss.cost, w, a);
      const double eta = std::min(1.0, pow_r(delta / d, loss.r));
      if (eta >= 1.0)
        parts.push_back(DiscreteDistribution::point_mass(w));
      else
        parts.push_back(DiscreteDistribution::make({w, a}, {eta, 1.0 - eta}));
    }
  }

  cert.distribution = mix(parts, dist.weights());
  cert.achieved_value = empirical_loss(loss, cert.distribution);
  cert.wasserstein_radius = wasserstein_discrete(loss.cost, loss.r, cert.distribution, dist);
  return cert;
}

double cvar(const DiscreteDistribution& dist, const std::function<double(const Point&)>& g,
            double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0,1)");
  const std::size_t n = dist.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = g(dist.atom(i));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  // Average of the worst (1 - alpha) mass, fractional at the boundary atom.
  double tail = 1.0 - alpha;
  double acc = 0.0;
  for (std::size_t k = 0; k < n && tail > 0.0; ++k) {
    const std::size_t i = order[k];
    const double take = std::min(tail, dist.weight(i));
    acc += take * values[i];
    tail -= take;
  }
  return acc / (1.0 - alpha);
}

namespace {

bool robust_cvar_pairing(const LossSpec& g_spec) {
  if (g_spec.family == LossFamily::CvarAbsResidual && g_spec.cost.kind == CostKind::FullNorm)
    return true;
  if (g_spec.family == LossFamily::CvarMargin &&
      g_spec.cost.kind == CostKind::FeatureNormLabelIndicator)
    return true;
  return false;
}

}  // namespace

double robust_cvar(const LossSpec& g_spec, const DiscreteDistribution& dist, double alpha,
                   double delta) {
  if (!robust_cvar_pairing(g_spec))
    fail(ErrorCode::UnsupportedPairing, "pointwise equivalence hypothesis not in the catalog");
  if (alpha <= 0.0 || alpha > 1.0 - 1e-6)
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1 - 1e-6]");
  if (delta < 0.0) fail(ErrorCode::DomainError, "delta must be nonnegative");
  const double nominal = cvar(dist, [&](const Point& z) { return eval_psi(g_spec, z); }, alpha);
  const double lg = weak_lipschitz(g_spec).constant;
  return nominal + lg * delta / (1.0 - alpha);
}

std::pair<double, double> hmcr(const DiscreteDistribution& dist,
                               const std::function<double(const Point&)>& g, double alpha,
                               double r, double delta, double lipschitz_g) {
  if (alpha <= 0.0 || alpha >= 1.0) fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0,1)");
  if (r < 1.0) fail(ErrorCode::DomainError, "hmcr order must be at least 1");
  if (delta < 0.0) fail(ErrorCode::DomainError, "delta must be nonnegative");

  std::vector<double> values(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) values[i] = g(dist.atom(i));
  const double gmin = *std::min_element(values.begin(), values.end());
  const double gmax = *std::max_element(values.begin(), values.end());
  const double c = 1.0 / (1.0 - alpha);

  auto objective = [&](double t) {
    double moment = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
      moment += dist.weight(i) * pow_r(std::max(0.0, values[i] - t), r);
    return t + c * root_r(moment, r);
  };
  // One-sided derivative used only to certify the bracket; widen on failure.
  auto derivative_below = [&](double t) {
    if (r == 1.0) {
      double mass = 0.0;
      for (std::size_t i = 0; i < dist.size(); ++i)
        if (values[i] > t) mass += dist.weight(i);
      return 1.0 - c * mass;
    }
    double moment = 0.0, dm = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const double gap = std::max(0.0, values[i] - t);
      moment += dist.weight(i) * pow_r(gap, r);
      dm += dist.weight(i) * pow_r(gap, r - 1.0);
    }
    if (moment <= 0.0) return 1.0;
    return 1.0 - c * std::pow(moment, 1.0 / r - 1.0) * dm;
  };

  double lo = gmin - 1.0;
  double hi = gmax;
  double span = hi - lo;
  int guard = 0;
  while (derivative_below(lo) > 0.0 && guard++ < 60) {
    lo -= span;
    span *= 2.0;
  }

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-10) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double nominal = std::min(objective(0.5 * (a + b)), std::min(f1, f2));
  return {nominal, nominal + lipschitz_g * delta * c};
}

BoundsReport bounds_report(const LossSpec& loss, const DiscreteDistribution& dist, double delta,
                           std::span<const Point> grid) {
  BoundsReport report;
  report.delta = delta;
  report.r = loss.r;
  report.empirical_loss = empirical_loss(loss, dist);
  report.upper_U = upper_bound_U(loss, dist, delta);
  report.lower_L = lower_bound_L(loss, dist, delta, grid);
  try {
    const auto [lo, hi] = per_point_bounds(loss, dist, delta);
    report.per_point_lower = lo;
    report.per_point_upper = hi;
    report.has_per_point = true;
  } catch (const Error&) {
    report.has_per_point = false;
  }
  return report;
}

}  // namespace wdro
