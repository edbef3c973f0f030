// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/solver.hpp"

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

LossSpec with_beta(const SolveConfig& config, const std::vector<double>& beta) {
  LossSpec spec = config.loss;
  spec.beta = beta;
  return spec;
}

// Subgradient of the regularizer L(beta); zero at beta = 0 for the dual-norm
// regularizers.
std::vector<double> regularizer_subgradient(const LossSpec& spec) {
  const std::size_t n = spec.beta.size();
  std::vector<double> g(n, 0.0);
  switch (spec.cost.kind) {
    case CostKind::FullNorm: {
      std::vector<double> u(n + 1);
      for (std::size_t i = 0; i < n; ++i) u[i] = -spec.beta[i];
      u.back() = 1.0;
      const std::vector<double> a = dual_achiever(spec.cost.norm, u);
      for (std::size_t i = 0; i < n; ++i) g[i] = -a[i];
      return g;
    }
    case CostKind::FeatureNormLabelIndicator: {
      if (dual_norm(spec.cost.norm, spec.beta) == 0.0) return g;
      return dual_achiever(spec.cost.norm, spec.beta);
    }
    case CostKind::SubsetNorm: {
      std::vector<double> sub;
      for (int idx : spec.cost.index_set) sub.push_back(spec.beta[static_cast<std::size_t>(idx)]);
      if (dual_norm(spec.cost.norm, sub) == 0.0) return g;
      const std::vector<double> a = dual_achiever(spec.cost.norm, sub);
      for (std::size_t k = 0; k < a.size(); ++k)
        g[static_cast<std::size_t>(spec.cost.index_set[k])] = a[k];
      return g;
    }
    case CostKind::SemiNormB: {
      const Matrix& B = spec.cost.B;
      std::vector<double> bb(B.rows, 0.0);
      for (std::size_t i = 0; i < B.rows; ++i)
        for (std::size_t j = 0; j < n; ++j) bb[i] += B.at(i, j) * spec.beta[j];
      const double nb = norm_value(GroundNorm::l2(), bb);
      if (nb == 0.0) return g;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < B.rows; ++i) g[j] += B.at(i, j) * bb[i] / nb;
      return g;
    }
    case CostKind::ProductCost:
      for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * spec.beta[i];
      return g;
    case CostKind::PlainNorm: {
      if (dual_norm(spec.cost.norm, spec.beta) == 0.0) return g;
      return dual_achiever(spec.cost.norm, spec.beta);
    }
    default:
      return g;
  }
}

// d psi / d beta at one sample.
std::vector<double> kernel_subgradient(const LossSpec& spec, const Point& z) {
  const std::size_t n = spec.beta.size();
  std::vector<double> g(n, 0.0);
  auto scaled_x = [&](double s) {
    for (std::size_t i = 0; i < n; ++i) g[i] = s * z.x[i];
    return g;
  };
  switch (spec.family) {
    case LossFamily::AbsLinear:
    case LossFamily::CvarAbsResidual: {
      const double phi = z.y - dot(spec.beta, z.x);
      return scaled_x(phi >= 0.0 ? -1.0 : 1.0);
    }
    case LossFamily::LowerPartial: {
      const double phi = z.y - dot(spec.beta, z.x);
      return scaled_x(phi > spec.tau ? -1.0 : 0.0);
    }
    case LossFamily::TauInsensitive: {
      const double phi = z.y - dot(spec.beta, z.x);
      if (std::abs(phi) <= spec.tau) return g;
      return scaled_x(phi > 0.0 ? -1.0 : 1.0);
    }
    case LossFamily::LogCosh: {
      const double phi = z.y - dot(spec.beta, z.x);
      return scaled_x(-std::tanh(phi));
    }
    case LossFamily::Huber: {
      const double phi = z.y - dot(spec.beta, z.x);
      return scaled_x(-std::clamp(phi, -1.0, 1.0));
    }
    case LossFamily::Quantile: {
      const double phi = z.y - dot(spec.beta, z.x);
      return scaled_x(phi >= 0.0 ? -spec.gamma : 1.0);
    }
    case LossFamily::HingePow: {
      const double m = z.y * dot(spec.beta, z.x);
      return scaled_x(m < spec.threshold ? -z.y : 0.0);
    }
    case LossFamily::LogExp: {
      const double m = z.y * dot(spec.beta, z.x);
      return scaled_x(-z.y / (1.0 + std::exp(m)));
    }
    case LossFamily::SmoothHinge: {
      const double m = z.y * dot(spec.beta, z.x);
      double hp = 0.0;
      if (m <= 0.0)
        hp = -1.0;
      else if (m < 1.0)
        hp = -(1.0 - m);
      return scaled_x(hp * z.y);
    }
    case LossFamily::RidgeSquare: {
      const double t = z.y + dot(spec.beta, z.x);
      return scaled_x(2.0 * t);
    }
    case LossFamily::CvarMargin:
      return scaled_x(-z.y);
    case LossFamily::Hmcr:
      return scaled_x(1.0);
    default:
      fail(ErrorCode::NonConvexFamily, "no subgradient for this family");
  }
}

struct TailWeights {
  std::vector<double> q;  // optimal tail weights, sum 1
};

TailWeights cvar_tail(const DiscreteDistribution& data, const std::vector<double>& values,
                      double alpha) {
  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  TailWeights tw;
  tw.q.assign(n, 0.0);
  double tail = 1.0 - alpha;
  for (std::size_t k = 0; k < n && tail > 0.0; ++k) {
    const std::size_t i = order[k];
    const double take = std::min(tail, data.weight(i));
    tw.q[i] = take / (1.0 - alpha);
    tail -= take;
  }
  return tw;
}

std::vector<double> objective_subgradient(const SolveConfig& config,
                                          const DiscreteDistribution& data,
                                          const std::vector<double>& beta) {
  const LossSpec spec = with_beta(config, beta);
  const std::size_t n = beta.size();
  std::vector<double> g(n, 0.0);

  if (spec.family == LossFamily::CvarAbsResidual || spec.family == LossFamily::CvarMargin) {
    std::vector<double> values(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) values[i] = eval_psi(spec, data.atom(i));
    const TailWeights tw = cvar_tail(data, values, spec.alpha);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (tw.q[i] == 0.0) continue;
      const std::vector<double> gi = kernel_subgradient(spec, data.atom(i));
      for (std::size_t d = 0; d < n; ++d) g[d] += tw.q[i] * gi[d];
    }
    const std::vector<double> reg = regularizer_subgradient(spec);
    const double scale = config.delta / (1.0 - spec.alpha);
    for (std::size_t d = 0; d < n; ++d) g[d] += scale * reg[d];
    return g;
  }

  if (spec.family == LossFamily::Hmcr) {
    std::vector<double> values(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) values[i] = eval_psi(spec, data.atom(i));
    // Danskin at the inner minimizer: locate t* by golden-section, then
    // differentiate the moment term at fixed t*.
    const double c = 1.0 / (1.0 - spec.alpha);
    double lo = *std::min_element(values.begin(), values.end()) - 1.0;
    double hi = *std::max_element(values.begin(), values.end());
    auto obj = [&](double t) {
      double moment = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i)
        moment += data.weight(i) * pow_r(std::max(0.0, values[i] - t), spec.r);
      return t + c * (moment == 0.0 ? 0.0 : std::pow(moment, 1.0 / spec.r));
    };
    const double phi_ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi_ratio * (hi - lo), x2 = lo + phi_ratio * (hi - lo);
    double f1 = obj(x1), f2 = obj(x2);
    while (hi - lo > 1e-10) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi_ratio * (hi - lo);
        f1 = obj(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi_ratio * (hi - lo);
        f2 = obj(x2);
      }
    }
    const double tstar = 0.5 * (lo + hi);
    double moment = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
      moment += data.weight(i) * pow_r(std::max(0.0, values[i] - tstar), spec.r);
    if (moment > 0.0) {
      const double outer = std::pow(moment, 1.0 / spec.r - 1.0);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const double gap = std::max(0.0, values[i] - tstar);
        if (gap == 0.0) continue;
        const double w = data.weight(i) * pow_r(gap, spec.r - 1.0) * outer * c;
        for (std::size_t d = 0; d < n; ++d) g[d] += w * data.atom(i).x[d];
      }
    }
    const std::vector<double> reg = regularizer_subgradient(spec);
    for (std::size_t d = 0; d < n; ++d) g[d] += config.delta * c * reg[d];
    return g;
  }

  // (E[psi^r])^{1/r} term.
  const double e = empirical_loss(spec, data);
  if (e > 0.0) {
    const double outer = spec.r == 1.0 ? 1.0 : std::pow(e, 1.0 / spec.r - 1.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Point& z = data.atom(i);
      const double psi = eval_psi(spec, z);
      const double w = data.weight(i) * outer * (spec.r == 1.0 ? 1.0 : pow_r(psi, spec.r - 1.0));
      if (w == 0.0) continue;
      const std::vector<double> gi = kernel_subgradient(spec, z);
      for (std::size_t d = 0; d < n; ++d) g[d] += w * gi[d];
    }
  }
  const std::vector<double> reg = regularizer_subgradient(spec);
  for (std::size_t d = 0; d < n; ++d) g[d] += config.delta * reg[d];
  return g;
}

}  // namespace

bool family_is_convex(LossFamily family) {
  switch (family) {
    case LossFamily::AbsLinear:
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
    case LossFamily::LogCosh:
    case LossFamily::Huber:
    case LossFamily::Quantile:
    case LossFamily::HingePow:
    case LossFamily::LogExp:
    case LossFamily::SmoothHinge:
    case LossFamily::RidgeSquare:
    case LossFamily::CvarAbsResidual:
    case LossFamily::CvarMargin:
    case LossFamily::Hmcr:
      return true;
    default:
      return false;
  }
}

double solver_objective(const SolveConfig& config, const DiscreteDistribution& data,
                        const std::vector<double>& beta) {
  const LossSpec spec = with_beta(config, beta);
  if (spec.family == LossFamily::CvarAbsResidual || spec.family == LossFamily::CvarMargin) {
    const double nominal =
        cvar(data, [&](const Point& z) { return eval_psi(spec, z); }, spec.alpha);
    return nominal + regularizer_constant(spec) * config.delta / (1.0 - spec.alpha);
  }
  if (spec.family == LossFamily::Hmcr) {
    const double lg = regularizer_constant(spec);
    return hmcr(data, [&](const Point& z) { return eval_psi(spec, z); }, spec.alpha, spec.r,
                config.delta, lg)
        .second;
  }
  const double e = empirical_loss(spec, data);
  const double root = spec.r == 1.0 ? e : (e <= 0.0 ? 0.0 : std::pow(e, 1.0 / spec.r));
  return root + regularizer_constant(spec) * config.delta;
}

SolveResult minimize_regularized(const SolveConfig& config, const DiscreteDistribution& data,
                                 std::vector<double> beta0) {
  if (!family_is_convex(config.loss.family))
    fail(ErrorCode::NonConvexFamily, std::string(loss_family_name(config.loss.family)) +
                                         " is evaluation-only, not solvable");
  if (config.eta0 <= 0.0) fail(ErrorCode::DomainError, "step size eta0 must be positive");
  if (config.delta < 0.0) fail(ErrorCode::DomainError, "delta must be nonnegative");

  std::vector<double> beta = std::move(beta0);
  std::vector<double> best_beta = beta;
  const double f0 = solver_objective(config, data, beta);
  double best = f0;
  const double divergence_cap = 1000.0 * std::max(std::abs(f0), 1.0);

  SolveResult result;
  if (config.record_trajectory) result.trajectory.push_back(best);
  int last_improvement = 0;
  int k = 0;
  for (k = 1; k <= config.max_iters; ++k) {
    const std::vector<double> g = objective_subgradient(config, data, beta);
    const double step = config.eta0 / std::sqrt(static_cast<double>(k));
    for (std::size_t d = 0; d < beta.size(); ++d) beta[d] -= step * g[d];
    const double f = solver_objective(config, data, beta);
    if (f > divergence_cap) fail(ErrorCode::DivergenceDetected, "objective exceeded 1000x initial");
    if (f < best - config.stall_tol) last_improvement = k;
    if (f < best) {
      best = f;
      best_beta = beta;
    }
    if (config.record_trajectory) result.trajectory.push_back(best);
    if (config.stall_window > 0 && k - last_improvement >= config.stall_window) break;
  }
  result.beta = std::move(best_beta);
  result.objective = solver_objective(config, data, result.beta);
  result.iterations = std::min(k, config.max_iters);
  return result;
}

double finite_difference_check(const SolveConfig& config, const DiscreteDistribution& data,
                               const std::vector<double>& beta, double h) {
  const std::vector<double> g = objective_subgradient(config, data, beta);
  double worst = 0.0;
  for (std::size_t d = 0; d < beta.size(); ++d) {
    std::vector<double> plus = beta, minus = beta;
    plus[d] += h;
    minus[d] -= h;
    const double fd =
        (solver_objective(config, data, plus) - solver_objective(config, data, minus)) / (2.0 * h);
    worst = std::max(worst, std::abs(g[d] - fd) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

}  // namespace wdro
