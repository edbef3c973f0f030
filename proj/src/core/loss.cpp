// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wdro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double t) { return t < 0.0 ? -1.0 : 1.0; }

// y - <beta, x> on labeled points (beta may be empty for scalar problems).
double residual(const LossSpec& spec, const Point& z) {
  if (z.kind != PointKind::Labeled)
    fail(ErrorCode::VariantMismatch, "regression loss expects labeled points");
  return z.y - dot(spec.beta, z.x);
}

double margin(const LossSpec& spec, const Point& z) {
  if (z.kind != PointKind::Binary)
    fail(ErrorCode::VariantMismatch, "classification loss expects binary-labeled points");
  return z.y * dot(spec.beta, z.x);
}

double functional_residual(const LossSpec& spec, const Point& z) {
  if (z.kind != PointKind::Sampled)
    fail(ErrorCode::VariantMismatch, "functional loss expects sampled points");
  if (z.x.size() != spec.beta_values.size())
    fail(ErrorCode::DimensionMismatch, "sampled point grid differs from the loss grid");
  double s = 0.0;
  for (std::size_t i = 0; i < z.x.size(); ++i) s += spec.quad_w[i] * z.x[i] * spec.beta_values[i];
  return z.y - s;
}

double shape_value(FunctionalShape shape, double tau, double t) {
  switch (shape) {
    case FunctionalShape::Abs: return std::abs(t);
    case FunctionalShape::Lpm: return std::max(0.0, t - tau);
    case FunctionalShape::Insens: return std::max(0.0, std::abs(t) - tau);
  }
  return 0.0;
}

double bce_kernel(double t) { return t * std::log(t) + (1.0 - t) * std::log(1.0 - t); }

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321;
}

double log_exp(double t) {  // log(1 + exp(-t))
  return t < 0.0 ? -t + std::log1p(std::exp(t)) : std::log1p(std::exp(-t));
}

bool pairing_in_catalog(LossFamily family, CostKind cost) {
  switch (family) {
    case LossFamily::AbsLinear:
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
      return cost == CostKind::FullNorm || cost == CostKind::FeatureNormLabelIndicator ||
             cost == CostKind::SubsetNorm || cost == CostKind::SemiNormB ||
             cost == CostKind::AbsoluteScalar;
    case LossFamily::LogCosh:
    case LossFamily::Huber:
    case LossFamily::Quantile:
      return cost == CostKind::FullNorm || cost == CostKind::FeatureNormLabelIndicator;
    case LossFamily::HingePow:
    case LossFamily::SvmAbsPow:
    case LossFamily::LogExp:
    case LossFamily::SmoothHinge:
    case LossFamily::TruncPinball:
    case LossFamily::CvarMargin:
      return cost == CostKind::FeatureNormLabelIndicator;
    case LossFamily::BinaryCrossEntropy:
      return cost == CostKind::AbsoluteScalar;
    case LossFamily::HardSigmoid:
    case LossFamily::Hmcr:
      return cost == CostKind::PlainNorm;
    case LossFamily::RidgeSquare:
      return cost == CostKind::ProductCost;
    case LossFamily::FunctionalLinear:
      return cost == CostKind::L2FunctionLabelIndicator;
    case LossFamily::CvarAbsResidual:
      return cost == CostKind::FullNorm;
  }
  return false;
}

}  // namespace

const char* loss_family_name(LossFamily family) {
  switch (family) {
    case LossFamily::AbsLinear: return "abs_linear";
    case LossFamily::LowerPartial: return "lower_partial";
    case LossFamily::TauInsensitive: return "tau_insensitive";
    case LossFamily::LogCosh: return "log_cosh";
    case LossFamily::Huber: return "huber";
    case LossFamily::Quantile: return "quantile";
    case LossFamily::HingePow: return "hinge_pow";
    case LossFamily::SvmAbsPow: return "svm_abs_pow";
    case LossFamily::LogExp: return "log_exp";
    case LossFamily::SmoothHinge: return "smooth_hinge";
    case LossFamily::TruncPinball: return "trunc_pinball";
    case LossFamily::BinaryCrossEntropy: return "binary_cross_entropy";
    case LossFamily::HardSigmoid: return "hard_sigmoid";
    case LossFamily::RidgeSquare: return "ridge_square";
    case LossFamily::FunctionalLinear: return "functional_linear";
    case LossFamily::CvarAbsResidual: return "cvar_abs_residual";
    case LossFamily::CvarMargin: return "cvar_margin";
    case LossFamily::Hmcr: return "hmcr";
  }
  return "unknown";
}

const char* functional_shape_name(FunctionalShape shape) {
  switch (shape) {
    case FunctionalShape::Abs: return "abs";
    case FunctionalShape::Lpm: return "lpm";
    case FunctionalShape::Insens: return "insens";
  }
  return "unknown";
}

bool family_allows_r_gt1(LossFamily family) {
  switch (family) {
    case LossFamily::AbsLinear:
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
    case LossFamily::HingePow:
    case LossFamily::SvmAbsPow:
    case LossFamily::FunctionalLinear:
      return true;
    default:
      return false;
  }
}

PointKind expected_point_kind(LossFamily family) {
  switch (family) {
    case LossFamily::AbsLinear:
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
    case LossFamily::LogCosh:
    case LossFamily::Huber:
    case LossFamily::Quantile:
    case LossFamily::RidgeSquare:
    case LossFamily::CvarAbsResidual:
      return PointKind::Labeled;
    case LossFamily::HingePow:
    case LossFamily::SvmAbsPow:
    case LossFamily::LogExp:
    case LossFamily::SmoothHinge:
    case LossFamily::TruncPinball:
    case LossFamily::CvarMargin:
      return PointKind::Binary;
    case LossFamily::BinaryCrossEntropy:
    case LossFamily::HardSigmoid:
    case LossFamily::Hmcr:
      return PointKind::Plain;
    case LossFamily::FunctionalLinear:
      return PointKind::Sampled;
  }
  return PointKind::Plain;
}

LossSpec LossSpec::make(LossFamily family, std::vector<double> beta, double r, CostSpec cost) {
  if (r < 1.0) fail(ErrorCode::DomainError, "exponent r must be at least 1");
  if (r > 1.0 && !family_allows_r_gt1(family))
    fail(ErrorCode::DomainError,
         std::string("family ") + loss_family_name(family) + " accepts only r = 1");
  if (!pairing_in_catalog(family, cost.kind))
    fail(ErrorCode::UnsupportedPairing, std::string(loss_family_name(family)) + " x " +
                                            cost_kind_name(cost.kind) + " is not in the catalog");
  if (family == LossFamily::BinaryCrossEntropy) {
    if (beta.size() != 1 || beta[0] <= 0.0 || beta[0] >= 1.0)
      fail(ErrorCode::DomainError, "binary cross-entropy needs a scalar beta in (0,1)");
  }
  if (cost.kind == CostKind::AbsoluteScalar && family != LossFamily::BinaryCrossEntropy &&
      !beta.empty())
    fail(ErrorCode::UnsupportedPairing, "absolute_scalar cost pairs with feature-free losses");
  LossSpec spec;
  spec.family = family;
  spec.beta = std::move(beta);
  spec.r = r;
  spec.cost = std::move(cost);
  return spec;
}

LossSpec& LossSpec::with_tau(double t) {
  tau = t;
  return *this;
}

LossSpec& LossSpec::with_gamma(double g) {
  if (g <= 0.0 || g >= 1.0) fail(ErrorCode::DomainError, "quantile level must lie in (0,1)");
  gamma = g;
  return *this;
}

LossSpec& LossSpec::with_pinball(double t1, double t2) {
  if (t1 < 0.0 || t1 > 1.0 || t2 < 0.0)
    fail(ErrorCode::DomainError, "truncated pinball needs tau1 in [0,1] and tau2 >= 0");
  tau1 = t1;
  tau2 = t2;
  return *this;
}

LossSpec& LossSpec::with_alpha(double a) {
  if (a <= 0.0 || a >= 1.0) fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0,1)");
  alpha = a;
  return *this;
}

LossSpec& LossSpec::with_threshold(double t) {
  threshold = t;
  return *this;
}

LossSpec LossSpec::functional(std::vector<double> beta_values, std::vector<double> quad_w,
                              FunctionalShape shape, double tau, double r) {
  if (beta_values.size() != quad_w.size())
    fail(ErrorCode::DimensionMismatch, "functional beta and quadrature lengths differ");
  LossSpec spec = make(LossFamily::FunctionalLinear, {}, r, CostSpec::l2_function_label_indicator());
  spec.beta_values = std::move(beta_values);
  spec.quad_w = std::move(quad_w);
  spec.shape = shape;
  spec.tau = tau;
  return spec;
}

LossSpec LossSpec::functional_parametric(std::vector<double> coeffs, Matrix basis_samples,
                                         std::vector<double> quad_w, FunctionalShape shape,
                                         double tau, double r) {
  if (basis_samples.rows != coeffs.size() || basis_samples.cols != quad_w.size())
    fail(ErrorCode::DimensionMismatch, "basis sample matrix shape mismatch");
  std::vector<double> values(quad_w.size(), 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (std::size_t k = 0; k < quad_w.size(); ++k) values[k] += coeffs[j] * basis_samples.at(j, k);
  LossSpec spec = functional(std::move(values), std::move(quad_w), shape, tau, r);
  spec.beta = std::move(coeffs);
  spec.basis = std::move(basis_samples);
  return spec;
}

double eval_psi(const LossSpec& spec, const Point& z) {
  switch (spec.family) {
    case LossFamily::AbsLinear: return std::abs(residual(spec, z));
    case LossFamily::LowerPartial: return std::max(0.0, residual(spec, z) - spec.tau);
    case LossFamily::TauInsensitive:
      return std::max(0.0, std::abs(residual(spec, z)) - spec.tau);
    case LossFamily::LogCosh: return log_cosh(residual(spec, z));
    case LossFamily::Huber: {
      const double t = residual(spec, z);
      return std::abs(t) <= 1.0 ? 0.5 * t * t : std::abs(t) - 0.5;
    }
    case LossFamily::Quantile: {
      const double t = residual(spec, z);
      return t >= 0.0 ? spec.gamma * t : -t;
    }
    case LossFamily::HingePow: return std::max(0.0, spec.threshold - margin(spec, z));
    case LossFamily::SvmAbsPow: return std::abs(spec.threshold - margin(spec, z));
    case LossFamily::LogExp: return log_exp(margin(spec, z));
    case LossFamily::SmoothHinge: {
      const double t = margin(spec, z);
      if (t >= 1.0) return 0.0;
      if (t > 0.0) return 0.5 * (1.0 - t) * (1.0 - t);
      return 0.5 - t;
    }
    case LossFamily::TruncPinball: {
      const double t = margin(spec, z);
      if (t <= 1.0) return 1.0 - t;
      if (t < spec.tau2 + 1.0) return spec.tau1 * (t - 1.0);
      return spec.tau1 * spec.tau2;
    }
    case LossFamily::BinaryCrossEntropy: {
      if (z.kind != PointKind::Plain || z.x.size() != 1)
        fail(ErrorCode::VariantMismatch, "binary cross-entropy expects scalar plain points");
      const double s = spec.beta[0] * z.x[0];
      if (s <= 0.0 || s >= 1.0)
        fail(ErrorCode::DomainError, "binary cross-entropy requires beta*z in (0,1)");
      return bce_kernel(s);
    }
    case LossFamily::HardSigmoid: {
      if (z.kind != PointKind::Plain)
        fail(ErrorCode::VariantMismatch, "hard sigmoid expects plain points");
      const double t = dot(spec.beta, z.x);
      return std::max(0.0, std::min(1.0, 0.5 * (t + 1.0)));
    }
    case LossFamily::RidgeSquare: {
      if (z.kind != PointKind::Labeled)
        fail(ErrorCode::VariantMismatch, "ridge square expects labeled points");
      const double t = z.y + dot(spec.beta, z.x);
      return t * t;
    }
    case LossFamily::FunctionalLinear:
      return shape_value(spec.shape, spec.tau, functional_residual(spec, z));
    case LossFamily::CvarAbsResidual: return std::abs(residual(spec, z));
    case LossFamily::CvarMargin: return -margin(spec, z);
    case LossFamily::Hmcr: {
      if (z.kind != PointKind::Plain)
        fail(ErrorCode::VariantMismatch, "hmcr expects plain points");
      return dot(spec.beta, z.x);
    }
  }
  fail(ErrorCode::Internal, "unhandled loss family");
}

double eval_loss(const LossSpec& spec, const Point& z) {
  const double psi = eval_psi(spec, z);
  if (spec.r == 1.0) return psi;
  if (spec.r == 2.0) return psi * psi;
  if (psi < 0.0) fail(ErrorCode::DomainError, "negative kernel raised to a non-unit exponent");
  if (psi == 0.0) return 0.0;
  return std::exp(spec.r * std::log(psi));
}

namespace {

// Dataset-independent constant for the globally certified families.
double global_constant(const LossSpec& spec) {
  const CostKind cost = spec.cost.kind;
  switch (spec.family) {
    case LossFamily::AbsLinear:
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
    case LossFamily::LogCosh:
    case LossFamily::Huber:
    case LossFamily::Quantile:
    case LossFamily::CvarAbsResidual: {
      if (cost == CostKind::FullNorm) {
        std::vector<double> v(spec.beta.size() + 1);
        for (std::size_t i = 0; i < spec.beta.size(); ++i) v[i] = -spec.beta[i];
        v.back() = 1.0;
        return dual_norm(spec.cost.norm, v);
      }
      if (cost == CostKind::FeatureNormLabelIndicator) return dual_norm(spec.cost.norm, spec.beta);
      if (cost == CostKind::SubsetNorm) {
        std::vector<double> sub;
        for (int idx : spec.cost.index_set) {
          if (static_cast<std::size_t>(idx) >= spec.beta.size())
            fail(ErrorCode::DimensionMismatch, "subset norm index outside beta dimension");
          sub.push_back(spec.beta[static_cast<std::size_t>(idx)]);
        }
        return dual_norm(spec.cost.norm, sub);
      }
      if (cost == CostKind::SemiNormB) {
        const Matrix& B = spec.cost.B;
        if (B.cols != spec.beta.size())
          fail(ErrorCode::DimensionMismatch, "seminorm matrix and beta dimensions differ");
        std::vector<double> bb(B.rows, 0.0);
        for (std::size_t i = 0; i < B.rows; ++i)
          for (std::size_t j = 0; j < B.cols; ++j) bb[i] += B.at(i, j) * spec.beta[j];
        return norm_value(GroundNorm::l2(), bb);
      }
      if (cost == CostKind::AbsoluteScalar) return 1.0;
      break;
    }
    case LossFamily::HingePow:
    case LossFamily::SvmAbsPow:
    case LossFamily::LogExp:
    case LossFamily::SmoothHinge:
    case LossFamily::TruncPinball:
    case LossFamily::CvarMargin:
      return dual_norm(spec.cost.norm, spec.beta);
    case LossFamily::RidgeSquare: {
      double s = 1.0;
      for (double b : spec.beta) s += b * b;
      return s;
    }
    case LossFamily::FunctionalLinear: {
      double s = 0.0;
      for (std::size_t i = 0; i < spec.beta_values.size(); ++i)
        s += spec.quad_w[i] * spec.beta_values[i] * spec.beta_values[i];
      return std::sqrt(s);
    }
    case LossFamily::Hmcr:
      return dual_norm(spec.cost.norm, spec.beta);
    default:
      break;
  }
  fail(ErrorCode::UnsupportedPairing, "no closed-form constant for this pairing");
}

bool per_point_family(LossFamily family) {
  return family == LossFamily::BinaryCrossEntropy || family == LossFamily::HardSigmoid;
}

bool is_zero_vector(const std::vector<double>& v) {
  for (double vi : v)
    if (vi != 0.0) return false;
  return true;
}

// Per-anchor constant for the hard sigmoid: the origin or the shifted anchor
// -3 a_beta / ||beta||_* are the certified positions.
double hard_sigmoid_constant(const LossSpec& spec, const Point& anchor) {
  const double dual = dual_norm(spec.cost.norm, spec.beta);
  if (dual == 0.0) fail(ErrorCode::UnsupportedPairing, "hard sigmoid with zero beta");
  if (is_zero_vector(anchor.x)) return 0.5 * dual;
  const std::vector<double> a = dual_achiever(spec.cost.norm, spec.beta);
  bool shifted = anchor.x.size() == a.size();
  for (std::size_t i = 0; shifted && i < a.size(); ++i)
    shifted = anchor.x[i] == -3.0 * a[i] / dual;
  if (shifted) return 0.25 * dual;
  fail(ErrorCode::UnsupportedPairing, "hard sigmoid certificate exists only at its two anchors");
}

double bce_constant(const LossSpec& spec, const Point& anchor) {
  if (anchor.kind != PointKind::Plain || anchor.x.size() != 1)
    fail(ErrorCode::VariantMismatch, "binary cross-entropy expects scalar plain points");
  const double zhat = anchor.x[0];
  const double beta = spec.beta[0];
  if (zhat <= 0.0 || zhat > 0.5)
    fail(ErrorCode::UnsupportedPairing, "binary cross-entropy anchors must lie in (0, 1/2]");
  return -beta * std::log(beta * zhat) - (1.0 / zhat - beta) * std::log(1.0 - beta * zhat);
}

}  // namespace

double lipschitz_constant_at(const LossSpec& spec, const Point& anchor) {
  if (spec.family == LossFamily::BinaryCrossEntropy) return bce_constant(spec, anchor);
  if (spec.family == LossFamily::HardSigmoid) return hard_sigmoid_constant(spec, anchor);
  return global_constant(spec);
}

double regularizer_constant(const LossSpec& spec) { return global_constant(spec); }

LipschitzCertificate weak_lipschitz(const LossSpec& spec) {
  if (per_point_family(spec.family))
    fail(ErrorCode::UnsupportedPairing,
         "per-point family needs anchors; pass the empirical distribution");
  LipschitzCertificate cert;
  cert.constant = global_constant(spec);
  cert.scope = LipschitzScope::Global;
  if (cert.constant <= 0.0)
    fail(ErrorCode::UnsupportedPairing, "degenerate (zero) Lipschitz constant");
  return cert;
}

LipschitzCertificate weak_lipschitz(const LossSpec& spec, const DiscreteDistribution& dist) {
  if (!per_point_family(spec.family)) return weak_lipschitz(spec);
  LipschitzCertificate cert;
  cert.scope = LipschitzScope::PerPoint;
  cert.conditional = true;  // the identity only holds inside the radius regime
  cert.per_point.reserve(dist.size());
  double best = 0.0;
  for (const Point& a : dist.atoms()) {
    const double c = lipschitz_constant_at(spec, a);
    cert.per_point.push_back(c);
    best = std::max(best, c);
  }
  cert.constant = best;
  if (cert.constant <= 0.0)
    fail(ErrorCode::UnsupportedPairing, "degenerate (zero) Lipschitz constant");
  return cert;
}

namespace {

// A sample-space displacement with unit cost and exact attainment of the
// linear form's constant. dx applies to features (or sampled values), dy to
// the label coordinate.
struct UnitDirection {
  std::vector<double> dx;
  double dy = 0.0;
};

UnitDirection regression_direction(const LossSpec& spec) {
  UnitDirection dir;
  switch (spec.cost.kind) {
    case CostKind::FullNorm: {
      std::vector<double> v(spec.beta.size() + 1);
      for (std::size_t i = 0; i < spec.beta.size(); ++i) v[i] = -spec.beta[i];
      v.back() = 1.0;
      std::vector<double> c = dual_achiever(spec.cost.norm, v);
      dir.dy = c.back();
      c.pop_back();
      dir.dx = std::move(c);
      return dir;
    }
    case CostKind::FeatureNormLabelIndicator: {
      std::vector<double> a = dual_achiever(spec.cost.norm, spec.beta);
      for (double& ai : a) ai = -ai;
      dir.dx = std::move(a);
      return dir;
    }
    case CostKind::SubsetNorm: {
      std::vector<double> sub;
      for (int idx : spec.cost.index_set) sub.push_back(spec.beta[static_cast<std::size_t>(idx)]);
      const std::vector<double> a = dual_achiever(spec.cost.norm, sub);
      dir.dx.assign(spec.beta.size(), 0.0);
      for (std::size_t k = 0; k < spec.cost.index_set.size(); ++k)
        dir.dx[static_cast<std::size_t>(spec.cost.index_set[k])] = -a[k];
      return dir;
    }
    case CostKind::SemiNormB: {
      const Matrix& B = spec.cost.B;
      std::vector<double> bb(B.rows, 0.0);
      for (std::size_t i = 0; i < B.rows; ++i)
        for (std::size_t j = 0; j < B.cols; ++j) bb[i] += B.at(i, j) * spec.beta[j];
      const double nb = norm_value(GroundNorm::l2(), bb);
      if (nb == 0.0) fail(ErrorCode::ZeroVector, "seminorm direction undefined for B beta = 0");
      dir.dx.assign(B.cols, 0.0);
      for (std::size_t j = 0; j < B.cols; ++j)
        for (std::size_t i = 0; i < B.rows; ++i) dir.dx[j] -= B.at(i, j) * bb[i] / nb;
      return dir;
    }
    case CostKind::AbsoluteScalar:
      dir.dy = 1.0;
      return dir;
    default:
      fail(ErrorCode::UnsupportedPairing, "no witness direction for this cost");
  }
}

UnitDirection functional_direction(const LossSpec& spec) {
  const double L = global_constant(spec);
  if (L == 0.0) fail(ErrorCode::ZeroVector, "functional direction undefined for zero beta");
  UnitDirection dir;
  dir.dx.resize(spec.beta_values.size());
  for (std::size_t i = 0; i < dir.dx.size(); ++i) dir.dx[i] = -spec.beta_values[i] / L;
  return dir;
}

Point shifted(const Point& anchor, const UnitDirection& dir, double scale) {
  Point z = anchor;
  for (std::size_t i = 0; i < dir.dx.size(); ++i) z.x[i] += scale * dir.dx[i];
  if (anchor.kind == PointKind::Labeled) z.y += scale * dir.dy;
  return z;
}

struct PiecewiseLinearView {
  double phi;         // linear-form value at the anchor
  double active_gap;  // <= 0 when the slope is exactly attained from the anchor
  double move_sign;   // direction multiplier that raises the kernel
};

PiecewiseLinearView linear_view(const LossSpec& spec, const Point& anchor) {
  switch (spec.family) {
    case LossFamily::AbsLinear:
    case LossFamily::CvarAbsResidual: {
      const double phi = residual(spec, anchor);
      return {phi, 0.0, sgn(phi)};
    }
    case LossFamily::LowerPartial: {
      const double phi = residual(spec, anchor);
      return {phi, spec.tau - phi, 1.0};
    }
    case LossFamily::TauInsensitive: {
      const double phi = residual(spec, anchor);
      return {phi, spec.tau - std::abs(phi), sgn(phi)};
    }
    case LossFamily::FunctionalLinear: {
      const double phi = functional_residual(spec, anchor);
      if (spec.shape == FunctionalShape::Abs) return {phi, 0.0, sgn(phi)};
      if (spec.shape == FunctionalShape::Lpm) return {phi, spec.tau - phi, 1.0};
      return {phi, spec.tau - std::abs(phi), sgn(phi)};
    }
    default:
      fail(ErrorCode::Internal, "not a piecewise-linear regression family");
  }
}

Point verify_witness(const LossSpec& spec, const Point& anchor, Point cand, double L,
                     double epsilon, double delta, WitnessMode mode, double target) {
  const double d = eval_cost(spec.cost, cand, anchor);
  if (!std::isfinite(d) || d < 0.0)
    fail(ErrorCode::WitnessNotFound, "constructed witness has non-finite cost");
  if (mode == WitnessMode::SlopeAtDistance) {
    if (d + 1e-12 * (1.0 + delta) < delta)
      fail(ErrorCode::WitnessNotFound, "witness distance fell short of delta");
  } else if (std::abs(d - target) > 1e-12 * (1.0 + std::abs(target))) {
    fail(ErrorCode::WitnessNotFound, "witness distance missed the exact target");
  }
  if (d > 0.0) {
    const double gain = eval_psi(spec, cand) - eval_psi(spec, anchor);
    if (gain < (L - epsilon) * d - 1e-12 * (1.0 + std::abs(gain)))
      fail(ErrorCode::WitnessNotFound, "witness slope fell below L - epsilon");
  }
  return cand;
}

double far_kernel_quotient(const LossSpec& spec, double t0, double step) {
  // (h(t0 + step) - h(t0)) / |step| for the nonlinear kernels.
  auto h = [&](double t) -> double {
    switch (spec.family) {
      case LossFamily::LogCosh: return log_cosh(t);
      case LossFamily::Huber: return std::abs(t) <= 1.0 ? 0.5 * t * t : std::abs(t) - 0.5;
      case LossFamily::Quantile: return t >= 0.0 ? spec.gamma * t : -t;
      case LossFamily::LogExp: return log_exp(t);
      case LossFamily::SmoothHinge:
        if (t >= 1.0) return 0.0;
        if (t > 0.0) return 0.5 * (1.0 - t) * (1.0 - t);
        return 0.5 - t;
      case LossFamily::TruncPinball:
        if (t <= 1.0) return 1.0 - t;
        if (t < spec.tau2 + 1.0) return spec.tau1 * (t - 1.0);
        return spec.tau1 * spec.tau2;
      default:
        fail(ErrorCode::Internal, "kernel quotient for a non-kernel family");
    }
  };
  return (h(t0 + step) - h(t0)) / std::abs(step);
}

}  // namespace

Point witness(const LossSpec& spec, const Point& anchor, double epsilon, double delta,
              WitnessMode mode, double target) {
  const double L = lipschitz_constant_at(spec, anchor);
  if (!(epsilon > 0.0) || epsilon >= L)
    fail(ErrorCode::EpsilonOutOfRange, "epsilon must lie in (0, L)");
  if (delta < 0.0) fail(ErrorCode::DomainError, "delta must be nonnegative");
  if (mode == WitnessMode::ExactDistance && target <= 0.0) return anchor;

  switch (spec.family) {
    case LossFamily::AbsLinear:
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
    case LossFamily::CvarAbsResidual:
    case LossFamily::FunctionalLinear: {
      const UnitDirection dir = spec.family == LossFamily::FunctionalLinear
                                    ? functional_direction(spec)
                                    : regression_direction(spec);
      const PiecewiseLinearView view = linear_view(spec, anchor);
      double dist;
      if (mode == WitnessMode::ExactDistance) {
        dist = target;
      } else if (view.active_gap <= 0.0) {
        dist = delta > 0.0 ? delta : 1.0;
      } else {
        dist = 2.0 * view.active_gap / epsilon + std::max(delta, 1e-12);
      }
      Point cand = shifted(anchor, dir, view.move_sign * dist);
      return verify_witness(spec, anchor, std::move(cand), L, epsilon, delta, mode, target);
    }

    case LossFamily::HingePow:
    case LossFamily::SvmAbsPow:
    case LossFamily::CvarMargin: {
      const std::vector<double> a = dual_achiever(spec.cost.norm, spec.beta);
      const double m0 = margin(spec, anchor);
      double active_gap = 0.0;
      double s = 1.0;  // x moves along -s * y * a
      if (spec.family == LossFamily::HingePow) {
        active_gap = m0 - spec.threshold;
      } else if (spec.family == LossFamily::SvmAbsPow) {
        s = sgn(spec.threshold - m0);
      }
      double dist;
      if (mode == WitnessMode::ExactDistance) {
        dist = target;
      } else if (active_gap <= 0.0) {
        dist = delta > 0.0 ? delta : 1.0;
      } else {
        dist = 2.0 * active_gap / epsilon + std::max(delta, 1e-12);
      }
      Point cand = anchor;
      for (std::size_t i = 0; i < a.size(); ++i) cand.x[i] -= s * anchor.y * dist * a[i];
      return verify_witness(spec, anchor, std::move(cand), L, epsilon, delta, mode, target);
    }

    case LossFamily::LogCosh:
    case LossFamily::Huber:
    case LossFamily::Quantile:
    case LossFamily::LogExp:
    case LossFamily::SmoothHinge:
    case LossFamily::TruncPinball: {
      const bool classification = expected_point_kind(spec.family) == PointKind::Binary;
      const UnitDirection dir = classification
                                    ? UnitDirection{dual_achiever(spec.cost.norm, spec.beta), 0.0}
                                    : regression_direction(spec);
      const double lphi =
          classification ? dual_norm(spec.cost.norm, spec.beta) : global_constant(spec);
      const double t0 = classification ? margin(spec, anchor) : residual(spec, anchor);
      const double kernel_sign =
          (spec.family == LossFamily::LogCosh || spec.family == LossFamily::Huber) ? 1.0 : -1.0;
      // Grow the kernel step until the (approximately attained at far range)
      // slope clears L - epsilon and the distance clears what the mode needs.
      double k = std::max({lphi * delta, lphi * target, 1.0});
      bool found = false;
      for (int it = 0; it < 60; ++it) {
        const double quotient = far_kernel_quotient(spec, t0, kernel_sign * k);
        if (quotient >= 1.0 - epsilon / (2.0 * lphi) && k / lphi >= delta) {
          found = true;
          break;
        }
        k *= 2.0;
      }
      if (!found) fail(ErrorCode::WitnessNotFound, "kernel slope never cleared L - epsilon");
      if (mode == WitnessMode::ExactDistance) k = target * lphi;
      Point cand = anchor;
      const double scale = kernel_sign * k / lphi;
      if (classification) {
        for (std::size_t i = 0; i < dir.dx.size(); ++i) cand.x[i] += scale * anchor.y * dir.dx[i];
      } else {
        // regression_direction has gain +L_phi, so the residual moves by +scale*L_phi
        for (std::size_t i = 0; i < dir.dx.size(); ++i) cand.x[i] += scale * dir.dx[i];
        cand.y += scale * dir.dy;
      }
      return verify_witness(spec, anchor, std::move(cand), L, epsilon, delta, mode, target);
    }

    case LossFamily::BinaryCrossEntropy: {
      const double zhat = anchor.x[0];
      if (delta >= zhat)
        fail(ErrorCode::WitnessNotFound, "saturated regime: delta is at least the anchor");
      if (mode == WitnessMode::ExactDistance) {
        Point cand = anchor;
        cand.x[0] = zhat - target;
        if (cand.x[0] <= 0.0)
          fail(ErrorCode::WitnessNotFound, "exact-distance witness leaves the domain");
        return verify_witness(spec, anchor, std::move(cand), L, epsilon, delta, mode, target);
      }
      double z = 0.5 * (zhat - delta);
      for (int it = 0; it < 200; ++it) {
        Point cand = anchor;
        cand.x[0] = z;
        const double d = zhat - z;
        const double gain = eval_psi(spec, cand) - eval_psi(spec, anchor);
        if (d >= delta && gain >= (L - epsilon) * d) return cand;
        z *= 0.5;
        if (z <= 0.0) break;
      }
      fail(ErrorCode::WitnessNotFound, "binary cross-entropy witness search exhausted");
    }

    case LossFamily::HardSigmoid: {
      const double dual = dual_norm(spec.cost.norm, spec.beta);
      const std::vector<double> a = dual_achiever(spec.cost.norm, spec.beta);
      Point cand = anchor;
      for (std::size_t i = 0; i < a.size(); ++i) cand.x[i] = a[i] / dual;
      // The witness sits at distance 1/||beta||_* from the origin anchor and
      // 4/||beta||_* from the shifted anchor; delta beyond that regime means
      // the assumption fails.
      return verify_witness(spec, anchor, std::move(cand), L, epsilon, delta, mode, target);
    }

    case LossFamily::RidgeSquare: {
      std::vector<double> c(spec.beta);
      c.push_back(1.0);
      const double cn = norm_value(GroundNorm::l2(), c);
      for (double& ci : c) ci /= cn;
      auto at_scale = [&](double k) {
        Point cand = anchor;
        for (std::size_t i = 0; i < spec.beta.size(); ++i) cand.x[i] += k * c[i];
        cand.y += k * c.back();
        return cand;
      };
      double k = 1.0;
      bool found = false;
      double d = 0.0;
      for (int it = 0; it < 200; ++it) {
        Point cand = at_scale(k);
        d = eval_cost(spec.cost, cand, anchor);
        const double gain = eval_psi(spec, cand) - eval_psi(spec, anchor);
        const double need = mode == WitnessMode::ExactDistance ? target : delta;
        if (d >= need && gain >= (L - epsilon) * d) {
          found = true;
          break;
        }
        k *= 2.0;
      }
      if (!found) fail(ErrorCode::WitnessNotFound, "ridge witness search exhausted");
      if (mode == WitnessMode::ExactDistance) {
        // Bisect on the increasing tail of k -> d(k) to pin the distance.
        double lo = 0.0, hi = k;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (eval_cost(spec.cost, at_scale(mid), anchor) >= target)
            hi = mid;
          else
            lo = mid;
        }
        k = hi;
      }
      return verify_witness(spec, anchor, at_scale(k), L, epsilon, delta, mode, target);
    }

    case LossFamily::Hmcr: {
      const std::vector<double> a = dual_achiever(spec.cost.norm, spec.beta);
      const double dist = mode == WitnessMode::ExactDistance ? target
                          : delta > 0.0                      ? delta
                                                             : 1.0;
      Point cand = anchor;
      for (std::size_t i = 0; i < a.size(); ++i) cand.x[i] += dist * a[i];
      return verify_witness(spec, anchor, std::move(cand), L, epsilon, delta, mode, target);
    }
  }
  fail(ErrorCode::Internal, "unhandled witness family");
}

double empirical_lipschitz(const LossSpec& spec, const Point& anchor,
                           std::span<const Point> probes) {
  if (probes.empty()) fail(ErrorCode::NoFiniteCostProbe, "empty probe grid");
  const double psi0 = eval_psi(spec, anchor);
  double best = -1.0;
  for (const Point& z : probes) {
    const double d = eval_cost(spec.cost, z, anchor);
    if (d == 0.0 || std::isinf(d)) continue;
    best = std::max(best, std::abs(eval_psi(spec, z) - psi0) / d);
  }
  if (best < 0.0) fail(ErrorCode::NoFiniteCostProbe, "no probe with finite positive cost");
  return best;
}

}  // namespace wdro
