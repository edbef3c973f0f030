// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_LOSS_HPP
#define WDRO_CORE_LOSS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/cost.hpp"
#include "core/distribution.hpp"

namespace wdro {

enum class LossFamily {
  AbsLinear,
  LowerPartial,
  TauInsensitive,
  LogCosh,
  Huber,
  Quantile,
  HingePow,
  SvmAbsPow,
  LogExp,
  SmoothHinge,
  TruncPinball,
  BinaryCrossEntropy,
  HardSigmoid,
  RidgeSquare,
  FunctionalLinear,
  CvarAbsResidual,
  CvarMargin,
  Hmcr,
};

enum class FunctionalShape { Abs, Lpm, Insens };

const char* loss_family_name(LossFamily family);
const char* functional_shape_name(FunctionalShape shape);

// A loss family instance: the kernel psi_beta, its exponent r, and the cost
// it is paired with. Construction validates parameter ranges, the r >= 1
// gate for sign-indefinite kernels, and the (family x cost) catalog.
struct LossSpec {
  LossFamily family = LossFamily::AbsLinear;
  std::vector<double> beta;
  double tau = 0.0;        // LowerPartial / TauInsensitive / FunctionalLinear shapes
  double gamma = 0.5;      // Quantile
  double tau1 = 0.0;       // TruncPinball
  double tau2 = 0.0;       // TruncPinball
  double alpha = 0.5;      // CVaR-style families
  double threshold = 1.0;  // HingePow / SvmAbsPow margin offset
  FunctionalShape shape = FunctionalShape::Abs;
  std::vector<double> beta_values;  // FunctionalLinear: effective coefficients on the grid
  std::vector<double> quad_w;       // FunctionalLinear quadrature weights
  Matrix basis;                     // FunctionalLinear parametric basis samples (n x nodes)
  double r = 1.0;
  CostSpec cost;

  static LossSpec make(LossFamily family, std::vector<double> beta, double r, CostSpec cost);
  LossSpec& with_tau(double t);
  LossSpec& with_gamma(double g);
  LossSpec& with_pinball(double t1, double t2);
  LossSpec& with_alpha(double a);
  LossSpec& with_threshold(double t);

  // Nonparametric scalar-on-function loss: beta sampled on the quadrature grid.
  static LossSpec functional(std::vector<double> beta_values, std::vector<double> quad_w,
                             FunctionalShape shape, double tau, double r);
  // Parametric variant: coefficients against basis functions sampled on the grid.
  static LossSpec functional_parametric(std::vector<double> coeffs, Matrix basis_samples,
                                        std::vector<double> quad_w, FunctionalShape shape,
                                        double tau, double r);
};

bool family_allows_r_gt1(LossFamily family);
PointKind expected_point_kind(LossFamily family);

double eval_psi(const LossSpec& spec, const Point& z);
double eval_loss(const LossSpec& spec, const Point& z);  // psi^r

enum class LipschitzScope { Global, PerDataset, PerPoint };

struct LipschitzCertificate {
  double constant = 0.0;  // the dataset-level constant (max over anchors for per-point scopes)
  LipschitzScope scope = LipschitzScope::Global;
  std::vector<double> per_point;  // filled when scope == PerPoint
  bool conditional = false;       // true when validity depends on the radius regime
};

// Closed-form constant for globally certified families; per-point families
// (binary cross-entropy, hard sigmoid) need anchors and reject this overload.
LipschitzCertificate weak_lipschitz(const LossSpec& spec);
LipschitzCertificate weak_lipschitz(const LossSpec& spec, const DiscreteDistribution& dist);
double lipschitz_constant_at(const LossSpec& spec, const Point& anchor);

// The regularizer value L(beta) without the positive-constant certificate
// gate; zero at beta = 0 and legal inside optimization loops.
double regularizer_constant(const LossSpec& spec);

enum class WitnessMode { SlopeAtDistance /* >= delta */, ExactDistance };

// A point far from the anchor where the weak-Lipschitz slope is attained up
// to epsilon. ExactDistance pins d(witness, anchor) to `target` (relative
// 1e-12); SlopeAtDistance requires d >= delta.
Point witness(const LossSpec& spec, const Point& anchor, double epsilon, double delta,
              WitnessMode mode, double target = 0.0);

// Grid supremum of |psi(z') - psi(anchor)| / d(z', anchor); test oracle for
// the closed-form constants. Probes at cost 0 or +infinity are skipped.
double empirical_lipschitz(const LossSpec& spec, const Point& anchor,
                           std::span<const Point> probes);

}  // namespace wdro

#endif
