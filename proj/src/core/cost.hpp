// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_COST_HPP
#define WDRO_CORE_COST_HPP

#include <vector>

#include "core/norms.hpp"
#include "core/point.hpp"

namespace wdro {

// Small dense row-major matrix; enough for the s x n cost parameters here.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

enum class CostKind {
  FullNorm,                  // ||[x'-x; y'-y]|| on labeled pairs
  FeatureNormLabelIndicator, // ||x'-x|| + indicator{y'=y}
  SubsetNorm,                // norm on an index subset, indicator on the rest
  SemiNormB,                 // min-norm preimage seminorm, L2 ground norm
  ProductCost,               // ||z'-z||_2 ||z'+z||_2 on the concatenated pair
  L2FunctionLabelIndicator,  // quadrature L2 on sampled functions + label indicator
  PlainNorm,                 // ||z'-z|| on plain vectors
  AbsoluteScalar,            // |z'-z| on scalars (plain 1-d or feature-free labeled)
};

const char* cost_kind_name(CostKind kind);

struct CostSpec {
  CostKind kind = CostKind::PlainNorm;
  GroundNorm norm;             // norm-bearing variants
  std::vector<int> index_set;  // SubsetNorm: sorted, nonempty, within dimension
  Matrix B;                    // SemiNormB

  static CostSpec full_norm(GroundNorm n) { return {CostKind::FullNorm, std::move(n), {}, {}}; }
  static CostSpec feature_norm_label_indicator(GroundNorm n) {
    return {CostKind::FeatureNormLabelIndicator, std::move(n), {}, {}};
  }
  static CostSpec subset_norm(GroundNorm n, std::vector<int> idx);
  static CostSpec semi_norm_b(Matrix b);
  static CostSpec product_cost() { return {CostKind::ProductCost, {}, {}, {}}; }
  static CostSpec l2_function_label_indicator() {
    return {CostKind::L2FunctionLabelIndicator, {}, {}, {}};
  }
  static CostSpec plain_norm(GroundNorm n) { return {CostKind::PlainNorm, std::move(n), {}, {}}; }
  static CostSpec absolute_scalar() { return {CostKind::AbsoluteScalar, {}, {}, {}}; }
};

// Extended-real cost evaluation; +infinity is the explicit marker for
// violated indicator blocks (exact comparison) and out-of-range seminorms.
double eval_cost(const CostSpec& spec, const Point& z1, const Point& z2);

// Minimum L2 norm of a preimage of v under B^T, +infinity when v is outside
// Range(B^T). Exposed for the seminorm tests.
double min_norm_preimage(const Matrix& B, const std::vector<double>& v);

}  // namespace wdro

#endif
