// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/distribution.hpp"

#include <cmath>
#include <limits>

namespace wdro {

DiscreteDistribution DiscreteDistribution::make(std::vector<Point> atoms,
                                                std::vector<double> weights) {
  if (atoms.empty()) fail(ErrorCode::EmptyAtoms, "a distribution needs at least one atom");
  if (atoms.size() != weights.size())
    fail(ErrorCode::DimensionMismatch, "atom and weight counts differ");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) fail(ErrorCode::NegativeWeight, "weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(ErrorCode::WeightSumMismatch, "weights sum to " + std::to_string(sum));
  for (const Point& a : atoms)
    if (!a.same_shape(atoms.front()))
      fail(ErrorCode::DimensionMismatch, "atoms must share one variant and one dimension");
  // Rescale accumulated drift, but keep already-normalized weights bit-stable
  // so serialization round-trips are exact.
  if (std::abs(sum - 1.0) > 8.0 * std::numeric_limits<double>::epsilon() * weights.size())
    for (double& w : weights) w /= sum;

  DiscreteDistribution d;
  d.atoms_ = std::move(atoms);
  d.weights_ = std::move(weights);
  return d;
}

DiscreteDistribution DiscreteDistribution::point_mass(Point atom) {
  return make({std::move(atom)}, {1.0});
}

double DiscreteDistribution::expectation(const std::function<double(const Point&)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * f(atoms_[i]);
  return s;
}

DiscreteDistribution mix(const std::vector<DiscreteDistribution>& components,
                         const std::vector<double>& weights) {
  if (components.empty()) fail(ErrorCode::EmptyAtoms, "mix of zero components");
  if (components.size() != weights.size())
    fail(ErrorCode::DimensionMismatch, "component and weight counts differ");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) fail(ErrorCode::NegativeWeight, "mixture weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(ErrorCode::WeightSumMismatch, "mixture weights sum to " + std::to_string(sum));

  const Point& ref = components.front().atom(0);
  std::vector<Point> atoms;
  std::vector<double> merged;
  for (std::size_t k = 0; k < components.size(); ++k) {
    for (std::size_t i = 0; i < components[k].size(); ++i) {
      const Point& a = components[k].atom(i);
      if (!a.same_shape(ref))
        fail(ErrorCode::DimensionMismatch, "mixture components are dimension-incompatible");
      const double w = weights[k] * components[k].weight(i);
      if (w == 0.0) continue;
      bool found = false;
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (atoms[j].exactly_equal(a)) {
          merged[j] += w;
          found = true;
          break;
        }
      }
      if (!found) {
        atoms.push_back(a);
        merged.push_back(w);
      }
    }
  }
  return DiscreteDistribution::make(std::move(atoms), std::move(merged));
}

Coupling Coupling::make(std::vector<double> matrix, std::vector<double> row_marginal,
                        std::vector<double> col_marginal) {
  const std::size_t n = row_marginal.size();
  const std::size_t m = col_marginal.size();
  if (matrix.size() != n * m) fail(ErrorCode::DimensionMismatch, "coupling matrix size mismatch");
  for (double v : matrix)
    if (v < 0.0) fail(ErrorCode::InvalidCoupling, "coupling entries must be nonnegative");
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < m; ++j) rs += matrix[i * m + j];
    if (std::abs(rs - row_marginal[i]) > 1e-9)
      fail(ErrorCode::InvalidCoupling, "row marginal violated at row " + std::to_string(i));
  }
  for (std::size_t j = 0; j < m; ++j) {
    double cs = 0.0;
    for (std::size_t i = 0; i < n; ++i) cs += matrix[i * m + j];
    if (std::abs(cs - col_marginal[j]) > 1e-9)
      fail(ErrorCode::InvalidCoupling, "column marginal violated at column " + std::to_string(j));
  }
  Coupling c;
  c.matrix_ = std::move(matrix);
  c.row_marginal_ = std::move(row_marginal);
  c.col_marginal_ = std::move(col_marginal);
  return c;
}

Coupling Coupling::independent(const std::vector<double>& mu, const std::vector<double>& nu) {
  std::vector<double> m(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) m[i * nu.size() + j] = mu[i] * nu[j];
  return make(std::move(m), mu, nu);
}

}  // namespace wdro
