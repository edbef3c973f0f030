// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_DISTRIBUTION_HPP
#define WDRO_CORE_DISTRIBUTION_HPP

#include <functional>
#include <vector>

#include "core/point.hpp"

namespace wdro {

// Finite atomic probability distribution. Immutable after construction; the
// default-constructed state is an empty placeholder used only as a result slot.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  // Weights must be nonnegative and sum to 1 within 1e-9 (they are rescaled
  // to an exact unit sum afterwards).
  static DiscreteDistribution make(std::vector<Point> atoms, std::vector<double> weights);

  static DiscreteDistribution point_mass(Point atom);

  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  double expectation(const std::function<double(const Point&)>& f) const;

 private:
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

// Atom-union mixture. Duplicate atoms (exact coordinate equality) are merged
// by weight addition; exact zero weights are dropped.
DiscreteDistribution mix(const std::vector<DiscreteDistribution>& components,
                         const std::vector<double>& weights);

// Joint matrix with prescribed marginals, row-major N x M.
class Coupling {
 public:
  Coupling() = default;

  static Coupling make(std::vector<double> matrix, std::vector<double> row_marginal,
                       std::vector<double> col_marginal);

  static Coupling independent(const std::vector<double>& mu, const std::vector<double>& nu);

  std::size_t rows() const { return row_marginal_.size(); }
  std::size_t cols() const { return col_marginal_.size(); }
  double at(std::size_t i, std::size_t j) const { return matrix_[i * cols() + j]; }
  const std::vector<double>& matrix() const { return matrix_; }
  const std::vector<double>& row_marginal() const { return row_marginal_; }
  const std::vector<double>& col_marginal() const { return col_marginal_; }

 private:
  std::vector<double> matrix_;
  std::vector<double> row_marginal_;
  std::vector<double> col_marginal_;
};

}  // namespace wdro

#endif
