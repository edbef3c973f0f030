// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_POINT_HPP
#define WDRO_CORE_POINT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace wdro {

enum class PointKind { Plain, Labeled, Binary, Sampled };

const char* point_kind_name(PointKind kind);

// One element of the sample space. `x` holds the vector payload (plain
// coordinates, features, or function values on a quadrature grid of [0,1]);
// `y` is the label when the variant carries one. Sampled points own their
// quadrature weights so downstream evaluations never guess a grid.
struct Point {
  PointKind kind = PointKind::Plain;
  std::vector<double> x;
  double y = 0.0;
  std::vector<double> quad_w;

  static Point plain(std::vector<double> v);
  static Point labeled(std::vector<double> x, double y);
  static Point binary(std::vector<double> x, int y);
  static Point sampled(std::vector<double> values, std::vector<double> quad_w, double y);

  std::size_t dim() const { return x.size(); }
  bool same_shape(const Point& other) const;
  bool exactly_equal(const Point& other) const;
};

// Uniform composite-trapezoid quadrature weights on [0,1]; they sum to 1.
std::vector<double> trapezoid_weights(std::size_t nodes);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wdro

#endif
