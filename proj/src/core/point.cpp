// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/point.hpp"

#include <cmath>

namespace wdro {

const char* point_kind_name(PointKind kind) {
  switch (kind) {
    case PointKind::Plain: return "plain";
    case PointKind::Labeled: return "labeled";
    case PointKind::Binary: return "binary";
    case PointKind::Sampled: return "sampled";
  }
  return "unknown";
}

Point Point::plain(std::vector<double> v) {
  Point p;
  p.kind = PointKind::Plain;
  p.x = std::move(v);
  return p;
}

Point Point::labeled(std::vector<double> x, double y) {
  Point p;
  p.kind = PointKind::Labeled;
  p.x = std::move(x);
  p.y = y;
  return p;
}

Point Point::binary(std::vector<double> x, int y) {
  if (y != 1 && y != -1) fail(ErrorCode::DomainError, "binary label must be -1 or +1");
  Point p;
  p.kind = PointKind::Binary;
  p.x = std::move(x);
  p.y = static_cast<double>(y);
  return p;
}

Point Point::sampled(std::vector<double> values, std::vector<double> quad_w, double y) {
  if (values.size() != quad_w.size())
    fail(ErrorCode::DimensionMismatch, "sampled values and quadrature weights differ in length");
  double sum = 0.0;
  for (double w : quad_w) {
    if (w <= 0.0) fail(ErrorCode::DomainError, "quadrature weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    fail(ErrorCode::DomainError, "quadrature weights must sum to 1 within 1e-12");
  Point p;
  p.kind = PointKind::Sampled;
  p.x = std::move(values);
  p.quad_w = std::move(quad_w);
  p.y = y;
  return p;
}

bool Point::same_shape(const Point& other) const {
  return kind == other.kind && x.size() == other.x.size() && quad_w.size() == other.quad_w.size();
}

bool Point::exactly_equal(const Point& other) const {
  if (!same_shape(other)) return false;
  if (kind != PointKind::Plain && y != other.y) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != other.x[i]) return false;
  for (std::size_t i = 0; i < quad_w.size(); ++i)
    if (quad_w[i] != other.quad_w[i]) return false;
  return true;
}

std::vector<double> trapezoid_weights(std::size_t nodes) {
  if (nodes < 2) fail(ErrorCode::DomainError, "trapezoid rule needs at least 2 nodes");
  const double h = 1.0 / static_cast<double>(nodes - 1);
  std::vector<double> w(nodes, h);
  w.front() = h / 2.0;
  w.back() = h / 2.0;
  return w;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace wdro
