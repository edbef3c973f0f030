// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/norms.hpp"

#include <cmath>
#include <cstddef>

namespace wdro {

const char* norm_kind_name(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
    case NormKind::WeightedL2: return "weighted_l2";
  }
  return "unknown";
}

GroundNorm GroundNorm::weighted_l2(std::vector<double> w) {
  for (double wi : w)
    if (wi <= 0.0) fail(ErrorCode::DomainError, "weighted L2 requires strictly positive weights");
  return {NormKind::WeightedL2, std::move(w)};
}

namespace {

void check_dim(const GroundNorm& norm, const std::vector<double>& v) {
  if (norm.kind == NormKind::WeightedL2 && norm.weights.size() != v.size())
    fail(ErrorCode::DimensionMismatch, "weighted L2 weight length differs from vector length");
}

double sgn(double t) { return t < 0.0 ? -1.0 : 1.0; }

}  // namespace

double norm_value(const GroundNorm& norm, const std::vector<double>& v) {
  check_dim(norm, v);
  double s = 0.0;
  switch (norm.kind) {
    case NormKind::L1:
      for (double vi : v) s += std::abs(vi);
      return s;
    case NormKind::L2:
      for (double vi : v) s += vi * vi;
      return std::sqrt(s);
    case NormKind::Linf:
      for (double vi : v) s = std::max(s, std::abs(vi));
      return s;
    case NormKind::WeightedL2:
      for (std::size_t i = 0; i < v.size(); ++i) s += norm.weights[i] * v[i] * v[i];
      return std::sqrt(s);
  }
  return 0.0;
}

double dual_norm(const GroundNorm& norm, const std::vector<double>& v) {
  check_dim(norm, v);
  double s = 0.0;
  switch (norm.kind) {
    case NormKind::L1:
      for (double vi : v) s = std::max(s, std::abs(vi));
      return s;
    case NormKind::L2:
      for (double vi : v) s += vi * vi;
      return std::sqrt(s);
    case NormKind::Linf:
      for (double vi : v) s += std::abs(vi);
      return s;
    case NormKind::WeightedL2:
      for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i] / norm.weights[i];
      return std::sqrt(s);
  }
  return 0.0;
}

std::vector<double> dual_achiever(const GroundNorm& norm, const std::vector<double>& v) {
  check_dim(norm, v);
  const double dual = dual_norm(norm, v);
  if (dual == 0.0) fail(ErrorCode::ZeroVector, "dual achiever of the zero vector is undefined");
  std::vector<double> u(v.size(), 0.0);
  switch (norm.kind) {
    case NormKind::L1: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
      u[best] = sgn(v[best]);
      return u;
    }
    case NormKind::L2:
      for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / dual;
      return u;
    case NormKind::Linf:
      for (std::size_t i = 0; i < v.size(); ++i) u[i] = sgn(v[i]);
      return u;
    case NormKind::WeightedL2:
      for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / (norm.weights[i] * dual);
      return u;
  }
  return u;
}

}  // namespace wdro
