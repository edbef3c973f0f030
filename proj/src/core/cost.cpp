// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wdro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "point dimensions differ");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

void require_kind(const Point& z, PointKind kind, const char* cost) {
  if (z.kind != kind)
    fail(ErrorCode::VariantMismatch,
         std::string(cost) + " expects " + point_kind_name(kind) + " points, got " +
             point_kind_name(z.kind));
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Desk-scale only.
void jacobi_eigen(const std::vector<double>& sym, std::size_t n, std::vector<double>& eigvals,
                  std::vector<double>& eigvecs) {
  std::vector<double> a = sym;
  eigvecs.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eigvecs[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = eigvecs[k * n + p];
          const double vkq = eigvecs[k * n + q];
          eigvecs[k * n + p] = c * vkp - s * vkq;
          eigvecs[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigvals.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigvals[i] = a[i * n + i];
}

}  // namespace

const char* cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::FullNorm: return "full_norm";
    case CostKind::FeatureNormLabelIndicator: return "feature_norm_label_indicator";
    case CostKind::SubsetNorm: return "subset_norm";
    case CostKind::SemiNormB: return "semi_norm_b";
    case CostKind::ProductCost: return "product_cost";
    case CostKind::L2FunctionLabelIndicator: return "l2_function_label_indicator";
    case CostKind::PlainNorm: return "plain_norm";
    case CostKind::AbsoluteScalar: return "absolute_scalar";
  }
  return "unknown";
}

CostSpec CostSpec::subset_norm(GroundNorm n, std::vector<int> idx) {
  if (idx.empty()) fail(ErrorCode::DomainError, "subset norm index set must be nonempty");
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    if (idx[i] == idx[i + 1]) fail(ErrorCode::DomainError, "subset norm index set has duplicates");
  if (idx.front() < 0) fail(ErrorCode::DomainError, "subset norm indices must be nonnegative");
  return {CostKind::SubsetNorm, std::move(n), std::move(idx), {}};
}

CostSpec CostSpec::semi_norm_b(Matrix b) {
  if (b.rows == 0 || b.cols == 0 || b.a.size() != b.rows * b.cols)
    fail(ErrorCode::DimensionMismatch, "seminorm matrix is malformed");
  return {CostKind::SemiNormB, {}, {}, std::move(b)};
}

double min_norm_preimage(const Matrix& B, const std::vector<double>& v) {
  const std::size_t s = B.rows, n = B.cols;
  if (v.size() != n) fail(ErrorCode::DimensionMismatch, "seminorm argument dimension mismatch");
  double vnorm = 0.0;
  for (double vi : v) vnorm += vi * vi;
  vnorm = std::sqrt(vnorm);
  if (vnorm == 0.0) return 0.0;

  // Minimum-norm solution of B^T xbar = v lies in Range(B): xbar = B w with
  // (B^T B) w = v, and then ||xbar||^2 = <w, v>.
  std::vector<double> gram(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < s; ++k) g += B.at(k, i) * B.at(k, j);
      gram[i * n + j] = g;
    }
  std::vector<double> eigvals, eigvecs;
  jacobi_eigen(gram, n, eigvals, eigvecs);
  double lam_max = 0.0;
  for (double l : eigvals) lam_max = std::max(lam_max, std::abs(l));
  const double rank_tol = std::max(1e-13 * lam_max, 1e-300);

  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(eigvals[k]) <= rank_tol) continue;
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += eigvecs[i * n + k] * v[i];
    const double scale = proj / eigvals[k];
    for (std::size_t i = 0; i < n; ++i) w[i] += scale * eigvecs[i * n + k];
  }
  // Range test: the normal equations must be consistent.
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double gi = 0.0;
    for (std::size_t j = 0; j < n; ++j) gi += gram[i * n + j] * w[j];
    resid += (gi - v[i]) * (gi - v[i]);
  }
  if (std::sqrt(resid) > 1e-9 * vnorm) return kInf;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) sq += w[i] * v[i];
  return std::sqrt(std::max(0.0, sq));
}

double eval_cost(const CostSpec& spec, const Point& z1, const Point& z2) {
  switch (spec.kind) {
    case CostKind::FullNorm: {
      require_kind(z1, PointKind::Labeled, "full_norm");
      require_kind(z2, PointKind::Labeled, "full_norm");
      std::vector<double> d = diff(z1.x, z2.x);
      d.push_back(z1.y - z2.y);
      return norm_value(spec.norm, d);
    }
    case CostKind::FeatureNormLabelIndicator: {
      if (z1.kind != PointKind::Labeled && z1.kind != PointKind::Binary)
        fail(ErrorCode::VariantMismatch, "feature_norm_label_indicator expects labeled points");
      if (z1.kind != z2.kind) fail(ErrorCode::VariantMismatch, "mixed point variants");
      if (z1.y != z2.y) return kInf;
      return norm_value(spec.norm, diff(z1.x, z2.x));
    }
    case CostKind::SubsetNorm: {
      require_kind(z1, PointKind::Labeled, "subset_norm");
      require_kind(z2, PointKind::Labeled, "subset_norm");
      const std::vector<double> d = diff(z1.x, z2.x);
      if (!spec.index_set.empty() &&
          static_cast<std::size_t>(spec.index_set.back()) >= d.size())
        fail(ErrorCode::DimensionMismatch, "subset norm index outside dimension");
      if (z1.y != z2.y) return kInf;
      std::vector<bool> in_set(d.size(), false);
      for (int idx : spec.index_set) in_set[static_cast<std::size_t>(idx)] = true;
      std::vector<double> sub;
      sub.reserve(spec.index_set.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (in_set[i])
          sub.push_back(d[i]);
        else if (d[i] != 0.0)
          return kInf;
      }
      return norm_value(spec.norm, sub);
    }
    case CostKind::SemiNormB: {
      require_kind(z1, PointKind::Labeled, "semi_norm_b");
      require_kind(z2, PointKind::Labeled, "semi_norm_b");
      if (z1.y != z2.y) return kInf;
      return min_norm_preimage(spec.B, diff(z1.x, z2.x));
    }
    case CostKind::ProductCost: {
      require_kind(z1, PointKind::Labeled, "product_cost");
      require_kind(z2, PointKind::Labeled, "product_cost");
      std::vector<double> d = diff(z1.x, z2.x);
      d.push_back(z1.y - z2.y);
      std::vector<double> s(z1.x.size() + 1);
      for (std::size_t i = 0; i < z1.x.size(); ++i) s[i] = z1.x[i] + z2.x[i];
      s.back() = z1.y + z2.y;
      const GroundNorm l2 = GroundNorm::l2();
      return norm_value(l2, d) * norm_value(l2, s);
    }
    case CostKind::L2FunctionLabelIndicator: {
      require_kind(z1, PointKind::Sampled, "l2_function_label_indicator");
      require_kind(z2, PointKind::Sampled, "l2_function_label_indicator");
      if (z1.y != z2.y) return kInf;
      const std::vector<double> d = diff(z1.x, z2.x);
      double s = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) s += z1.quad_w[i] * d[i] * d[i];
      return std::sqrt(s);
    }
    case CostKind::PlainNorm: {
      require_kind(z1, PointKind::Plain, "plain_norm");
      require_kind(z2, PointKind::Plain, "plain_norm");
      return norm_value(spec.norm, diff(z1.x, z2.x));
    }
    case CostKind::AbsoluteScalar: {
      if (z1.kind != z2.kind) fail(ErrorCode::VariantMismatch, "mixed point variants");
      if (z1.kind == PointKind::Plain) {
        if (z1.x.size() != 1 || z2.x.size() != 1)
          fail(ErrorCode::DimensionMismatch, "absolute_scalar expects scalar points");
        return std::abs(z1.x[0] - z2.x[0]);
      }
      if (z1.kind == PointKind::Labeled && z1.x.empty() && z2.x.empty())
        return std::abs(z1.y - z2.y);
      fail(ErrorCode::VariantMismatch, "absolute_scalar expects scalar points");
    }
  }
  fail(ErrorCode::Internal, "unhandled cost kind");
}

}  // namespace wdro
