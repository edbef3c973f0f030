// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_NORMS_HPP
#define WDRO_CORE_NORMS_HPP

#include <vector>

#include "core/error.hpp"

namespace wdro {

enum class NormKind { L1, L2, Linf, WeightedL2 };

const char* norm_kind_name(NormKind kind);

struct GroundNorm {
  NormKind kind = NormKind::L2;
  std::vector<double> weights;  // WeightedL2 only, strictly positive

  static GroundNorm l1() { return {NormKind::L1, {}}; }
  static GroundNorm l2() { return {NormKind::L2, {}}; }
  static GroundNorm linf() { return {NormKind::Linf, {}}; }
  static GroundNorm weighted_l2(std::vector<double> w);
};

double norm_value(const GroundNorm& norm, const std::vector<double>& v);

// L1 <-> Linf, L2 <-> L2, WeightedL2 <-> inverse-weighted L2. Returns 0 at v=0.
double dual_norm(const GroundNorm& norm, const std::vector<double>& v);

// A vector u with norm(u)=1 and <v,u> = dual_norm(v). For the L1 ground norm
// ties among max-magnitude coordinates go to the lowest index.
std::vector<double> dual_achiever(const GroundNorm& norm, const std::vector<double>& v);

}  // namespace wdro

#endif
