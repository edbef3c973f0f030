// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_JSON_IO_HPP
#define WDRO_CORE_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "core/solver.hpp"

namespace wdro {

using Json = nlohmann::json;

Json to_json(const GroundNorm& norm);
GroundNorm norm_from_json(const Json& j);

Json to_json(const CostSpec& cost);
CostSpec cost_from_json(const Json& j);

Json to_json(const Point& p);

Json to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const Json& j);

Json to_json(const LossSpec& spec);
LossSpec loss_from_json(const Json& j);

Json to_json(const BoundsReport& report);
Json to_json(const WorstCaseCertificate& cert);
Json to_json(const SolveResult& result);

// 17 significant digits; round-trips doubles exactly.
std::string format_double(double v);

}  // namespace wdro

#endif
