// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/json_io.hpp"

#include <cstdio>

namespace wdro {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorCode::ConfigParse, what); }

std::vector<double> vec_from(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) parse_fail(std::string(what) + " must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

double num_from(const Json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    parse_fail(std::string("missing field '") + key + "'");
  }
  if (!j[key].is_number()) parse_fail(std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

std::string str_from(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    parse_fail(std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

Json to_json(const GroundNorm& norm) {
  Json j;
  j["kind"] = norm_kind_name(norm.kind);
  if (norm.kind == NormKind::WeightedL2) j["weights"] = norm.weights;
  return j;
}

GroundNorm norm_from_json(const Json& j) {
  const std::string kind = str_from(j, "kind");
  if (kind == "l1") return GroundNorm::l1();
  if (kind == "l2") return GroundNorm::l2();
  if (kind == "linf") return GroundNorm::linf();
  if (kind == "weighted_l2") return GroundNorm::weighted_l2(vec_from(j.at("weights"), "weights"));
  parse_fail("unknown norm kind '" + kind + "'");
}

Json to_json(const CostSpec& cost) {
  Json j;
  j["variant"] = cost_kind_name(cost.kind);
  switch (cost.kind) {
    case CostKind::FullNorm:
    case CostKind::FeatureNormLabelIndicator:
    case CostKind::PlainNorm:
      j["norm"] = to_json(cost.norm);
      break;
    case CostKind::SubsetNorm:
      j["norm"] = to_json(cost.norm);
      j["index_set"] = cost.index_set;
      break;
    case CostKind::SemiNormB: {
      Json rows = Json::array();
      for (std::size_t i = 0; i < cost.B.rows; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < cost.B.cols; ++k) row.push_back(cost.B.at(i, k));
        rows.push_back(std::move(row));
      }
      j["b"] = std::move(rows);
      break;
    }
    default:
      break;
  }
  return j;
}

CostSpec cost_from_json(const Json& j) {
  const std::string variant = str_from(j, "variant");
  if (variant == "full_norm") return CostSpec::full_norm(norm_from_json(j.at("norm")));
  if (variant == "feature_norm_label_indicator")
    return CostSpec::feature_norm_label_indicator(norm_from_json(j.at("norm")));
  if (variant == "subset_norm") {
    if (!j.contains("index_set") || !j["index_set"].is_array())
      parse_fail("subset_norm needs an index_set array");
    std::vector<int> idx;
    for (const auto& e : j["index_set"]) idx.push_back(e.get<int>());
    return CostSpec::subset_norm(norm_from_json(j.at("norm")), std::move(idx));
  }
  if (variant == "semi_norm_b") {
    if (!j.contains("b") || !j["b"].is_array() || j["b"].empty())
      parse_fail("semi_norm_b needs a row-major matrix 'b'");
    Matrix B;
    B.rows = j["b"].size();
    B.cols = j["b"][0].size();
    for (const auto& row : j["b"]) {
      if (row.size() != B.cols) parse_fail("semi_norm_b rows have unequal lengths");
      for (const auto& e : row) B.a.push_back(e.get<double>());
    }
    return CostSpec::semi_norm_b(std::move(B));
  }
  if (variant == "product_cost") return CostSpec::product_cost();
  if (variant == "l2_function_label_indicator") return CostSpec::l2_function_label_indicator();
  if (variant == "plain_norm") return CostSpec::plain_norm(norm_from_json(j.at("norm")));
  if (variant == "absolute_scalar") return CostSpec::absolute_scalar();
  parse_fail("unknown cost variant '" + variant + "'");
}

Json to_json(const Point& p) {
  switch (p.kind) {
    case PointKind::Plain:
      return Json(p.x);
    case PointKind::Labeled:
    case PointKind::Binary: {
      Json j;
      j["x"] = p.x;
      j["y"] = p.y;
      return j;
    }
    case PointKind::Sampled: {
      Json j;
      j["values"] = p.x;
      j["quad_weights"] = p.quad_w;
      j["y"] = p.y;
      return j;
    }
  }
  return Json();
}

namespace {

Point point_from_json(const Json& j, PointKind kind) {
  switch (kind) {
    case PointKind::Plain:
      return Point::plain(vec_from(j, "plain atom"));
    case PointKind::Labeled:
      return Point::labeled(vec_from(j.at("x"), "x"), num_from(j, "y"));
    case PointKind::Binary: {
      const double y = num_from(j, "y");
      if (y != 1.0 && y != -1.0) parse_fail("binary label must be -1 or +1");
      return Point::binary(vec_from(j.at("x"), "x"), static_cast<int>(y));
    }
    case PointKind::Sampled:
      return Point::sampled(vec_from(j.at("values"), "values"),
                            vec_from(j.at("quad_weights"), "quad_weights"), num_from(j, "y"));
  }
  parse_fail("unknown point kind");
}

PointKind kind_from_name(const std::string& name) {
  if (name == "plain") return PointKind::Plain;
  if (name == "labeled") return PointKind::Labeled;
  if (name == "binary") return PointKind::Binary;
  if (name == "sampled") return PointKind::Sampled;
  parse_fail("unknown distribution variant '" + name + "'");
}

}  // namespace

Json to_json(const DiscreteDistribution& dist) {
  Json j;
  j["variant"] = point_kind_name(dist.atom(0).kind);
  Json atoms = Json::array();
  for (const Point& a : dist.atoms()) atoms.push_back(to_json(a));
  j["atoms"] = std::move(atoms);
  j["weights"] = dist.weights();
  return j;
}

DiscreteDistribution distribution_from_json(const Json& j) {
  const PointKind kind = kind_from_name(str_from(j, "variant"));
  if (!j.contains("atoms") || !j["atoms"].is_array()) parse_fail("distribution needs atoms");
  std::vector<Point> atoms;
  for (const auto& a : j["atoms"]) atoms.push_back(point_from_json(a, kind));
  return DiscreteDistribution::make(std::move(atoms),
                                    vec_from(j.at("weights"), "weights"));
}

Json to_json(const LossSpec& spec) {
  Json j;
  j["family"] = loss_family_name(spec.family);
  j["r"] = spec.r;
  j["cost"] = to_json(spec.cost);
  if (!spec.beta.empty()) j["beta"] = spec.beta;
  switch (spec.family) {
    case LossFamily::LowerPartial:
    case LossFamily::TauInsensitive:
      j["tau"] = spec.tau;
      break;
    case LossFamily::Quantile:
      j["gamma"] = spec.gamma;
      break;
    case LossFamily::TruncPinball:
      j["tau1"] = spec.tau1;
      j["tau2"] = spec.tau2;
      break;
    case LossFamily::HingePow:
    case LossFamily::SvmAbsPow:
      if (spec.threshold != 1.0) j["threshold"] = spec.threshold;
      break;
    case LossFamily::CvarAbsResidual:
    case LossFamily::CvarMargin:
    case LossFamily::Hmcr:
      j["alpha"] = spec.alpha;
      break;
    case LossFamily::FunctionalLinear: {
      j["shape"] = functional_shape_name(spec.shape);
      j["tau"] = spec.tau;
      j["grid_nodes"] = spec.quad_w.size();
      if (!spec.beta.empty()) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < spec.basis.rows; ++i) {
          Json row = Json::array();
          for (std::size_t k = 0; k < spec.basis.cols; ++k) row.push_back(spec.basis.at(i, k));
          rows.push_back(std::move(row));
        }
        j["basis"] = std::move(rows);
      } else {
        j["beta_values"] = spec.beta_values;
      }
      break;
    }
    default:
      break;
  }
  return j;
}

LossSpec loss_from_json(const Json& j) {
  const std::string family = str_from(j, "family");
  const double r = num_from(j, "r", 1.0);
  const CostSpec cost = cost_from_json(j.at("cost"));
  std::vector<double> beta;
  if (j.contains("beta")) beta = vec_from(j["beta"], "beta");

  auto named = [&](const char* n) { return family == n; };
  if (named("functional_linear")) {
    const std::string shape_name = str_from(j, "shape");
    FunctionalShape shape = FunctionalShape::Abs;
    if (shape_name == "abs")
      shape = FunctionalShape::Abs;
    else if (shape_name == "lpm")
      shape = FunctionalShape::Lpm;
    else if (shape_name == "insens")
      shape = FunctionalShape::Insens;
    else
      parse_fail("unknown functional shape '" + shape_name + "'");
    const double tau = num_from(j, "tau", 0.0);
    const std::size_t nodes =
        j.contains("grid_nodes") ? j["grid_nodes"].get<std::size_t>() : 129;
    std::vector<double> quad =
        j.contains("quad_weights") ? vec_from(j["quad_weights"], "quad_weights")
                                   : trapezoid_weights(nodes);
    if (j.contains("beta_values"))
      return LossSpec::functional(vec_from(j["beta_values"], "beta_values"), std::move(quad),
                                  shape, tau, r);
    if (!j.contains("basis")) parse_fail("functional_linear needs beta_values or basis");
    Matrix basis;
    basis.rows = j["basis"].size();
    basis.cols = j["basis"].empty() ? 0 : j["basis"][0].size();
    for (const auto& row : j["basis"]) {
      if (row.size() != basis.cols) parse_fail("basis rows have unequal lengths");
      for (const auto& e : row) basis.a.push_back(e.get<double>());
    }
    return LossSpec::functional_parametric(std::move(beta), std::move(basis), std::move(quad),
                                           shape, tau, r);
  }

  LossFamily fam;
  if (named("abs_linear")) fam = LossFamily::AbsLinear;
  else if (named("lower_partial")) fam = LossFamily::LowerPartial;
  else if (named("tau_insensitive")) fam = LossFamily::TauInsensitive;
  else if (named("log_cosh")) fam = LossFamily::LogCosh;
  else if (named("huber")) fam = LossFamily::Huber;
  else if (named("quantile")) fam = LossFamily::Quantile;
  else if (named("hinge_pow")) fam = LossFamily::HingePow;
  else if (named("svm_abs_pow")) fam = LossFamily::SvmAbsPow;
  else if (named("log_exp")) fam = LossFamily::LogExp;
  else if (named("smooth_hinge")) fam = LossFamily::SmoothHinge;
  else if (named("trunc_pinball")) fam = LossFamily::TruncPinball;
  else if (named("binary_cross_entropy")) fam = LossFamily::BinaryCrossEntropy;
  else if (named("hard_sigmoid")) fam = LossFamily::HardSigmoid;
  else if (named("ridge_square")) fam = LossFamily::RidgeSquare;
  else if (named("cvar_abs_residual")) fam = LossFamily::CvarAbsResidual;
  else if (named("cvar_margin")) fam = LossFamily::CvarMargin;
  else if (named("hmcr")) fam = LossFamily::Hmcr;
  else parse_fail("unknown loss family '" + family + "'");

  LossSpec spec = LossSpec::make(fam, std::move(beta), r, cost);
  if (j.contains("tau")) spec.with_tau(num_from(j, "tau"));
  if (j.contains("gamma")) spec.with_gamma(num_from(j, "gamma"));
  if (j.contains("tau1") || j.contains("tau2"))
    spec.with_pinball(num_from(j, "tau1", 0.0), num_from(j, "tau2", 0.0));
  if (j.contains("alpha")) spec.with_alpha(num_from(j, "alpha"));
  if (j.contains("threshold")) spec.with_threshold(num_from(j, "threshold"));
  return spec;
}

Json to_json(const BoundsReport& report) {
  Json j;
  j["empirical_loss"] = report.empirical_loss;
  j["upper_U"] = report.upper_U;
  j["lower_L"] = report.lower_L;
  if (report.has_per_point) {
    j["per_point_lower"] = report.per_point_lower;
    j["per_point_upper"] = report.per_point_upper;
  }
  j["delta"] = report.delta;
  j["r"] = report.r;
  return j;
}

Json to_json(const WorstCaseCertificate& cert) {
  Json j;
  j["distribution"] = to_json(cert.distribution);
  j["achieved_value"] = cert.achieved_value;
  j["wasserstein_radius"] = cert.wasserstein_radius;
  j["epsilon"] = cert.epsilon;
  switch (cert.regime) {
    case WorstCaseRegime::R1: j["regime"] = "r1"; break;
    case WorstCaseRegime::Rgt1Transport: j["regime"] = "rgt1_case1"; break;
    case WorstCaseRegime::Rgt1Mixture: j["regime"] = "rgt1_case2"; break;
  }
  return j;
}

Json to_json(const SolveResult& result) {
  Json j;
  j["beta"] = result.beta;
  j["objective"] = result.objective;
  j["iterations"] = result.iterations;
  if (!result.trajectory.empty()) j["trajectory"] = result.trajectory;
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace wdro
