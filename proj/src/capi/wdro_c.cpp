// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "wdro/wdro.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/json_io.hpp"
#include "core/runner.hpp"

namespace {

thread_local std::string g_last_error;

wdro_status status_for(wdro::ErrorCode code) {
  using wdro::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigParse: return WDRO_ERR_PARSE;
    case ErrorCode::Io: return WDRO_ERR_IO;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::VariantMismatch: return WDRO_ERR_DIMENSION;
    case ErrorCode::UnsupportedPairing:
    case ErrorCode::NonConvexFamily:
    case ErrorCode::NoPerPointCertificate: return WDRO_ERR_UNSUPPORTED;
    case ErrorCode::WitnessNotFound: return WDRO_ERR_WITNESS;
    case ErrorCode::InfeasibleTransport:
    case ErrorCode::NoFiniteCostColumn:
    case ErrorCode::NoFiniteCostProbe: return WDRO_ERR_INFEASIBLE;
    case ErrorCode::Internal: return WDRO_ERR_INTERNAL;
    default: return WDRO_ERR_DOMAIN;
  }
}

template <typename Fn>
wdro_status guarded(Fn&& fn) {
  try {
    fn();
    return WDRO_OK;
  } catch (const wdro::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WDRO_ERR_PARSE;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct wdro_loss {
  wdro::LossSpec spec;
};

struct wdro_dist {
  wdro::DiscreteDistribution dist;
};

extern "C" {

const char* wdro_version(void) { return wdro::kVersion; }

const char* wdro_last_error(void) { return g_last_error.c_str(); }

void wdro_string_free(char* s) { delete[] s; }

wdro_status wdro_loss_parse(const char* json, wdro_loss** out) {
  if (json == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const wdro::Json j = wdro::Json::parse(json);
    *out = new wdro_loss{wdro::loss_from_json(j)};
  });
}

void wdro_loss_free(wdro_loss* loss) { delete loss; }

wdro_status wdro_dist_parse(const char* json, wdro_dist** out) {
  if (json == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const wdro::Json j = wdro::Json::parse(json);
    *out = new wdro_dist{wdro::distribution_from_json(j)};
  });
}

wdro_status wdro_dist_to_json(const wdro_dist* dist, char** json_out) {
  if (dist == nullptr || json_out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *json_out = dup_string(wdro::to_json(dist->dist).dump()); });
}

void wdro_dist_free(wdro_dist* dist) { delete dist; }

wdro_status wdro_bounds(const wdro_loss* loss, const wdro_dist* dist, double delta,
                        wdro_bounds_report* out) {
  if (loss == nullptr || dist == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    out->empirical_loss = wdro::empirical_loss(loss->spec, dist->dist);
    out->upper_u = wdro::upper_bound_U(loss->spec, dist->dist, delta);
    out->lower_l = std::nan("");
    out->delta = delta;
    out->r = loss->spec.r;
    out->has_per_point = 0;
    out->per_point_lower = std::nan("");
    out->per_point_upper = std::nan("");
    try {
      const auto [lo, hi] = wdro::per_point_bounds(loss->spec, dist->dist, delta);
      out->per_point_lower = lo;
      out->per_point_upper = hi;
      out->has_per_point = 1;
    } catch (const wdro::Error&) {
    }
  });
}

wdro_status wdro_oracle_eval(const wdro_loss* loss, const wdro_dist* dist, double delta,
                             int resolution, wdro_oracle_report* out) {
  if (loss == nullptr || dist == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const std::vector<wdro::Point> grid =
        wdro::make_grid(dist->dist, loss->spec, delta, resolution);
    const wdro::BudgetedLpSolution sol = wdro::sup_over_grid(loss->spec, dist->dist, delta, grid);
    out->value = sol.value;
    out->dual_value = wdro::dual_bound_I(loss->spec, dist->dist, delta, grid);
    out->lower_value = wdro::lower_bound_L(loss->spec, dist->dist, delta, grid);
    out->rho_star = sol.rho_star;
    out->tight = sol.tight ? 1 : 0;
    out->grid_size = static_cast<int>(grid.size());
  });
}

wdro_status wdro_worst_case(const wdro_loss* loss, const wdro_dist* dist, double delta,
                            double epsilon, char** certificate_json_out) {
  if (loss == nullptr || dist == nullptr || certificate_json_out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const double eps =
        epsilon > 0.0 ? epsilon : wdro::default_epsilon(loss->spec, dist->dist, delta);
    const wdro::WorstCaseCertificate cert =
        wdro::worst_case_distribution(loss->spec, dist->dist, delta, eps);
    *certificate_json_out = dup_string(wdro::to_json(cert).dump());
  });
}

wdro_status wdro_wasserstein(const wdro_loss* loss, const wdro_dist* p, const wdro_dist* q,
                             double* out) {
  if (loss == nullptr || p == nullptr || q == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded(
      [&] { *out = wdro::wasserstein_discrete(loss->spec.cost, loss->spec.r, p->dist, q->dist); });
}

wdro_status wdro_cvar(const wdro_loss* g, const wdro_dist* dist, double alpha, double* out) {
  if (g == nullptr || dist == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = wdro::cvar(
        dist->dist, [&](const wdro::Point& z) { return wdro::eval_psi(g->spec, z); }, alpha);
  });
}

wdro_status wdro_robust_cvar(const wdro_loss* g, const wdro_dist* dist, double alpha, double delta,
                             double* out) {
  if (g == nullptr || dist == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = wdro::robust_cvar(g->spec, dist->dist, alpha, delta); });
}

wdro_status wdro_hmcr(const wdro_loss* g, const wdro_dist* dist, double alpha, double r,
                      double delta, double* nominal_out, double* robust_out) {
  if (g == nullptr || dist == nullptr || nominal_out == nullptr || robust_out == nullptr) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const double lg = wdro::weak_lipschitz(g->spec).constant;
    const auto [nominal, robust] = wdro::hmcr(
        dist->dist, [&](const wdro::Point& z) { return wdro::eval_psi(g->spec, z); }, alpha, r,
        delta, lg);
    *nominal_out = nominal;
    *robust_out = robust;
  });
}

wdro_status wdro_solve(const wdro_loss* loss, const wdro_dist* dist, double delta,
                       const double* beta0, int dim, double eta0, int max_iters,
                       char** result_json_out) {
  if (loss == nullptr || dist == nullptr || result_json_out == nullptr || dim < 0) {
    g_last_error = "null argument";
    return WDRO_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    wdro::SolveConfig config;
    config.loss = loss->spec;
    config.delta = delta;
    if (eta0 > 0.0) config.eta0 = eta0;
    if (max_iters > 0) config.max_iters = max_iters;
    std::vector<double> start(static_cast<std::size_t>(dim), 0.0);
    if (beta0 != nullptr)
      start.assign(beta0, beta0 + static_cast<std::size_t>(dim));
    const wdro::SolveResult res = wdro::minimize_regularized(config, dist->dist, std::move(start));
    *result_json_out = dup_string(wdro::to_json(res).dump());
  });
}

int wdro_run(const char* config_path, const char* out_dir, int threads, int trace) {
  if (config_path == nullptr || out_dir == nullptr) return 3;
  try {
    return wdro::run_experiments(config_path, out_dir, threads, trace != 0);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return 3;
  }
}

char* wdro_catalog(void) { return dup_string(wdro::catalog_text()); }

}  // extern "C"
