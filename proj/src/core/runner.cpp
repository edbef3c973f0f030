// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include "core/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "core/json_io.hpp"
#include "core/rng.hpp"

namespace wdro {

namespace {

struct ExperimentConfig {
  std::string config_id;
  LossSpec loss;
  DiscreteDistribution data;
  std::vector<double> delta_grid;
  int grid_resolution = 4;
  std::set<std::string> pipelines;
  double solve_eta0 = 0.2;
  int solve_max_iters = 20000;
  double solve_stall_tol = 0.0;
  int solve_stall_window = 2000;
};

DiscreteDistribution generate_data(const Json& g) {
  const std::uint64_t seed = g.value("seed", 0ULL);
  const std::size_t n = g.value("n", 5ULL);
  const std::size_t dim = g.value("dim", 3ULL);
  const std::string kind = g.value("kind", std::string("gaussian"));
  const std::string variant = g.value("variant", std::string("labeled"));
  Rng rng(seed);
  auto draw = [&]() { return kind == "uniform" ? rng.uniform(-1.0, 1.0) : rng.normal(); };
  std::vector<Point> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (double& xi : x) xi = draw();
    if (variant == "plain") {
      atoms.push_back(Point::plain(std::move(x)));
    } else if (variant == "binary") {
      atoms.push_back(Point::binary(std::move(x), rng.uniform() < 0.5 ? -1 : 1));
    } else {
      atoms.push_back(Point::labeled(std::move(x), draw()));
    }
  }
  return DiscreteDistribution::make(std::move(atoms),
                                    std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  if (!j.contains("config_id") || !j["config_id"].is_string())
    fail(ErrorCode::ConfigParse, "config needs a string config_id");
  cfg.config_id = j["config_id"].get<std::string>();
  if (!j.contains("loss")) fail(ErrorCode::ConfigParse, "config needs a loss spec");
  cfg.loss = loss_from_json(j["loss"]);
  if (j.contains("data"))
    cfg.data = distribution_from_json(j["data"]);
  else if (j.contains("generator"))
    cfg.data = generate_data(j["generator"]);
  else
    fail(ErrorCode::ConfigParse, "config needs data or generator");
  if (!j.contains("delta_grid") || !j["delta_grid"].is_array() || j["delta_grid"].empty())
    fail(ErrorCode::ConfigParse, "config needs a nonempty delta_grid");
  double prev = -1.0;
  for (const auto& d : j["delta_grid"]) {
    const double v = d.get<double>();
    if (v < 0.0 || v < prev)
      fail(ErrorCode::ConfigParse, "delta_grid must be nonnegative and ascending");
    cfg.delta_grid.push_back(v);
    prev = v;
  }
  cfg.grid_resolution = j.value("grid_resolution", 4);
  if (j.contains("pipelines"))
    for (const auto& p : j["pipelines"]) cfg.pipelines.insert(p.get<std::string>());
  else
    cfg.pipelines = {"bounds"};
  for (const std::string& p : cfg.pipelines)
    if (p != "bounds" && p != "oracle" && p != "certificate" && p != "cvar" && p != "solve")
      fail(ErrorCode::ConfigParse, "unknown pipeline '" + p + "'");
  if (j.contains("solve")) {
    cfg.solve_eta0 = j["solve"].value("eta0", 0.2);
    cfg.solve_max_iters = j["solve"].value("max_iters", 20000);
    cfg.solve_stall_tol = j["solve"].value("stall_tol", 0.0);
    cfg.solve_stall_window = j["solve"].value("stall_window", 2000);
  }
  return cfg;
}

struct Row {
  std::string text;
};

struct ConfigOutput {
  std::map<std::string, std::vector<Row>> rows;  // pipeline -> rows
  std::string trace;                             // dual trace JSON lines
  std::string grid_csv;                          // grid points, trace mode only
  std::string coupling_csv;                      // recovered couplings, trace mode only
  std::string trajectory_csv;                    // solver objective stream, trace mode only
  bool failed = false;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class RowBuilder {
 public:
  RowBuilder& add(const std::string& v) {
    if (!first_) out_ += ',';
    out_ += csv_escape(v);
    first_ = false;
    return *this;
  }
  RowBuilder& add(double v) { return add(format_double(v)); }
  RowBuilder& add_empty() { return add(std::string()); }
  std::string str() const { return out_; }

 private:
  std::string out_;
  bool first_ = true;
};

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

ConfigOutput run_config(const ExperimentConfig& cfg, bool trace) {
  ConfigOutput out;
  const std::string family = loss_family_name(cfg.loss.family);
  const std::string cost = cost_kind_name(cfg.loss.cost.kind);

  auto stamp = [&](RowBuilder& row, double delta) {
    row.add(cfg.config_id).add(family).add(cost).add(cfg.loss.r).add(delta);
  };

  for (double delta : cfg.delta_grid) {
    // The oracle/certificate pipelines reuse one grid per delta.
    std::vector<Point> grid;
    std::string grid_error;
    const bool needs_grid =
        cfg.pipelines.count("oracle") > 0 || cfg.pipelines.count("certificate") > 0;
    if (needs_grid) {
      try {
        grid = make_grid(cfg.data, cfg.loss, delta, cfg.grid_resolution);
      } catch (const Error& e) {
        grid_error = e.what();
      }
    }

    if (cfg.pipelines.count("bounds")) {
      const auto t0 = std::chrono::steady_clock::now();
      RowBuilder row;
      stamp(row, delta);
      try {
        const double e = empirical_loss(cfg.loss, cfg.data);
        const double L = weak_lipschitz(cfg.loss, cfg.data).constant;
        const double u = upper_bound_U(cfg.loss, cfg.data, delta);
        row.add(e).add(L).add(u).add_empty().add_empty().add_empty().add_empty();
        row.add(elapsed_ms(t0)).add_empty();
      } catch (const Error& e) {
        out.failed = true;
        row.add_empty().add_empty().add_empty().add_empty().add_empty().add_empty().add_empty();
        row.add(elapsed_ms(t0)).add(e.what());
      }
      out.rows["bounds"].push_back({row.str()});
    }

    if (cfg.pipelines.count("oracle")) {
      const auto t0 = std::chrono::steady_clock::now();
      RowBuilder row;
      stamp(row, delta);
      try {
        if (!grid_error.empty()) fail(ErrorCode::WitnessNotFound, grid_error);
        const double e = empirical_loss(cfg.loss, cfg.data);
        const double L = weak_lipschitz(cfg.loss, cfg.data).constant;
        const double u = upper_bound_U(cfg.loss, cfg.data, delta);
        std::vector<DualTraceEntry> entries;
        const BudgetedLpSolution sol =
            sup_over_grid(cfg.loss, cfg.data, delta, grid, trace ? &entries : nullptr);
        const double lower = lower_bound_L(cfg.loss, cfg.data, delta, grid);
        row.add(e).add(L).add(u).add(lower).add(sol.value).add(u - sol.value).add_empty();
        row.add(elapsed_ms(t0)).add_empty();
        if (trace) {
          for (const DualTraceEntry& t : entries) {
            Json line;
            line["config_id"] = cfg.config_id;
            line["delta"] = delta;
            line["rho"] = t.rho;
            line["subgradient"] = t.subgradient;
            out.trace += line.dump();
            out.trace += '\n';
          }
          for (std::size_t j = 0; j < grid.size(); ++j) {
            RowBuilder g;
            g.add(cfg.config_id).add(delta).add(static_cast<double>(j));
            std::string coords;
            for (std::size_t d = 0; d < grid[j].x.size(); ++d) {
              if (d > 0) coords += ';';
              coords += format_double(grid[j].x[d]);
            }
            g.add(coords).add(grid[j].y);
            out.grid_csv += g.str();
            out.grid_csv += '\n';
          }
          for (std::size_t i = 0; i < sol.coupling.rows(); ++i)
            for (std::size_t j = 0; j < sol.coupling.cols(); ++j)
              if (sol.coupling.at(i, j) != 0.0) {
                RowBuilder cr;
                cr.add(cfg.config_id).add(delta).add(static_cast<double>(i));
                cr.add(static_cast<double>(j)).add(sol.coupling.at(i, j));
                out.coupling_csv += cr.str();
                out.coupling_csv += '\n';
              }
        }
      } catch (const Error& e) {
        out.failed = true;
        row.add_empty().add_empty().add_empty().add_empty().add_empty().add_empty().add_empty();
        row.add(elapsed_ms(t0)).add(e.what());
      }
      out.rows["oracle"].push_back({row.str()});
    }

    if (cfg.pipelines.count("certificate")) {
      const auto t0 = std::chrono::steady_clock::now();
      RowBuilder row;
      stamp(row, delta);
      try {
        const double e = empirical_loss(cfg.loss, cfg.data);
        const double L = weak_lipschitz(cfg.loss, cfg.data).constant;
        const double u = upper_bound_U(cfg.loss, cfg.data, delta);
        const double eps = default_epsilon(cfg.loss, cfg.data, delta);
        const WorstCaseCertificate cert = worst_case_distribution(cfg.loss, cfg.data, delta, eps);
        row.add(e).add(L).add(u).add_empty().add(cert.achieved_value);
        row.add(u - cert.achieved_value).add(cert.wasserstein_radius);
        row.add(elapsed_ms(t0)).add_empty();
      } catch (const Error& e) {
        out.failed = true;
        row.add_empty().add_empty().add_empty().add_empty().add_empty().add_empty().add_empty();
        row.add(elapsed_ms(t0)).add(e.what());
      }
      out.rows["certificate"].push_back({row.str()});
    }

    if (cfg.pipelines.count("cvar")) {
      const auto t0 = std::chrono::steady_clock::now();
      RowBuilder row;
      row.add(cfg.config_id).add(family).add(cost).add(cfg.loss.r).add(delta);
      try {
        if (cfg.loss.family == LossFamily::Hmcr) {
          const double lg = weak_lipschitz(cfg.loss).constant;
          const auto [nominal, robust] =
              hmcr(cfg.data, [&](const Point& z) { return eval_psi(cfg.loss, z); },
                   cfg.loss.alpha, cfg.loss.r, delta, lg);
          row.add(cfg.loss.alpha).add(nominal).add(robust);
        } else {
          const double nominal =
              cvar(cfg.data, [&](const Point& z) { return eval_psi(cfg.loss, z); },
                   cfg.loss.alpha);
          const double robust = robust_cvar(cfg.loss, cfg.data, cfg.loss.alpha, delta);
          row.add(cfg.loss.alpha).add(nominal).add(robust);
        }
        row.add(elapsed_ms(t0)).add_empty();
      } catch (const Error& e) {
        out.failed = true;
        row.add_empty().add_empty().add_empty();
        row.add(elapsed_ms(t0)).add(e.what());
      }
      out.rows["cvar"].push_back({row.str()});
    }

    if (cfg.pipelines.count("solve")) {
      const auto t0 = std::chrono::steady_clock::now();
      RowBuilder row;
      row.add(cfg.config_id).add(family).add(cost).add(cfg.loss.r).add(delta);
      try {
        SolveConfig sc;
        sc.loss = cfg.loss;
        sc.delta = delta;
        sc.eta0 = cfg.solve_eta0;
        sc.max_iters = cfg.solve_max_iters;
        sc.stall_tol = cfg.solve_stall_tol;
        sc.stall_window = cfg.solve_stall_window;
        sc.record_trajectory = trace;
        const std::size_t dim = cfg.data.atom(0).x.size();
        const SolveResult res = minimize_regularized(sc, cfg.data, std::vector<double>(dim, 0.0));
        row.add(res.objective).add(static_cast<double>(res.iterations));
        row.add(elapsed_ms(t0)).add_empty();
        if (trace)
          for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
            RowBuilder tr;
            tr.add(cfg.config_id).add(delta).add(static_cast<double>(k)).add(res.trajectory[k]);
            out.trajectory_csv += tr.str();
            out.trajectory_csv += '\n';
          }
      } catch (const Error& e) {
        out.failed = true;
        row.add_empty().add_empty();
        row.add(elapsed_ms(t0)).add(e.what());
      }
      out.rows["solve"].push_back({row.str()});
    }
  }
  return out;
}

const std::map<std::string, std::string> kHeaders = {
    {"bounds", "config_id,family,cost,r,delta,E,L,U,L_lower,oracle_value,gap,radius,runtime_ms,error"},
    {"oracle", "config_id,family,cost,r,delta,E,L,U,L_lower,oracle_value,gap,radius,runtime_ms,error"},
    {"certificate",
     "config_id,family,cost,r,delta,E,L,U,L_lower,oracle_value,gap,radius,runtime_ms,error"},
    {"cvar", "config_id,family,cost,r,delta,alpha,nominal,robust,runtime_ms,error"},
    {"solve", "config_id,family,cost,r,delta,objective,iterations,runtime_ms,error"},
};

}  // namespace

int run_experiments(const std::string& config_path, const std::string& out_dir, int threads,
                    bool trace) {
  Json root;
  {
    std::ifstream in(config_path);
    if (!in) return 3;
    try {
      in >> root;
    } catch (const std::exception&) {
      return 1;
    }
  }

  std::vector<ExperimentConfig> configs;
  try {
    if (!root.contains("configs") || !root["configs"].is_array())
      fail(ErrorCode::ConfigParse, "top level must hold a 'configs' array");
    std::set<std::string> seen;
    for (const auto& c : root["configs"]) {
      configs.push_back(config_from_json(c));
      if (!seen.insert(configs.back().config_id).second)
        fail(ErrorCode::ConfigParse, "duplicate config_id " + configs.back().config_id);
    }
  } catch (const Error&) {
    return 1;
  } catch (const std::exception&) {
    return 1;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return 3;

  if (threads <= 0) {
    if (const char* env = std::getenv("WDRO_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = 1;
  }

  std::vector<ConfigOutput> outputs(configs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) outputs[i] = run_config(configs[i], trace);
  } else {
    std::vector<std::future<ConfigOutput>> futures;
    futures.reserve(configs.size());
    for (const ExperimentConfig& cfg : configs)
      futures.push_back(std::async(std::launch::async, [&cfg, trace] { return run_config(cfg, trace); }));
    for (std::size_t i = 0; i < futures.size(); ++i) outputs[i] = futures[i].get();
  }

  // Buffered rows are written in config order so output is deterministic.
  bool any_failed = false;
  std::set<std::string> pipelines;
  for (const ExperimentConfig& cfg : configs)
    for (const std::string& p : cfg.pipelines) pipelines.insert(p);
  for (const std::string& pipeline : pipelines) {
    std::ofstream file(std::filesystem::path(out_dir) / (pipeline + ".csv"));
    if (!file) return 3;
    file << kHeaders.at(pipeline) << '\n';
    for (const ConfigOutput& out : outputs)
      if (auto it = out.rows.find(pipeline); it != out.rows.end())
        for (const Row& row : it->second) file << row.text << '\n';
  }
  std::string trace_text, grid_text, coupling_text, trajectory_text;
  for (const ConfigOutput& out : outputs) {
    any_failed = any_failed || out.failed;
    trace_text += out.trace;
    grid_text += out.grid_csv;
    coupling_text += out.coupling_csv;
    trajectory_text += out.trajectory_csv;
  }
  if (trace) {
    auto dump = [&](const char* name, const std::string& header, const std::string& body) {
      if (body.empty()) return true;
      std::ofstream file(std::filesystem::path(out_dir) / name);
      if (!file) return false;
      if (!header.empty()) file << header << '\n';
      file << body;
      return true;
    };
    if (!dump("trace.jsonl", "", trace_text)) return 3;
    if (!dump("grid.csv", "config_id,delta,index,coords,y", grid_text)) return 3;
    if (!dump("coupling.csv", "config_id,delta,row,col,mass", coupling_text)) return 3;
    if (!dump("trajectory.csv", "config_id,delta,iteration,objective", trajectory_text)) return 3;
  }
  return any_failed ? 2 : 0;
}

std::string catalog_text() {
  std::ostringstream out;
  out << "supported pairings (loss family x cost family, r range, constant)\n";
  struct Entry {
    const char* loss;
    const char* cost;
    const char* range;
    const char* formula;
  };
  const Entry entries[] = {
      {"abs_linear", "full_norm", "r >= 1", "dual||[-beta;1]||"},
      {"abs_linear", "feature_norm_label_indicator", "r >= 1", "dual||beta||"},
      {"abs_linear", "subset_norm", "r >= 1", "dual||beta_I||"},
      {"abs_linear", "semi_norm_b", "r >= 1", "||B beta||_2"},
      {"abs_linear", "absolute_scalar", "r >= 1", "1"},
      {"lower_partial", "full_norm", "r >= 1", "dual||[-beta;1]||"},
      {"lower_partial", "feature_norm_label_indicator", "r >= 1", "dual||beta||"},
      {"lower_partial", "subset_norm", "r >= 1", "dual||beta_I||"},
      {"lower_partial", "semi_norm_b", "r >= 1", "||B beta||_2"},
      {"tau_insensitive", "full_norm", "r >= 1", "dual||[-beta;1]||"},
      {"tau_insensitive", "feature_norm_label_indicator", "r >= 1", "dual||beta||"},
      {"tau_insensitive", "subset_norm", "r >= 1", "dual||beta_I||"},
      {"tau_insensitive", "semi_norm_b", "r >= 1", "||B beta||_2"},
      {"log_cosh", "full_norm", "r = 1", "dual||[-beta;1]||"},
      {"log_cosh", "feature_norm_label_indicator", "r = 1", "dual||beta||"},
      {"huber", "full_norm", "r = 1", "dual||[-beta;1]||"},
      {"huber", "feature_norm_label_indicator", "r = 1", "dual||beta||"},
      {"quantile", "full_norm", "r = 1", "dual||[-beta;1]||"},
      {"quantile", "feature_norm_label_indicator", "r = 1", "dual||beta||"},
      {"hinge_pow", "feature_norm_label_indicator", "r >= 1", "dual||beta||"},
      {"svm_abs_pow", "feature_norm_label_indicator", "r >= 1", "dual||beta||"},
      {"log_exp", "feature_norm_label_indicator", "r = 1", "dual||beta||"},
      {"smooth_hinge", "feature_norm_label_indicator", "r = 1", "dual||beta||"},
      {"trunc_pinball", "feature_norm_label_indicator", "r = 1", "dual||beta||"},
      {"binary_cross_entropy", "absolute_scalar", "r = 1",
       "per-anchor entropy slope (conditional regime)"},
      {"hard_sigmoid", "plain_norm", "r = 1", "dual||beta||/2 or /4 (conditional regime)"},
      {"ridge_square", "product_cost", "r = 1", "||beta||_2^2 + 1"},
      {"functional_linear", "l2_function_label_indicator", "r >= 1", "quadrature L2 of beta"},
      {"cvar_abs_residual", "full_norm", "r = 1", "dual||[-beta;1]|| / (1-alpha)"},
      {"cvar_margin", "feature_norm_label_indicator", "r = 1", "dual||beta|| / (1-alpha)"},
      {"hmcr", "plain_norm", "r >= 1", "dual||beta|| / (1-alpha)"},
  };
  for (const Entry& e : entries)
    out << e.loss << " x " << e.cost << " | " << e.range << " | " << e.formula << '\n';
  return out.str();
}

}  // namespace wdro
