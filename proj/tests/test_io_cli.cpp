// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/json_io.hpp"
#include "core/runner.hpp"
#include "test_helpers.hpp"

using namespace wdro;
using namespace wdro::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Wall-clock runtimes are the one legitimately nondeterministic column; blank
// it before comparing runs byte for byte.
std::string mask_runtime(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const std::size_t last = line.rfind(',');
    if (last != std::string::npos) {
      const std::size_t prev = line.rfind(',', last - 1);
      if (prev != std::string::npos) line.replace(prev + 1, last - prev - 1, "*");
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const char* kConfig = R"json({
  "configs": [
    {
      "config_id": "abs-l2",
      "loss": {"family": "abs_linear", "beta": [1.0, -0.5, 0.25], "r": 1,
               "cost": {"variant": "full_norm", "norm": {"kind": "l2"}}},
      "generator": {"seed": 7, "n": 5, "dim": 3, "kind": "gaussian", "variant": "labeled"},
      "delta_grid": [0.1, 1.0],
      "grid_resolution": 4,
      "pipelines": ["bounds", "oracle", "certificate", "solve"]
    },
    {
      "config_id": "hmcr-risk",
      "loss": {"family": "hmcr", "beta": [0.8, -0.2], "alpha": 0.5, "r": 1,
               "cost": {"variant": "plain_norm", "norm": {"kind": "l2"}}},
      "generator": {"seed": 9, "n": 6, "dim": 2, "kind": "uniform", "variant": "plain"},
      "delta_grid": [0.2],
      "pipelines": ["cvar"]
    }
  ]
})json";

}  // namespace

TEST_CASE("round trips through JSON") {
  Rng rng(606);
  for (const LossSpec& spec : full_catalog(rng, 3, 1.0)) {
    const Json j = to_json(spec);
    const LossSpec back = loss_from_json(j);
    CHECK(to_json(back).dump() == j.dump());
    // Functional values agree on fresh points.
    for (int k = 0; k < 5; ++k) {
      const Point z = valid_anchor(spec, rng);
      CHECK(eval_psi(spec, z) == doctest::Approx(eval_psi(back, z)).epsilon(1e-15));
    }
    const auto dist = random_dataset(spec, rng, 3);
    const DiscreteDistribution dback = distribution_from_json(to_json(dist));
    CHECK(to_json(dback).dump() == to_json(dist).dump());
  }
}

TEST_CASE("runner produces one csv per pipeline and exit 0") {
  const auto dir = fresh_dir("wdro_run_ok");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << kConfig;
  const int code = run_experiments(cfg.string(), (dir / "out").string(), 1, false);
  CHECK(code == 0);
  for (const char* name : {"bounds.csv", "oracle.csv", "certificate.csv", "solve.csv", "cvar.csv"})
    CHECK(std::filesystem::exists(dir / "out" / name));

  const std::string oracle = slurp(dir / "out" / "oracle.csv");
  CHECK(oracle.find("config_id,family,cost,r,delta,E,L,U,L_lower,oracle_value,gap,radius,"
                    "runtime_ms,error") == 0);
  CHECK(oracle.find("abs-l2") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical csv output") {
  const auto dir = fresh_dir("wdro_run_det");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << kConfig;
  REQUIRE(run_experiments(cfg.string(), (dir / "a").string(), 1, false) == 0);
  REQUIRE(run_experiments(cfg.string(), (dir / "b").string(), 2, false) == 0);
  for (const char* name : {"bounds.csv", "oracle.csv", "certificate.csv", "solve.csv", "cvar.csv"})
    CHECK(mask_runtime(slurp(dir / "a" / name)) == mask_runtime(slurp(dir / "b" / name)));
}

TEST_CASE("malformed json exits 1 with no partial output") {
  const auto dir = fresh_dir("wdro_run_bad");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << "{ not json";
  CHECK(run_experiments(cfg.string(), (dir / "out").string(), 1, false) == 1);
  CHECK(!std::filesystem::exists(dir / "out" / "bounds.csv"));

  std::ofstream(cfg) << R"({"configs": [{"config_id": 7}]})";
  CHECK(run_experiments(cfg.string(), (dir / "out2").string(), 1, false) == 1);
  CHECK(!std::filesystem::exists(dir / "out2" / "bounds.csv"));
}

TEST_CASE("per-config failure writes an error row and exits 2") {
  // Saturated entropy regime: delta >= anchor makes the witness search fail.
  const char* config = R"json({
    "configs": [
      {
        "config_id": "good",
        "loss": {"family": "abs_linear", "beta": [1.0], "r": 1,
                 "cost": {"variant": "full_norm", "norm": {"kind": "l2"}}},
        "generator": {"seed": 3, "n": 3, "dim": 1, "kind": "gaussian", "variant": "labeled"},
        "delta_grid": [0.5],
        "pipelines": ["oracle"]
      },
      {
        "config_id": "saturated",
        "loss": {"family": "binary_cross_entropy", "beta": [0.5], "r": 1,
                 "cost": {"variant": "absolute_scalar"}},
        "data": {"variant": "plain", "atoms": [[0.3]], "weights": [1.0]},
        "delta_grid": [0.4],
        "pipelines": ["oracle"]
      }
    ]
  })json";
  const auto dir = fresh_dir("wdro_run_err");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << config;
  CHECK(run_experiments(cfg.string(), (dir / "out").string(), 1, false) == 2);
  const std::string oracle = slurp(dir / "out" / "oracle.csv");
  CHECK(oracle.find("good") != std::string::npos);
  CHECK(oracle.find("WitnessNotFound") != std::string::npos);
}

TEST_CASE("trace flag emits dual iterates as json lines") {
  const auto dir = fresh_dir("wdro_run_trace");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << kConfig;
  REQUIRE(run_experiments(cfg.string(), (dir / "out").string(), 1, true) == 0);
  const std::string trace = slurp(dir / "out" / "trace.jsonl");
  CHECK(!trace.empty());
  std::istringstream lines(trace);
  std::string line;
  REQUIRE(std::getline(lines, line));
  const Json first = Json::parse(line);
  CHECK(first.contains("rho"));
  CHECK(first.contains("subgradient"));
}

TEST_CASE("catalog lists every pairing with regime notes") {
  const std::string text = catalog_text();
  std::size_t rows = 0;
  for (char c : text) rows += c == '\n' ? 1 : 0;
  CHECK(rows >= 20);
  CHECK(text.find("hinge_pow x feature_norm_label_indicator") != std::string::npos);
  CHECK(text.find("hard_sigmoid") != std::string::npos);
  CHECK(text.find("conditional regime") != std::string::npos);
}

TEST_CASE("formatted doubles survive a parse round trip") {
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-12.0, 12.0));
    CHECK(std::stod(format_double(v)) == v);
  }
}
