// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_RUNNER_HPP
#define WDRO_CORE_RUNNER_HPP

#include <string>

namespace wdro {

inline constexpr const char* kVersion = "0.1.0";

// Batch experiment runner. Parses the whole config file up front (exit 1 on
// any parse problem, nothing written), then executes config by config; a
// per-config failure is recorded in the row's error column and turns the
// final exit code into 2. Io problems exit 3.
int run_experiments(const std::string& config_path, const std::string& out_dir, int threads,
                    bool trace);

// Every supported (loss family x cost family x r-range) pairing with its
// constant formula; conditional regimes are marked.
std::string catalog_text();

}  // namespace wdro

#endif
