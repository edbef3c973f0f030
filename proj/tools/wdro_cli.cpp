// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links only the public C interface.
//
//   wdro run <config.json> --out <dir> [--threads N] [--trace]
//   wdro catalog
//   wdro --version

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "wdro/wdro.h"

namespace {

void usage(std::FILE* to) {
  std::fprintf(to,
               "usage:\n"
               "  wdro run <config.json> --out <dir> [--threads N] [--trace]\n"
               "  wdro catalog\n"
               "  wdro --version\n");
}

int cmd_run(int argc, char** argv) {
  const char* config_path = nullptr;
  const char* out_dir = nullptr;
  int threads = 0;  // 0 = WDRO_THREADS or 1
  int trace = 0;
  for (int i = 0; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--trace") == 0) {
      trace = 1;
    } else if (argv[i][0] == '-') {
      std::fprintf(stderr, "unknown flag %s\n", argv[i]);
      usage(stderr);
      return 1;
    } else if (config_path == nullptr) {
      config_path = argv[i];
    } else {
      usage(stderr);
      return 1;
    }
  }
  if (config_path == nullptr || out_dir == nullptr) {
    usage(stderr);
    return 1;
  }
  const int code = wdro_run(config_path, out_dir, threads, trace);
  if (code != 0) std::fprintf(stderr, "wdro run finished with exit code %d\n", code);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(stderr);
    return 1;
  }
  const std::string cmd = argv[1];
  if (cmd == "--version" || cmd == "version") {
    std::printf("wdro %s\n", wdro_version());
    return 0;
  }
  if (cmd == "catalog") {
    char* text = wdro_catalog();
    std::fputs(text, stdout);
    wdro_string_free(text);
    return 0;
  }
  if (cmd == "run") return cmd_run(argc - 2, argv + 2);
  usage(stderr);
  return 1;
}
