#pragma once

#include <optional>
#include <string>

namespace stein_bounds {

// One batch command: load config, evaluate, write artifacts under out_dir.
// Command-line values override their config counterparts.
struct RunOptions {
  std::string command;  // bound | verify-stein | rate | mvn-bound | thm34
  std::string config_path;
  std::string out_dir = ".";
  std::optional<unsigned long long> seed;
  std::optional<int> threads;
  std::optional<int> quadrature_order;
};

// Exit status: 0 all internal PASS gates hold, 1 a gate failed, 2 config
// error, 3 precondition violation, 4 numerical failure. One-line diagnostics
// go to stderr; result summaries to stdout.
int run(const RunOptions& options);

}  // namespace stein_bounds
