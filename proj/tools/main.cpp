#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stein-bounds: explicit normal-approximation bounds and their numerical checks"};
  app.require_subcommand(1);

  stein_bounds::RunOptions options;
  if (const char* env = std::getenv("STEIN_BOUNDS_THREADS")) {
    try {
      options.threads = std::stoi(env);
    } catch (const std::exception&) {
      // ignore malformed env value; fall back to config / hardware default
    }
  }

  const char* commands[] = {"bound", "verify-stein", "rate", "mvn-bound", "thm34"};
  const char* descriptions[] = {
      "evaluate the moment-matching bound, write bound_report.json",
      "sup-scan the Stein-solution derivative bounds, write verify_stein.json",
      "exact/MC distance series + rate fit + bound dominance, write CSV/JSON",
      "evaluate the multivariate bound, write mvn_report.json",
      "evaluate the truncated series bound with certified tail, write thm34.json"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", options.config_path, "experiment config file (TOML subset)")
        ->required();
    sub->add_option("--out", options.out_dir, "output directory (default .)");
    sub->add_option("--seed", options.seed, "RNG seed override");
    sub->add_option("--threads", options.threads, "worker count override (0 = hardware)");
    sub->add_option("--quadrature-order", options.quadrature_order,
                    "quadrature order override for verify-stein");
    sub->callback([&options, name = std::string(commands[i])] { options.command = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return stein_bounds::run(options);
}
