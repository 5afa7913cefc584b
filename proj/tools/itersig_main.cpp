// Command-line experiment runner: validate configs, run sweeps, and run the
// built-in identity suite.

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "itersig/experiment.hpp"
#include "itersig/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"iterated sums / signatures experiment runner"};
  app.set_version_flag("--version", itersig::version_string);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::size_t threads = 0;
  std::uint64_t identities_seed = 20240;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "path to the JSON experiment config")->required();
  run->add_option("--threads", threads, "worker threads (default: ITERSIG_THREADS or 1)");
  run->add_option("--out", out_override, "override the config's output directory");

  auto* validate = app.add_subcommand("validate", "parse and validate a config, run nothing");
  validate->add_option("config", config_path, "path to the JSON experiment config")->required();

  auto* identities = app.add_subcommand("identities", "run the built-in algebraic identity suite");
  identities->add_option("--seed", identities_seed, "seed for the random fixtures");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto config = itersig::parse_config_file(config_path);
      itersig::RunOptions options;
      options.threads = threads;
      options.output_override = out_override;
      return itersig::run_experiment(config, options, std::cout) == 0 ? 0 : 1;
    }
    if (validate->parsed()) {
      const auto config = itersig::parse_config_file(config_path);
      std::cout << "valid " << itersig::to_string(config.kind) << " config: " << config_path << "\n";
      return 0;
    }
    if (identities->parsed()) {
      int failed = 0;
      for (const auto& check : itersig::run_identity_suite(identities_seed)) {
        std::cout << "identity " << check.name << ": " << (check.trials - check.failures) << "/"
                  << check.trials << " passed\n";
        if (check.failures > 0) ++failed;
      }
      std::cout << (failed == 0 ? "identity suite: all checks passed\n"
                                : "identity suite: FAILURES\n");
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
