// zeno: run, validate and list experiments.
//
// Exit codes: 0 success, 1 config error, 2 runtime error.
#include "zeno/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int report(const zeno::cli::ConfigError& e)
{
  for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << '\n';
  return kConfigError;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Zeno-effect search simulations: figure reproductions, sweeps and audits"};
  app.require_subcommand(1);

  std::string run_path;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV output");
  run->add_option("config", run_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads (overrides the config)")->check(CLI::Range(1, 256));
  run->add_option("--seed", seed, "RNG seed for trajectory mode (overrides the config)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults filled in");
  validate->add_option("config", validate_path, "JSON config file")->required();

  bool markdown = false;
  auto* list = app.add_subcommand("list-experiments", "List experiment ids");
  list->add_flag("--reference", markdown, "Print every parameter and default as markdown");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  if (*list) {
    if (markdown) {
      std::cout << zeno::cli::reference_markdown();
    } else {
      for (const auto& info : zeno::cli::experiment_catalog()) std::cout << info.id << "\t" << info.summary << '\n';
    }
    return kOk;
  }

  if (*validate) {
    try {
      std::cout << zeno::cli::validate_config(validate_path).to_json().dump(2) << '\n';
      return kOk;
    } catch (const zeno::cli::ConfigError& e) {
      return report(e);
    }
  }

  zeno::cli::ExperimentConfig config;
  try {
    config = zeno::cli::validate_config(run_path);
    if (out_dir) {
      // Re-validate so an unwritable --out is a config error, not a runtime one.
      auto j = config.to_json();
      j["output"] = *out_dir;
      config = zeno::cli::parse_config(j.dump());
    }
  } catch (const zeno::cli::ConfigError& e) {
    return report(e);
  }
  if (threads) config.threads = *threads;
  if (seed) config.seed = *seed;

  try {
    for (const auto& file : zeno::cli::run_experiment(config)) std::cout << file.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
