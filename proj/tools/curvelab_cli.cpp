#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvelab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"curvelab: numerical experiments for singular integrals along "
               "curved trajectories"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::int64_t seed_override = -1;
  CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("--config", config_path, "path to the JSON config")->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--seed", seed_override, "seed (overrides config)");

  CLI::App* list = app.add_subcommand("list", "list experiments and presets");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << "experiments:\n";
    for (const auto& n : curvelab::experiment_names()) std::cout << "  " << n << "\n";
    std::cout << "presets:\n";
    for (const auto& n : curvelab::preset_names()) std::cout << "  " << n << "\n";
    return 0;
  }

  try {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "cannot open config: " << config_path << "\n";
      return 2;
    }
    nlohmann::json j = nlohmann::json::parse(is);
    curvelab::ExperimentConfig cfg = curvelab::ExperimentConfig::from_json(j);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

    curvelab::ExperimentReport rep = curvelab::run_experiment(cfg);
    std::cout << rep.text;
    if (!cfg.out_dir.empty())
      std::cout << "report written to " << cfg.out_dir << "\n";
    return rep.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
