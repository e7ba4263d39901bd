#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chemofront/errors.hpp"
#include "chemofront/runner.hpp"

using namespace chemofront;

int main(int argc, char** argv) {
  CLI::App app{"Transition fronts of the parabolic-elliptic chemotaxis system with logistic source"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario;
  std::string out = "chemofront_out";
  std::optional<double> kappa;
  std::optional<std::uint64_t> seed;

  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario file (flat dotted keys)")->check(CLI::ExistingFile);
    sub->add_option("--scenario", scenario, "built-in scenario (constant, kpp, periodic) or a config path");
    sub->add_option("--out", out, "output directory, or the path of the main CSV when it ends in .csv")
        ->capture_default_str();
    sub->add_option("--kappa", kappa, "override wave.kappa");
    sub->add_option("--seed", seed, "override seed");
  }
  app.add_subcommand("defaults", "print every config key with its default");

  CLI11_PARSE(app, argc, argv);
  const auto* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "defaults") {
    std::cout << config_reference();
    return exit_ok;
  }

  ScenarioConfig cfg;
  try {
    std::vector<ConfigLayer> layers;
    if (!scenario.empty()) {
      if (const auto base = builtin_scenario(scenario)) layers.push_back({*base, "scenario " + scenario});
      else if (std::filesystem::is_regular_file(scenario)) layers.push_back({read_config_file(scenario), scenario});
      else throw Error(ErrorKind::validation, "'" + scenario + "' is neither a built-in scenario nor a file");
    }
    if (!config_path.empty()) layers.push_back({read_config_file(config_path), config_path});
    std::string flags;
    if (kappa) flags += "wave.kappa = " + format_double(*kappa) + "\n";
    if (seed) flags += "seed = " + std::to_string(*seed) + "\n";
    if (!flags.empty()) layers.push_back({flags, "<flags>"});
    cfg = parse_config_layers(layers);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
  const std::filesystem::path target(out);
  if (target.extension() == ".csv") {
    const auto dir = target.has_parent_path() ? target.parent_path() : std::filesystem::path(".");
    return run(chosen->get_name(), cfg, dir, std::cout, target.filename().string());
  }
  return run(chosen->get_name(), cfg, target, std::cout);
}
