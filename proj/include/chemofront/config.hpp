#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemofront/coefficients.hpp"
#include "chemofront/params.hpp"

namespace chemofront {

struct ScenarioConfig {
  CoefficientKind a = ConstantKind{1.0};
  CoefficientKind b = ConstantKind{1.0};
  ChemoParams chemo;

  double x0 = -60.0;
  double x_end = 60.0;
  double dx = 0.05;

  double dt = 0.005;
  double t_end = 40.0;
  double record_every = 1.0;

  double kappa = 0.5;
  double tol_wave = 1e-4;
  std::size_t slices = 64;
  std::size_t max_outer = 50;
  bool uniqueness_check = true;

  double theta = 0.5;
  double window_min = 5.0;
  double burn_in = 5.0;
  double speed_x0 = -60.0;
  double speed_x_end = 140.0;
  double speed_t_end = 40.0;
  double speed_record_every = 0.1;
  double decay = 0.0;

  std::string initial = "front";
  std::size_t n_random = 20;
  std::uint64_t seed = 1;

  /// Every key with its resolved text value, sorted.
  std::map<std::string, std::string> entries;

  CoefficientPair pair() const { return {Coefficient(a), Coefficient(b)}; }
};

/// Parses flat `dotted.key = value` text ('#' starts a comment) on top of the defaults.
ScenarioConfig parse_config_text(std::string_view text, const std::string& origin = "<text>");
ScenarioConfig parse_config(const std::filesystem::path& path);
std::string read_config_file(const std::filesystem::path& path);

struct ConfigLayer {
  std::string text;
  std::string origin;
};

/// Later layers override earlier ones key by key; a key may appear once per layer.
ScenarioConfig parse_config_layers(const std::vector<ConfigLayer>& layers);

/// Built-in scenario texts: constant, kpp, periodic.
std::optional<std::string> builtin_scenario(std::string_view name);

enum class Request { plain, dispersion, wave, speed };

/// Checks the invariants a request needs; throws validation or hypothesis_violation errors.
void validate(const ScenarioConfig& cfg, Request request = Request::plain);

/// Text listing every key, its default and meaning.
std::string config_reference();

}  // namespace chemofront
