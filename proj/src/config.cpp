#include "chemofront/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "chemofront/dispersion.hpp"
#include "chemofront/errors.hpp"

namespace chemofront {

namespace {

struct KeySpec {
  const char* key;
  const char* fallback;
  const char* help;
};

// Single source for defaults, accepted keys and the generated reference.
constexpr KeySpec kKeys[] = {
    {"coefficients.a.kind", "constant", "constant | periodic | sampled"},
    {"coefficients.a.value", "1", "constant kind: value of a"},
    {"coefficients.a.mean", "1", "periodic kind: mean of a"},
    {"coefficients.a.period", "1", "periodic kind: period T"},
    {"coefficients.a.terms", "", "periodic kind: 'amplitude frequency phase' triples separated by ';'"},
    {"coefficients.a.times", "", "sampled kind: comma-separated increasing times"},
    {"coefficients.a.values", "", "sampled kind: comma-separated values (linear interpolation)"},
    {"coefficients.b.kind", "constant", "as coefficients.a.kind"},
    {"coefficients.b.value", "1", "as coefficients.a.value"},
    {"coefficients.b.mean", "1", "as coefficients.a.mean"},
    {"coefficients.b.period", "1", "as coefficients.a.period"},
    {"coefficients.b.terms", "", "as coefficients.a.terms"},
    {"coefficients.b.times", "", "as coefficients.a.times"},
    {"coefficients.b.values", "", "as coefficients.a.values"},
    {"chemo.chi", "0.2", "chemotactic sensitivity chi >= 0"},
    {"chemo.mu", "1", "production rate mu > 0"},
    {"chemo.lambda", "1", "degradation rate lambda > 0"},
    {"grid.x0", "-60", "left end of the wave / simulation grid"},
    {"grid.x_end", "60", "right end of the wave / simulation grid"},
    {"grid.dx", "0.05", "grid spacing"},
    {"time.dt", "0.005", "time step"},
    {"time.t_end", "40", "simulate: final time"},
    {"time.record_every", "1", "simulate: snapshot interval"},
    {"wave.kappa", "0.5", "decay rate kappa in (0, min(kappa_chi, sqrt(abar)))"},
    {"wave.tol_wave", "1e-4", "outer fixed-point tolerance"},
    {"wave.slices", "64", "profiles stored per period (periodic coefficients)"},
    {"wave.max_outer", "50", "outer iteration cap"},
    {"wave.uniqueness_check", "true", "rebuild the wave from the phi_minus seed"},
    {"speed.theta", "0.5", "tracked level as a fraction of u*(t)"},
    {"speed.window_min", "5", "shortest averaging window W_min"},
    {"speed.burn_in", "5", "discarded initial time"},
    {"speed.x0", "-60", "left end of the spreading grid"},
    {"speed.x_end", "140", "right end of the spreading grid"},
    {"speed.t_end", "40", "final time of the spreading run"},
    {"speed.record_every", "0.1", "tracking interval"},
    {"speed.decay", "0", "initial decay rate for x > 0; 0 selects sqrt(abar)"},
    {"simulate.initial", "front", "front | bump"},
    {"verify.n_random", "20", "random phi in E per suite"},
    {"seed", "1", "seed of the randomized suites"},
};

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : kKeys)
    if (key == k.key) return &k;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorKind::parse, "key '" + key + "': '" + value + "' is not " + expected);
}

double to_double(const std::string& key, const std::string& text) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) bad_value(key, text, "a number");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  const auto s = trim(text);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) bad_value(key, text, "a nonnegative integer");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  bad_value(key, text, "true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& text, char sep) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(to_double(key, item));
  return out;
}

CoefficientKind coefficient(const std::map<std::string, std::string>& e, const std::string& name) {
  const std::string p = "coefficients." + name + ".";
  const auto& kind = e.at(p + "kind");
  if (kind == "constant") return ConstantKind{to_double(p + "value", e.at(p + "value"))};
  if (kind == "periodic") {
    PeriodicKind k;
    k.mean = to_double(p + "mean", e.at(p + "mean"));
    k.period = to_double(p + "period", e.at(p + "period"));
    const auto& terms = e.at(p + "terms");
    std::stringstream ss(terms);
    std::string term;
    while (std::getline(ss, term, ';')) {
      if (trim(term).empty()) continue;
      std::stringstream ts(term);
      std::vector<double> v;
      std::string tok;
      while (ts >> tok) v.push_back(to_double(p + "terms", tok));
      if (v.size() != 3) bad_value(p + "terms", term, "an 'amplitude frequency phase' triple");
      k.terms.push_back({v[0], v[1], v[2]});
    }
    return k;
  }
  if (kind == "sampled")
    return SampledKind{to_list(p + "times", e.at(p + "times"), ','), to_list(p + "values", e.at(p + "values"), ',')};
  bad_value(p + "kind", kind, "constant, periodic or sampled");
}

ScenarioConfig resolve(std::map<std::string, std::string> e) {
  ScenarioConfig c;
  const auto num = [&](const char* key) { return to_double(key, e.at(key)); };
  const auto count = [&](const char* key) { return to_unsigned(key, e.at(key)); };
  c.a = coefficient(e, "a");
  c.b = coefficient(e, "b");
  c.chemo = {num("chemo.chi"), num("chemo.mu"), num("chemo.lambda")};
  c.x0 = num("grid.x0");
  c.x_end = num("grid.x_end");
  c.dx = num("grid.dx");
  c.dt = num("time.dt");
  c.t_end = num("time.t_end");
  c.record_every = num("time.record_every");
  c.kappa = num("wave.kappa");
  c.tol_wave = num("wave.tol_wave");
  c.slices = count("wave.slices");
  c.max_outer = count("wave.max_outer");
  c.uniqueness_check = to_bool("wave.uniqueness_check", e.at("wave.uniqueness_check"));
  c.theta = num("speed.theta");
  c.window_min = num("speed.window_min");
  c.burn_in = num("speed.burn_in");
  c.speed_x0 = num("speed.x0");
  c.speed_x_end = num("speed.x_end");
  c.speed_t_end = num("speed.t_end");
  c.speed_record_every = num("speed.record_every");
  c.decay = num("speed.decay");
  c.initial = e.at("simulate.initial");
  if (c.initial != "front" && c.initial != "bump") bad_value("simulate.initial", c.initial, "front or bump");
  c.n_random = count("verify.n_random");
  c.seed = count("seed");
  c.entries = std::move(e);
  validate(c);
  return c;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::validation, what);
}

void read_layer(std::string_view text, const std::string& origin, std::map<std::string, std::string>& e) {
  std::map<std::string, std::size_t> seen;
  std::stringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto where = origin + ":" + std::to_string(line);
    std::string body = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == '#' && !quoted) {
        body.resize(i);
        break;
      }
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::parse, where + ": expected 'key = value'");
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = unquote(trim(std::string_view(body).substr(eq + 1)));
    if (!find_key(key)) throw Error(ErrorKind::parse, where + ": unknown key '" + key + "'");
    if (const auto it = seen.find(key); it != seen.end())
      throw Error(ErrorKind::parse, where + ": key '" + key + "' already set on line " + std::to_string(it->second));
    seen[key] = line;
    e[key] = value;
  }
}

}  // namespace

ScenarioConfig parse_config_layers(const std::vector<ConfigLayer>& layers) {
  std::map<std::string, std::string> e;
  for (const auto& k : kKeys) e[k.key] = k.fallback;
  for (const auto& layer : layers) read_layer(layer.text, layer.origin, e);
  try {
    return resolve(std::move(e));
  } catch (const Error& err) {
    std::string origins;
    for (const auto& layer : layers) origins += (origins.empty() ? "" : " + ") + layer.origin;
    throw Error(err.kind(), (origins.empty() ? "<defaults>" : origins) + ": " + err.what());
  }
}

ScenarioConfig parse_config_text(std::string_view text, const std::string& origin) {
  return parse_config_layers({{std::string(text), origin}});
}

std::string read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  return parse_config_text(read_config_file(path), path.string());
}

std::optional<std::string> builtin_scenario(std::string_view name) {
  if (name == "constant") return std::string("chemo.chi = 0.2\nchemo.mu = 1\nchemo.lambda = 1\n");
  if (name == "kpp") return std::string("chemo.chi = 0\nchemo.mu = 1\nchemo.lambda = 1\n");
  if (name == "periodic")
    return std::string(
        "coefficients.a.kind = periodic\ncoefficients.a.mean = 1\ncoefficients.a.period = 1\n"
        "coefficients.a.terms = \"0.5 1 0\"\nchemo.chi = 0.1\nchemo.mu = 1\nchemo.lambda = 2\n");
  return std::nullopt;
}

void validate(const ScenarioConfig& c, Request request) {
  validate(c.chemo);
  const auto pair = c.pair();  // validates the coefficient descriptors
  const auto report = check_hypotheses(pair, c.chemo);
  require(report.positive_bounded, "coefficients must be positive and bounded");
  require(c.dx > 0.0 && std::isfinite(c.dx), "grid.dx must be positive");
  require(c.x_end - c.x0 >= 10.0 * c.dx, "grid.x_end must exceed grid.x0 by at least 10 dx");
  require(c.dt > 0.0 && std::isfinite(c.dt), "time.dt must be positive");
  require(c.t_end >= 0.0, "time.t_end must be nonnegative");
  require(c.record_every > 0.0, "time.record_every must be positive");
  require(c.tol_wave > 0.0, "wave.tol_wave must be positive");
  require(c.slices >= 2, "wave.slices must be at least 2");
  require(c.max_outer >= 1, "wave.max_outer must be at least 1");
  require(c.theta > 0.0 && c.theta < 1.0, "speed.theta must lie in (0, 1)");
  require(c.window_min > 0.0, "speed.window_min must be positive");
  require(c.burn_in >= 0.0, "speed.burn_in must be nonnegative");
  require(c.speed_x_end - c.speed_x0 >= 10.0 * c.dx, "speed.x_end must exceed speed.x0 by at least 10 dx");
  require(c.speed_t_end > c.burn_in, "speed.t_end must exceed speed.burn_in");
  require(c.speed_record_every > 0.0, "speed.record_every must be positive");
  require(c.decay >= 0.0, "speed.decay must be nonnegative");
  require(c.kappa > 0.0, "wave.kappa must be positive");

  if (request == Request::dispersion && !(pair.b.inf() > c.chemo.chi_mu()))
    throw Error(ErrorKind::hypothesis_violation, "b_inf <= chi mu");
  if (request == Request::wave || request == Request::speed) {
    if (!report.h1)
      throw Error(ErrorKind::hypothesis_violation,
                  "(H1) fails: b_inf - chi mu (1 + a_sup/a_inf) = " + std::to_string(report.h1_margin) + " <= 0");
  }
  if (request == Request::wave) {
    require(pair.a.is_constant() || pair.a.is_periodic(), "wave needs constant or periodic a");
    require(pair.b.is_constant() || pair.b.is_periodic(), "wave needs constant or periodic b");
    require(c.x_end - c.x0 >= 40.0 / c.kappa, "grid must span at least 40 / kappa for a wave");
    const double cap = std::min(c_star(c.chemo, pair).kappa_chi, std::sqrt(pair.a.lower_mean()));
    require(c.kappa < cap, "wave.kappa must be below min(kappa_chi, sqrt(abar)) = " + std::to_string(cap));
  }
}

std::string config_reference() {
  std::string out = "# chemofront scenario keys (key = default  # meaning)\n";
  std::size_t width = 0;
  for (const auto& k : kKeys) width = std::max(width, std::string_view(k.key).size() + std::string_view(k.fallback).size() + 5);
  for (const auto& k : kKeys) {
    std::string line = std::string(k.key) + " = " + (std::string_view(k.fallback).empty() ? "\"\"" : k.fallback);
    line.resize(std::max(width, line.size()) + 1, ' ');
    out += line + "# " + k.help + "\n";
  }
  return out;
}

}  // namespace chemofront
