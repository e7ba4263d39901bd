#include "chemofront/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "chemofront/dispersion.hpp"
#include "chemofront/errors.hpp"
#include "chemofront/speed.hpp"
#include "chemofront/wave.hpp"

namespace chemofront {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw Error(ErrorKind::validation, "cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_double(v);
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::validation, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

struct Context {
  const ScenarioConfig& cfg;
  fs::path out;
  std::ostream& log;
  std::string primary;
  std::vector<std::string> outputs;

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return out / name;
  }
  /// The main CSV, renamed when the caller asked for a specific file.
  fs::path csv(const std::string& name) { return file(primary.empty() ? name : primary); }
};

json scenario_constants(const ScenarioConfig& cfg) {
  const auto pair = cfg.pair();
  const auto report = check_hypotheses(pair, cfg.chemo);
  json j;
  j["a_inf"] = pair.a.inf();
  j["a_sup"] = pair.a.sup();
  j["a_lower_mean"] = pair.a.lower_mean();
  j["b_inf"] = pair.b.inf();
  j["b_sup"] = pair.b.sup();
  j["h1"] = report.h1;
  j["h1_margin"] = report.h1_margin;
  if (pair.b.inf() > cfg.chemo.chi_mu()) {
    const auto cs = c_star(cfg.chemo, pair);
    j["kappa_chi"] = cs.kappa_chi;
    j["kappa_star"] = cs.kappa_star;
    j["c_star"] = cs.c_star;
    j["lambda_chi"] = lambda_threshold(cfg.chemo, pair).value;
  }
  return j;
}

FrontFamily family_of(const ScenarioConfig& cfg) { return FrontFamily::build(cfg.pair(), cfg.chemo, cfg.kappa); }

void run_dispersion(Context& c) {
  validate(c.cfg, Request::dispersion);
  const auto pair = c.cfg.pair();
  const auto cs = c_star(c.cfg.chemo, pair);
  const auto kc = kappa_chi(c.cfg.chemo, pair.b.inf());
  const auto lt = lambda_threshold(c.cfg.chemo, pair);
  json j;
  j["kappa_chi"] = cs.kappa_chi;
  j["kappa_star"] = cs.kappa_star;
  j["c_star"] = cs.c_star;
  j["lambda_chi"] = lt.value;
  j["chemotaxis_absent"] = kc.chemotaxis_absent;
  j["h1_margin"] = check_hypotheses(pair, c.cfg.chemo).h1_margin;
  j["kappa"] = c.cfg.kappa;
  j["c_kappa_lower_mean"] = wave_speed_fn(pair, c.cfg.kappa).lower_mean();
  j["small_chi_criterion"] =
      c.cfg.chemo.lambda > pair.a.lower_mean() ? json(small_chi_criterion(c.cfg.chemo, pair)) : json(nullptr);
  for (const char* k : {"epsilon", "A0", "A1", "A2", "d", "delta0", "A_sup_norm"}) j[k] = nullptr;
  try {
    const auto f = front_constants(pair, c.cfg.chemo, c.cfg.kappa);
    j["epsilon"] = f.epsilon;
    j["A0"] = f.A0;
    j["A1"] = f.A1;
    j["A2"] = f.A2;
    j["d"] = f.d;
    j["delta0"] = f.delta0;
    j["A_sup_norm"] = f.A.sup_norm();
  } catch (const Error& e) {
    if (!is_input_error(e.kind())) throw;
    j["front_constants_error"] = e.what();
  }
  write_json(c.file("dispersion.json"), j);
  c.log << j.dump(2) << '\n';
}

void run_wave(Context& c) {
  validate(c.cfg, Request::wave);
  const auto fam = family_of(c.cfg);
  WaveOptions o;
  o.x0 = c.cfg.x0;
  o.x_end = c.cfg.x_end;
  o.dx = c.cfg.dx;
  o.dt = c.cfg.dt;
  o.tol_wave = c.cfg.tol_wave;
  o.slices = c.cfg.slices;
  o.max_outer = c.cfg.max_outer;
  o.uniqueness_check = c.cfg.uniqueness_check;
  const auto w = fam.pair().is_constant() ? constant_wave(fam, o) : fixed_point(fam, o);

  CsvWriter csv(c.csv("wave_profile.csv"), {"t_slice", "x", "U", "V"});
  for (std::size_t k = 0; k < w.profiles.size(); ++k) {
    const auto& u = w.profiles[k];
    for (std::size_t i = 0; i < u.size(); ++i)
      csv.row({w.times[k], u.x(i), u[i], w.psi[k].psi[i]});
  }
  const auto audit = wave_speed_audit(w, fam);
  json j;
  j["kappa"] = w.kappa;
  j["period"] = w.period ? json(*w.period) : json(nullptr);
  j["dt"] = w.dt;
  j["c_kappa_lower_mean"] = fam.speed_fn().lower_mean();
  j["residual_linf"] = w.residual_linf;
  j["periodicity_defect"] = w.periodicity_defect;
  j["sandwich_margin"] = w.sandwich_margin;
  j["outer_iterations"] = w.outer_iterations;
  j["last_change"] = w.last_change;
  j["right_amplitude"] = w.right_amplitude;
  j["inner"] = {{"window", w.inner.window}, {"doublings", w.inner.doublings}, {"clips", w.inner.clips}};
  j["asymptotics"] = {{"x_left", w.asymptotics.x_left},
                      {"x_right", w.asymptotics.x_right},
                      {"left_defect", w.asymptotics.left_defect},
                      {"right_defect", w.asymptotics.right_defect}};
  j["half_level_x"] = w.half_level_x;
  j["seed_distance"] = w.seed_distance ? json(*w.seed_distance) : json(nullptr);
  j["warnings"] = w.warnings;
  j["audit"] = {{"least_mean_speed", audit.estimate.least_mean_speed},
                {"expected_mean", audit.expected_mean},
                {"relative_speed_error", audit.relative_speed_error},
                {"max_deviation", audit.max_deviation},
                {"period_displacement", audit.period_displacement},
                {"expected_period_displacement", audit.expected_period_displacement}};
  write_json(c.file("wave.json"), j);
  c.log << "wave: kappa " << w.kappa << ", " << w.outer_iterations << " outer iterations, residual "
        << w.residual_linf << ", audit speed " << audit.estimate.least_mean_speed << '\n';
}

void run_simulate(Context& c) {
  validate(c.cfg, Request::plain);
  const auto pair = c.cfg.pair();
  const auto u_star = entire_logistic(pair);
  const ImexStepper stepper(pair, c.cfg.chemo, u_star);
  SolverState s;
  s.frame = Frame::lab;
  s.dt = c.cfg.dt;
  s.right.kind = RightBoundary::Kind::dirichlet_zero;
  const double u0 = u_star(0.0);
  const double decay = c.cfg.decay > 0.0 ? c.cfg.decay : std::sqrt(pair.a.lower_mean());
  const auto grid = uniform_grid(c.cfg.x0, c.cfg.x_end, c.cfg.dx);
  if (c.cfg.initial == "bump") {
    s.left.kind = LeftBoundary::Kind::neumann_zero;
    s.u = sample(grid, [&](double x) { return std::abs(x) < 5.0 ? u0 * std::pow(std::cos(M_PI * x / 10.0), 2) : 0.0; });
  } else {
    s.u = sample(grid, [&](double x) { return x < 0.0 ? u0 : u0 * std::exp(-decay * x); });
  }
  s.u.values.back() = 0.0;

  CsvWriter csv(c.csv("simulate.csv"), {"t", "x", "u", "v"});
  CsvWriter track(c.file("simulate_front.csv"), {"t", "u_star", "x_half", "max_u"});
  double max_u = 0.0;
  const auto record = [&](const SolverState& st) {
    const auto v = stepper.lab_field(st.u);
    for (std::size_t i = 0; i < st.u.size(); ++i) csv.row({st.t, st.u.x(i), st.u[i], v.psi[i]});
    const double level = 0.5 * u_star(st.t);
    const auto x = rightmost_crossing(st.u, level);
    const double m = sup_norm(st.u.view());
    max_u = std::max(max_u, m);
    track.row({st.t, u_star(st.t), x ? *x : std::nan(""), m});
  };
  record(s);
  stepper.evolve(s, c.cfg.t_end, nullptr, record, c.cfg.record_every);
  json j;
  j["t_end"] = s.t;
  j["max_u"] = max_u;
  j["clips"] = s.clips;
  const auto x = rightmost_crossing(s.u, 0.5 * u_star(s.t));
  j["final_half_level_x"] = x ? json(*x) : json(nullptr);
  write_json(c.file("simulate.json"), j);
  c.log << "simulate: t = " << s.t << ", max u " << max_u << ", clips " << s.clips << '\n';
}

void run_speed(Context& c) {
  validate(c.cfg, Request::speed);
  SpreadingOptions o;
  o.x0 = c.cfg.speed_x0;
  o.x_end = c.cfg.speed_x_end;
  o.dx = c.cfg.dx;
  o.dt = c.cfg.dt;
  o.t_end = c.cfg.speed_t_end;
  o.record_every = c.cfg.speed_record_every;
  o.decay = c.cfg.decay;
  o.track = {c.cfg.theta, c.cfg.burn_in, c.cfg.window_min};
  const auto r = spreading_experiment(c.cfg.pair(), c.cfg.chemo, o);
  const auto& e = r.estimate;
  CsvWriter csv(c.csv("speed_crossings.csv"), {"t", "x_cross", "window_speed"});
  for (std::size_t i = 0; i < e.times.size(); ++i) csv.row({e.times[i], e.crossings[i], e.window_speeds[i]});
  json j;
  j["theta"] = e.theta;
  j["least_mean_speed"] = e.least_mean_speed;
  j["mean_speed"] = e.mean_speed;
  j["final_window_speed"] = number_or_null(e.window_speeds.back());
  j["fit_residual"] = e.fit_residual;
  j["lower_bound"] = r.lower_bound;
  j["threshold"] = 0.95 * r.lower_bound;
  j["verdict"] = r.pass ? "PASS" : "FAIL";
  j["max_u"] = r.max_u;
  j["clips"] = r.clips;
  write_json(c.file("speed.json"), j);
  c.log << "speed: least mean " << e.least_mean_speed << " (threshold " << 0.95 * r.lower_bound << "), mean "
        << e.mean_speed << ", verdict " << (r.pass ? "PASS" : "FAIL") << '\n';
}

json check_json(const EnvelopeCheck& k) { return {{"worst", k.worst}, {"violations", k.violations}}; }

void run_verify(Context& c) {
  validate(c.cfg, Request::wave);
  const auto fam = family_of(c.cfg);
  const auto grid = uniform_grid(c.cfg.x0, c.cfg.x_end, c.cfg.dx);
  std::vector<double> times{0.0};
  if (const auto T = fam.pair().common_period(); T && !fam.pair().is_constant()) {
    times.clear();
    for (int k = 0; k < 8; ++k) times.push_back(*T * k / 8.0);
  }
  std::vector<EnvelopeSuite> parts(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    parts[i] = verify_envelopes(fam, grid, c.cfg.n_random, c.cfg.seed, {times[i]});
  });
  EnvelopeSuite suite = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto merge = [](EnvelopeCheck& a, const EnvelopeCheck& b, bool super) {
      a.worst = super ? std::min(a.worst, b.worst) : std::max(a.worst, b.worst);
      a.violations += b.violations;
    };
    merge(suite.phi_kappa, parts[i].phi_kappa, true);
    merge(suite.plateau, parts[i].plateau, true);
    merge(suite.lower, parts[i].lower, false);
    merge(suite.constant, parts[i].constant, false);
  }

  // turning-point structure on 1000 times
  const auto& f = fam.front();
  const double T = fam.pair().common_period().value_or(1.0);
  const double gap = std::log((f.kappa + f.epsilon) / f.kappa) / f.epsilon;
  double gap_err = 0.0, root_err = 0.0, peak_ratio_min = INFINITY, peak_ratio_max = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double t = T * k / 1000.0;
    const auto tp = fam.turning_points(t);
    gap_err = std::max(gap_err, std::abs(tp.x_plus - tp.x_minus - gap));
    root_err = std::max(root_err, std::abs(fam.phi_lower(tp.x_minus, t)));
    peak_ratio_min = std::min(peak_ratio_min, tp.peak / tp.peak_bound);
    peak_ratio_max = std::max(peak_ratio_max, tp.peak / tp.peak_bound);
  }
  const bool structure_ok = gap_err < 1e-12 && root_err < 1e-12;
  json j;
  j["slack"] = suite.slack;
  j["fields"] = suite.fields;
  j["times"] = times;
  j["deltas"] = suite.deltas;
  j["phi_kappa"] = check_json(suite.phi_kappa);
  j["plateau"] = check_json(suite.plateau);
  j["lower"] = check_json(suite.lower);
  j["constant"] = check_json(suite.constant);
  j["suite"] = suite.ok() ? "PASS" : "FAIL";
  j["structure"] = {{"gap", gap},
                    {"gap_error", gap_err},
                    {"root_error", root_err},
                    {"peak_over_printed_bound", {peak_ratio_min, peak_ratio_max}},
                    {"d", f.d},
                    {"verdict", structure_ok ? "PASS" : "FAIL"}};
  j["verdict"] = suite.ok() && structure_ok ? "PASS" : "FAIL";
  write_json(c.file("verify.json"), j);
  c.log << "verify: super phi_kappa " << (suite.phi_kappa.violations ? "FAIL" : "PASS") << ", super plateau "
        << (suite.plateau.violations ? "FAIL" : "PASS") << ", sub lower " << (suite.lower.violations ? "FAIL" : "PASS")
        << ", sub constant " << (suite.constant.violations ? "FAIL" : "PASS") << ", turning points "
        << (structure_ok ? "PASS" : "FAIL") << '\n';
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"dispersion", "wave", "simulate", "speed", "verify"};
  return names;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("CHEMOFRONT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(n, worker_count());
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::mutex m;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(m);
          if (next == n) return;
          i = next++;
        }
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int run(const std::string& subcommand, const ScenarioConfig& config, const fs::path& out, std::ostream& log,
        const std::string& primary_csv) {
  Context c{config, out, log, primary_csv, {}};
  int status = exit_ok;
  json error = nullptr;
  try {
    fs::create_directories(out);
    if (subcommand == "dispersion") run_dispersion(c);
    else if (subcommand == "wave") run_wave(c);
    else if (subcommand == "simulate") run_simulate(c);
    else if (subcommand == "speed") run_speed(c);
    else if (subcommand == "verify") run_verify(c);
    else throw Error(ErrorKind::validation, "unknown subcommand '" + subcommand + "'");
  } catch (const Error& e) {
    status = is_input_error(e.kind()) ? exit_input : exit_numerical;
    error = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    log << "error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    status = exit_input;
    error = {{"kind", "io"}, {"message", e.what()}};
    log << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    status = exit_numerical;
    error = {{"kind", "internal"}, {"message", e.what()}};
    log << "error: " << e.what() << '\n';
  }

  json p;
  p["tool"] = "chemofront";
  p["version"] = kVersion;
  p["subcommand"] = subcommand;
  p["status"] = status;
  p["error"] = error;
  p["config"] = config.entries;
  try {
    p["constants"] = scenario_constants(config);
  } catch (const std::exception& e) {
    p["constants"] = {{"error", e.what()}};
  }
  p["tolerances"] = {{"bisection", 1e-12},
                     {"tol_ode", 1e-8},
                     {"tol_wave", config.tol_wave},
                     {"tol_inner", config.tol_wave / 10.0},
                     {"residual_slack", 10.0 * config.dx * config.dx},
                     {"speed_margin", 0.05}};
  p["outputs"] = c.outputs;
  try {
    fs::create_directories(out);
    write_json(out / "provenance.json", p);
  } catch (const std::exception& e) {
    log << "error: cannot write provenance: " << e.what() << '\n';
    if (status == exit_ok) status = exit_input;
  }
  return status;
}

}  // namespace chemofront
