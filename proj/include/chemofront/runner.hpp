#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "chemofront/config.hpp"

namespace chemofront {

inline constexpr const char* kVersion = "1.0.0";

/// Exit statuses of `run`.
enum ExitCode : int { exit_ok = 0, exit_input = 1, exit_numerical = 2 };

/// Subcommands: dispersion, wave, simulate, speed, verify.
const std::vector<std::string>& subcommands();

/// Runs one subcommand, writing its artifacts and provenance.json into `out`.
/// `primary_csv` renames the main CSV (wave_profile.csv, simulate.csv, speed_crossings.csv).
/// Progress and the verdict go to `log`. Never throws for solver or config errors.
int run(const std::string& subcommand, const ScenarioConfig& config, const std::filesystem::path& out,
        std::ostream& log, const std::string& primary_csv = "");

/// Worker cap: CHEMOFRONT_THREADS if set and positive, else the hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads; rethrows the first error by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// 17 significant digits; "nan" for NaN.
std::string format_double(double v);

}  // namespace chemofront
