#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resc/harness.hpp"

namespace resc::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParseError = 2,
    kInvalidConfig = 3,
    kIoError = 4,
};

/// A path to a scenario file, or the name of a built-in preset when no such file exists.
Scenario resolve_scenario(const std::string& config);

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

/// Writes trajectory.csv, metrics.json and the resolved config.cfg into out_dir.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
    std::string config;
    std::string param; // k0, t_hold, zeta or dt
    std::vector<double> values;
    int seeds = 1;
    std::string out_dir = ".";
};

/// Applies one swept value. In static mode a dt change also moves t_hold to p * dt.
void apply_parameter(Scenario& scenario, const std::string& param, double value);

/// One metrics row per (value, seed) in sweep.csv, medians per value in sweep_summary.csv.
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

/// Lists presets; with write_dir, also saves each as <name>.cfg there.
int cmd_presets(const std::optional<std::string>& write_dir, std::ostream& out, std::ostream& err);

} // namespace resc::cli
