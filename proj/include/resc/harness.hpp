#pragma once

#include <string>
#include <vector>

#include "resc/controller.hpp"
#include "resc/plants.hpp"

namespace resc {

enum class PlantKind { StaticMap, Hammerstein };

struct ScheduleEntry {
    double time = 0.0;
    Vector theta_star;
};

struct Scenario {
    EscConfig config;
    PlantKind plant = PlantKind::StaticMap;
    double tau_s = 10.0; // Hammerstein only
    std::vector<ScheduleEntry> theta_star_schedule;
    double duration = 0.0;
    Matrix hessian; // empty means identity
    /// Per-channel convergence band; empty means 3 * k0 * t_hold. Set it to compare runs on a common target.
    Vector band;
};

std::vector<std::string> validate(const Scenario& scenario);

struct TrajectoryRecord {
    double t = 0.0;
    Vector theta;
    double y = 0.0;
    double q_true = 0.0;
    Vector g_hat;
    Vector epsilon;
    Vector k_applied;
    bool switched = false;
    bool degenerate = false;
};

/// Metrics for the interval between two optimum changes.
struct SegmentMetrics {
    double start = 0.0;
    double end = 0.0;
    Vector theta_star;
    /// Time from segment start until |theta - theta*| first lies inside the band on every channel; +inf if never.
    double convergence_time = 0.0;
    /// Time from segment start after which the band is never left again; +inf if the last sample is outside.
    double settling_time = 0.0;
    /// Mean |theta - theta*| per channel over the final quarter of the segment.
    Vector steady_mae;
};

struct RunMetrics {
    std::vector<SegmentMetrics> segments;
    /// Relay cycle period over the steady windows: twice the mean interval between switches; +inf with fewer than two.
    double mean_switch_period = 0.0;
    /// Mean true cost over the final quarter of the last segment.
    double final_cost_mean = 0.0;
    /// Switches counted in the steady windows.
    int switches = 0;
    std::uint64_t seed = 0;

    const SegmentMetrics& final_segment() const { return segments.back(); }
};

struct RunResult {
    std::vector<TrajectoryRecord> records;
    RunMetrics metrics;
};

/// Per-channel convergence band: the override if set, else 3 * k0 * t_hold.
Vector convergence_band(const Scenario& scenario);

enum class GradientSource {
    Estimated,
    Analytic, // controller reads the plant's exact gradient (verification runs)
};

RunResult run_scenario(const Scenario& scenario, GradientSource source = GradientSource::Estimated);

/// Computes metrics from an existing trajectory.
RunMetrics compute_metrics(const Scenario& scenario, const std::vector<TrajectoryRecord>& records);

/// Runs the scenario once per seed, seeds base, base+1, ..., in that order.
std::vector<RunMetrics> run_ensemble(const Scenario& scenario, std::uint64_t first_seed, int count);

/// Median over runs of the final segment's convergence time and per-channel steady error.
struct EnsembleSummary {
    std::string label;
    double convergence_time = 0.0;
    double settling_time = 0.0;
    Vector steady_mae;
    double mean_switch_period = 0.0;
    double final_cost_mean = 0.0;
    int runs = 0;
};

double median(std::vector<double> values);
EnsembleSummary summarize(std::string label, const std::vector<RunMetrics>& runs);

/// Orders runs by convergence time and renders a text table of speed against steady error.
std::string compare_runs(std::vector<EnsembleSummary> runs);

} // namespace resc
