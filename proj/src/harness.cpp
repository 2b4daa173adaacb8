#include "resc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace resc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t sample_count(const Scenario& s)
{
    return static_cast<std::size_t>(std::llround(s.duration / s.config.dt));
}

QuadraticMap make_map(const Scenario& s)
{
    const Vector& start = s.theta_star_schedule.front().theta_star;
    if (s.hessian.size() == 0) {
        return QuadraticMap(start);
    }
    return QuadraticMap(start, s.hessian);
}

std::unique_ptr<Plant> make_plant(const Scenario& s)
{
    QuadraticMap map = make_map(s);
    if (s.plant == PlantKind::Hammerstein) {
        // Start the lag at rest on the initial cost.
        const double x0 = map.eval(s.config.theta_init);
        return std::make_unique<HammersteinPlant>(std::move(map), s.tau_s, x0);
    }
    return std::make_unique<StaticPlant>(std::move(map));
}

} // namespace

std::vector<std::string> validate(const Scenario& s)
{
    std::vector<std::string> v = validate(s.config);
    if (s.plant == PlantKind::Hammerstein && !(s.tau_s > 0.0)) {
        v.push_back("tau_s must be positive");
    }
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
        v.push_back("duration must be positive");
    }
    if (s.theta_star_schedule.empty()) {
        v.push_back("theta_star_schedule must have at least one entry");
        return v;
    }
    if (s.theta_star_schedule.front().time != 0.0) {
        v.push_back("theta_star_schedule must start at time 0");
    }
    for (std::size_t i = 0; i < s.theta_star_schedule.size(); ++i) {
        const auto& e = s.theta_star_schedule[i];
        if (e.theta_star.size() != s.config.p) {
            v.push_back("theta_star_schedule entry " + std::to_string(i) + " must have p entries");
        }
        if (i > 0 && !(e.time > s.theta_star_schedule[i - 1].time)) {
            v.push_back("theta_star_schedule times must be strictly increasing");
        }
    }
    if (s.hessian.size() != 0 && (s.hessian.rows() != s.config.p || s.hessian.cols() != s.config.p)) {
        v.push_back("hessian must be p x p");
    }
    if (s.band.size() != 0 && (s.band.size() != s.config.p || (s.band.array() < 0.0).any())) {
        v.push_back("band must have p non-negative entries");
    }
    return v;
}

Vector convergence_band(const Scenario& scenario)
{
    if (scenario.band.size() != 0) {
        return scenario.band;
    }
    return 3.0 * expected_oscillation(scenario.config.k0, scenario.config.t_hold);
}

RunResult run_scenario(const Scenario& scenario, GradientSource source)
{
    if (auto violations = validate(scenario); !violations.empty()) {
        throw ConfigError(std::move(violations));
    }

    auto plant = make_plant(scenario);
    EscController controller(scenario.config);
    if (source == GradientSource::Analytic) {
        controller.set_gradient_oracle([&plant](const Vector& theta) { return plant->map().gradient(theta); });
    }

    const double dt = scenario.config.dt;
    const std::size_t n = sample_count(scenario);
    std::size_t next_entry = 1;

    RunResult result;
    result.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        while (next_entry < scenario.theta_star_schedule.size()
               && scenario.theta_star_schedule[next_entry].time <= t + 1e-9 * dt) {
            plant->set_theta_star(scenario.theta_star_schedule[next_entry].theta_star);
            ++next_entry;
        }

        const Vector& theta = controller.theta();
        const double q_true = plant->true_cost(theta);
        const double y = plant->measure(theta, dt);
        const ControllerOutput out = controller.step(y);

        result.records.push_back({t, out.theta, y, q_true, out.g_hat.g_hat, out.relay.epsilon, out.relay.k_applied,
                                  out.switched, out.g_hat.degenerate});
    }

    result.metrics = compute_metrics(scenario, result.records);
    return result;
}

RunMetrics compute_metrics(const Scenario& scenario, const std::vector<TrajectoryRecord>& records)
{
    RunMetrics metrics;
    metrics.seed = scenario.config.seed;
    if (records.empty()) {
        return metrics;
    }

    const Eigen::Index p = scenario.config.p;
    const double dt = scenario.config.dt;
    const Vector band = convergence_band(scenario);
    const auto& schedule = scenario.theta_star_schedule;
    const double tol = 1e-9 * dt;

    double interval_sum = 0.0;
    int intervals = 0;
    double final_cost_sum = 0.0;
    std::size_t final_cost_count = 0;

    for (std::size_t k = 0; k < schedule.size(); ++k) {
        SegmentMetrics seg;
        seg.start = schedule[k].time;
        seg.end = k + 1 < schedule.size() ? schedule[k + 1].time : scenario.duration;
        seg.theta_star = schedule[k].theta_star;
        const double steady_from = seg.start + 0.75 * (seg.end - seg.start);

        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].t >= seg.start - tol && records[i].t < seg.end - tol) {
                idx.push_back(i);
            }
        }
        if (idx.empty()) {
            continue;
        }

        std::optional<std::size_t> first_inside;
        std::optional<std::size_t> last_outside;
        for (std::size_t i : idx) {
            const Vector err = (records[i].theta - seg.theta_star).cwiseAbs();
            if ((err.array() > band.array()).any()) {
                last_outside = i;
            } else if (!first_inside) {
                first_inside = i;
            }
        }
        seg.convergence_time = first_inside ? records[*first_inside].t - seg.start : kInf;
        if (!last_outside) {
            seg.settling_time = 0.0;
        } else if (*last_outside == idx.back()) {
            seg.settling_time = kInf;
        } else {
            seg.settling_time = records[*last_outside + 1].t - seg.start;
        }

        seg.steady_mae = Vector::Zero(p);
        std::size_t steady_count = 0;
        double last_switch = -kInf;
        for (std::size_t i : idx) {
            if (records[i].t < steady_from - tol) {
                continue;
            }
            seg.steady_mae += (records[i].theta - seg.theta_star).cwiseAbs();
            ++steady_count;
            if (k + 1 == schedule.size()) {
                final_cost_sum += records[i].q_true;
                ++final_cost_count;
            }
            if (records[i].switched) {
                if (std::isfinite(last_switch)) {
                    interval_sum += records[i].t - last_switch;
                    ++intervals;
                }
                last_switch = records[i].t;
                ++metrics.switches;
            }
        }
        if (steady_count > 0) {
            seg.steady_mae /= static_cast<double>(steady_count);
        }
        metrics.segments.push_back(std::move(seg));
    }

    // One relay cycle is two switches.
    metrics.mean_switch_period = intervals > 0 ? 2.0 * interval_sum / intervals : kInf;
    metrics.final_cost_mean = final_cost_count > 0 ? final_cost_sum / static_cast<double>(final_cost_count) : 0.0;
    return metrics;
}

std::vector<RunMetrics> run_ensemble(const Scenario& scenario, std::uint64_t first_seed, int count)
{
    std::vector<RunMetrics> runs;
    runs.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        Scenario s = scenario;
        s.config.seed = first_seed + static_cast<std::uint64_t>(i);
        runs.push_back(run_scenario(s).metrics);
    }
    return runs;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    if (std::isinf(values[mid - 1]) && values[mid - 1] == values[mid]) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

EnsembleSummary summarize(std::string label, const std::vector<RunMetrics>& runs)
{
    EnsembleSummary out;
    out.label = std::move(label);
    out.runs = static_cast<int>(runs.size());
    if (runs.empty()) {
        return out;
    }

    const Eigen::Index p = runs.front().final_segment().steady_mae.size();
    std::vector<double> conv, settle, period, cost;
    std::vector<std::vector<double>> mae(static_cast<std::size_t>(p));
    for (const auto& r : runs) {
        conv.push_back(r.final_segment().convergence_time);
        settle.push_back(r.final_segment().settling_time);
        period.push_back(r.mean_switch_period);
        cost.push_back(r.final_cost_mean);
        for (Eigen::Index j = 0; j < p; ++j) {
            mae[static_cast<std::size_t>(j)].push_back(r.final_segment().steady_mae(j));
        }
    }
    out.convergence_time = median(conv);
    out.settling_time = median(settle);
    out.mean_switch_period = median(period);
    out.final_cost_mean = median(cost);
    out.steady_mae.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        out.steady_mae(j) = median(mae[static_cast<std::size_t>(j)]);
    }
    return out;
}

std::string compare_runs(std::vector<EnsembleSummary> runs)
{
    std::stable_sort(runs.begin(), runs.end(), [](const EnsembleSummary& a, const EnsembleSummary& b) {
        return a.convergence_time < b.convergence_time;
    });

    std::ostringstream os;
    os << std::left << std::setw(24) << "run" << std::right << std::setw(6) << "runs" << std::setw(14)
       << "conv_time" << std::setw(14) << "settle_time" << std::setw(16) << "max_steady_mae" << std::setw(15)
       << "switch_period" << '\n';
    for (const auto& r : runs) {
        os << std::left << std::setw(24) << r.label << std::right << std::setw(6) << r.runs << std::setw(14)
           << r.convergence_time << std::setw(14) << r.settling_time << std::setw(16)
           << (r.steady_mae.size() ? r.steady_mae.maxCoeff() : 0.0) << std::setw(15) << r.mean_switch_period
           << '\n';
    }
    return os.str();
}

} // namespace resc
