#include "resc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "resc/config_io.hpp"

namespace resc::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir);
    }
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void check_written(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

/// Runs `body` and maps library errors onto exit codes.
template<typename F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
}

void check_scenario(const Scenario& s)
{
    if (auto violations = validate(s); !violations.empty()) {
        throw ConfigError(std::move(violations));
    }
}

} // namespace

Scenario resolve_scenario(const std::string& config)
{
    if (fs::exists(config)) {
        return load_scenario(config);
    }
    try {
        return find_preset(config).scenario;
    } catch (const std::out_of_range&) {
        throw IoError("no such file or preset: " + config);
    }
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        Scenario scenario = resolve_scenario(options.config);
        if (options.seed) {
            scenario.config.seed = *options.seed;
        }
        check_scenario(scenario);
        const RunResult result = run_scenario(scenario);

        ensure_dir(options.out_dir);
        const fs::path dir(options.out_dir);

        const auto csv_path = dir / "trajectory.csv";
        auto csv = open_out(csv_path);
        write_trajectory_csv(csv, result.records);
        check_written(csv, csv_path);

        const auto metrics_path = dir / "metrics.json";
        auto metrics = open_out(metrics_path);
        metrics << metrics_json(result.metrics);
        check_written(metrics, metrics_path);

        save_scenario(scenario, (dir / "config.cfg").string());

        const auto& last = result.metrics.final_segment();
        out << "samples: " << result.records.size() << '\n'
            << "final segment convergence_time: " << format_double(last.convergence_time) << '\n'
            << "final segment steady_mae: " << last.steady_mae.transpose() << '\n'
            << "mean_switch_period: " << format_double(result.metrics.mean_switch_period) << '\n'
            << "wrote " << csv_path.string() << ", " << metrics_path.string() << '\n';
        return kOk;
    });
}

void apply_parameter(Scenario& scenario, const std::string& param, double value)
{
    EscConfig& c = scenario.config;
    if (param == "k0") {
        c.k0 = Vector::Constant(c.p, value);
    } else if (param == "t_hold") {
        c.t_hold = value;
    } else if (param == "zeta") {
        c.zeta = value;
    } else if (param == "dt") {
        c.dt = value;
        if (c.mode == EscMode::Static) {
            c.t_hold = static_cast<double>(c.p) * value;
        }
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + param + "' (expected k0, t_hold, zeta or dt)");
    }
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err)
{
    if (options.values.empty() || options.seeds < 1) {
        err << "error: sweep needs at least one value and one seed\n";
        return kUsage;
    }
    if (options.param != "k0" && options.param != "t_hold" && options.param != "zeta" && options.param != "dt") {
        err << "error: unknown sweep parameter '" << options.param << "' (expected k0, t_hold, zeta or dt)\n";
        return kUsage;
    }

    return guarded(err, [&] {
        const Scenario base = resolve_scenario(options.config);

        std::vector<Scenario> scenarios;
        for (double value : options.values) {
            Scenario s = base;
            apply_parameter(s, options.param, value);
            check_scenario(s);
            scenarios.push_back(std::move(s));
        }

        ensure_dir(options.out_dir);
        const fs::path dir(options.out_dir);
        const auto rows_path = dir / "sweep.csv";
        auto rows = open_out(rows_path);

        const Eigen::Index p = base.config.p;
        rows << "param,value,seed,convergence_time,settling_time";
        for (Eigen::Index j = 1; j <= p; ++j) {
            rows << ",steady_mae_" << j;
        }
        rows << ",mean_switch_period,final_cost_mean\n";

        std::vector<EnsembleSummary> summaries;
        for (std::size_t v = 0; v < scenarios.size(); ++v) {
            const auto runs = run_ensemble(scenarios[v], base.config.seed, options.seeds);
            for (const auto& m : runs) {
                const auto& seg = m.final_segment();
                rows << options.param << ',' << format_double(options.values[v]) << ',' << m.seed << ','
                     << format_double(seg.convergence_time) << ',' << format_double(seg.settling_time);
                for (Eigen::Index j = 0; j < p; ++j) {
                    rows << ',' << format_double(seg.steady_mae(j));
                }
                rows << ',' << format_double(m.mean_switch_period) << ',' << format_double(m.final_cost_mean) << '\n';
            }
            summaries.push_back(summarize(options.param + "=" + format_double(options.values[v]), runs));
        }
        check_written(rows, rows_path);

        const auto summary_path = dir / "sweep_summary.csv";
        auto summary = open_out(summary_path);
        summary << "param,value,runs,convergence_time,settling_time";
        for (Eigen::Index j = 1; j <= p; ++j) {
            summary << ",steady_mae_" << j;
        }
        summary << ",mean_switch_period,final_cost_mean\n";
        for (std::size_t v = 0; v < summaries.size(); ++v) {
            const auto& s = summaries[v];
            summary << options.param << ',' << format_double(options.values[v]) << ',' << s.runs << ','
                    << format_double(s.convergence_time) << ',' << format_double(s.settling_time);
            for (Eigen::Index j = 0; j < p; ++j) {
                summary << ',' << format_double(s.steady_mae(j));
            }
            summary << ',' << format_double(s.mean_switch_period) << ',' << format_double(s.final_cost_mean) << '\n';
        }
        check_written(summary, summary_path);

        out << "medians over " << options.seeds << " seed(s), final segment:\n" << compare_runs(summaries);
        out << "wrote " << rows_path.string() << ", " << summary_path.string() << '\n';
        return kOk;
    });
}

int cmd_presets(const std::optional<std::string>& write_dir, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (write_dir) {
            ensure_dir(*write_dir);
        }
        for (const auto& p : presets()) {
            out << p.name << "\n    " << p.description << '\n';
            if (write_dir) {
                save_scenario(p.scenario, (fs::path(*write_dir) / (p.name + ".cfg")).string());
            }
        }
        return kOk;
    });
}

} // namespace resc::cli
