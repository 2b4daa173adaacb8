#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resc/cli.hpp"
#include "resc/config_io.hpp"

using namespace resc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("resc_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_status(const std::string& args)
{
    const std::string cmd = std::string(RESC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

} // namespace

TEST_CASE("run writes trajectory, metrics and the resolved config")
{
    const auto dir = scratch("run");
    std::ostringstream out, err;
    REQUIRE(cli::cmd_run({"static-fig4", 5, dir.string()}, out, err) == cli::kOk);
    CHECK(fs::exists(dir / "trajectory.csv"));
    const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics["seed"] == 5);
    const Scenario saved = load_scenario((dir / "config.cfg").string());
    CHECK(saved.config.seed == 5);
}

TEST_CASE("exit codes separate failure kinds")
{
    const auto dir = scratch("codes");
    std::ofstream(dir / "bad_syntax.cfg") << "[controller]\nwhat = 1\n";
    auto text = format_scenario(find_preset("static-fig4").scenario);
    text.replace(text.find("t_hold = 2"), 10, "t_hold = 5");
    std::ofstream(dir / "bad_invariant.cfg") << text;

    std::ostringstream out, err;
    CHECK(cli::cmd_run({(dir / "bad_syntax.cfg").string(), {}, dir.string()}, out, err) == cli::kParseError);
    CHECK(cli::cmd_run({(dir / "bad_invariant.cfg").string(), {}, dir.string()}, out, err) == cli::kInvalidConfig);
    CHECK(err.str().find("t_hold = p * dt") != std::string::npos);
    CHECK(cli::cmd_run({(dir / "missing.cfg").string(), {}, dir.string()}, out, err) == cli::kIoError);
    std::ofstream(dir / "blocker") << "x";
    CHECK(cli::cmd_run({"static-fig4", {}, (dir / "blocker" / "sub").string()}, out, err) == cli::kIoError);

    CHECK(exit_status("") == cli::kUsage);
    CHECK(exit_status("sweep static-fig4 --param gamma --values 1") == cli::kUsage);
    CHECK(exit_status("run " + (dir / "bad_syntax.cfg").string()) == cli::kParseError);
    CHECK(exit_status("run " + (dir / "bad_invariant.cfg").string()) == cli::kInvalidConfig);
    CHECK(exit_status("presets") == cli::kOk);
}

TEST_CASE("single-value single-seed sweep matches run")
{
    const auto dir = scratch("sweep1");
    std::ostringstream out, err;
    REQUIRE(cli::cmd_run({"dynamic-fig5", {}, (dir / "run").string()}, out, err) == cli::kOk);
    REQUIRE(cli::cmd_sweep({"dynamic-fig5", "k0", {0.01}, 1, (dir / "sweep").string()}, out, err) == cli::kOk);

    const auto m = nlohmann::json::parse(slurp(dir / "run" / "metrics.json"));
    std::istringstream rows(slurp(dir / "sweep" / "sweep.csv"));
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    std::ostringstream expect;
    expect << "k0,0.01,1," << format_double(m["convergence_time"][1].get<double>()) << ','
           << format_double(m["segments"][1]["settling_time"].get<double>()) << ','
           << format_double(m["steady_mae"][0].get<double>()) << ',' << format_double(m["steady_mae"][1].get<double>())
           << ',' << format_double(m["mean_switch_period"].get<double>()) << ','
           << format_double(m["final_cost_mean"].get<double>());
    CHECK(row == expect.str());
}

TEST_CASE("repeated sweeps are bit-identical")
{
    const auto a = scratch("sweep_a");
    const auto b = scratch("sweep_b");
    std::ostringstream out, err;
    REQUIRE(cli::cmd_sweep({"static-fig4", "k0", {0.01, 0.001}, 20, a.string()}, out, err) == cli::kOk);
    REQUIRE(cli::cmd_sweep({"static-fig4", "k0", {0.01, 0.001}, 20, b.string()}, out, err) == cli::kOk);
    CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
    CHECK(slurp(a / "sweep_summary.csv") == slurp(b / "sweep_summary.csv"));
}

TEST_CASE("swept parameters")
{
    Scenario s = find_preset("static-fig4").scenario;
    cli::apply_parameter(s, "dt", 0.5);
    CHECK(s.config.t_hold == 1.0); // kept at p * dt in static mode
    CHECK(validate(s).empty());

    Scenario d = find_preset("dynamic-fig5").scenario;
    cli::apply_parameter(d, "dt", 2.0);
    CHECK(d.config.t_hold == 10.0);
    cli::apply_parameter(d, "zeta", 0.5);
    CHECK(d.config.zeta == 0.5);
    cli::apply_parameter(d, "k0", 0.2);
    CHECK(d.config.k0 == Vector::Constant(2, 0.2));
    CHECK_THROWS(cli::apply_parameter(d, "gamma", 1.0));
}

TEST_CASE("presets can be written out and read back")
{
    const auto dir = scratch("presets");
    std::ostringstream out, err;
    REQUIRE(cli::cmd_presets(dir.string(), out, err) == cli::kOk);
    for (const auto& p : presets()) {
        CHECK(out.str().find(p.name) != std::string::npos);
        CHECK(validate(load_scenario((dir / (p.name + ".cfg")).string())).empty());
    }
}
