#include <doctest.h>

#include <cmath>

#include "resc/config_io.hpp"
#include "resc/harness.hpp"

using namespace resc;

namespace {

Scenario single_step(double k0, std::uint64_t seed)
{
    Scenario s;
    s.config.p = 2;
    s.config.k0 = Vector::Constant(2, k0);
    s.config.dt = 1.0;
    s.config.t_hold = 2.0;
    s.config.seed = seed;
    s.config.theta_init = (Vector(2) << 0.2, 0.7).finished();
    s.theta_star_schedule = {{0.0, (Vector(2) << 0.8, 0.3).finished()}};
    s.duration = 1000.0;
    return s;
}

} // namespace

TEST_CASE("records follow the integration rule")
{
    const auto r = run_scenario(find_preset("dynamic-fig5").scenario);
    REQUIRE(r.records.size() == 4000);
    for (std::size_t i = 0; i + 1 < r.records.size(); ++i) {
        const auto& a = r.records[i];
        const auto& b = r.records[i + 1];
        REQUIRE(b.t - a.t == doctest::Approx(1.0));
        REQUIRE(b.theta == a.theta + 1.0 * a.epsilon.cwiseProduct(a.k_applied));
    }
}

TEST_CASE("switches are at least a hold period apart")
{
    for (const char* name : {"static-fig4", "dynamic-fig5", "adaptive-fig6"}) {
        const auto& s = find_preset(name).scenario;
        const auto r = run_scenario(s);
        double last = -1e9;
        int n = 0;
        for (const auto& rec : r.records) {
            if (rec.switched) {
                REQUIRE(rec.t - last >= s.config.t_hold - s.config.dt);
                last = rec.t;
                ++n;
            }
        }
        CHECK(n > 20);
    }
}

TEST_CASE("zero gain freezes the loop")
{
    Scenario s = single_step(0.0, 1);
    const auto r = run_scenario(s);
    for (const auto& rec : r.records) {
        REQUIRE(rec.theta == s.config.theta_init);
    }
    const Vector offset = (s.config.theta_init - s.theta_star_schedule[0].theta_star).cwiseAbs();
    CHECK(r.metrics.final_segment().steady_mae.isApprox(offset, 1e-12));
    CHECK(std::isinf(r.metrics.final_segment().convergence_time));
}

TEST_CASE("optimum steps are applied at their scheduled time")
{
    const auto& s = find_preset("static-fig4").scenario;
    const auto r = run_scenario(s);
    const auto& before = r.records[1999];
    const auto& after = r.records[2000];
    CHECK(before.q_true == doctest::Approx(0.5 * (before.theta - s.theta_star_schedule[0].theta_star).squaredNorm()));
    CHECK(after.q_true == doctest::Approx(0.5 * (after.theta - s.theta_star_schedule[1].theta_star).squaredNorm()));
    REQUIRE(r.metrics.segments.size() == 2);
    CHECK(r.metrics.segments[1].start == 2000.0);
}

TEST_CASE("identical scenarios give identical results")
{
    const auto& s = find_preset("adaptive-fig6").scenario;
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        REQUIRE(a.records[i].theta == b.records[i].theta);
        REQUIRE(a.records[i].y == b.records[i].y);
    }
    CHECK(a.metrics.final_segment().steady_mae == b.metrics.final_segment().steady_mae);
    CHECK(a.metrics.mean_switch_period == b.metrics.mean_switch_period);
}

TEST_CASE("ensemble median cost falls well below its starting value")
{
    const Scenario base = single_step(0.01, 1);
    const double q0 = 0.5 * (base.config.theta_init - base.theta_star_schedule[0].theta_star).squaredNorm();
    std::vector<double> mid;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = run_scenario(single_step(0.01, seed));
        mid.push_back(r.records[r.records.size() / 2].q_true);
    }
    CHECK(median(mid) < 0.1 * q0);
}

TEST_CASE("metrics from a hand-built trajectory")
{
    Scenario s = single_step(0.01, 1);
    s.duration = 8.0;
    s.band = Vector::Constant(2, 0.1);
    const Vector star = s.theta_star_schedule[0].theta_star;
    std::vector<TrajectoryRecord> recs;
    // Offsets per sample: outside, outside, inside, outside, then inside for good.
    const double offsets[] = {0.5, 0.2, 0.05, 0.2, 0.05, 0.02, -0.02, 0.04};
    for (int i = 0; i < 8; ++i) {
        TrajectoryRecord r;
        r.t = i;
        r.theta = star + Vector::Constant(2, offsets[i]);
        r.q_true = 0.5 * 2 * offsets[i] * offsets[i];
        r.switched = (i == 5 || i == 7);
        recs.push_back(r);
    }
    const auto m = compute_metrics(s, recs);
    CHECK(m.final_segment().convergence_time == 2.0);
    CHECK(m.final_segment().settling_time == 4.0);
    // Final quarter is t = 6, 7.
    CHECK(m.final_segment().steady_mae(0) == doctest::Approx(0.03));
    CHECK(m.final_cost_mean == doctest::Approx((0.0004 + 0.0016) / 2));
    CHECK(std::isinf(m.mean_switch_period)); // only one switch inside the window
}

TEST_CASE("median handles even counts and infinities")
{
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(median({1.0, inf, inf, inf}) == inf);
    CHECK(std::isnan(median({})));
}

TEST_CASE("compare_runs orders by convergence time")
{
    EnsembleSummary slow{"slow", 600.0, 900.0, Vector::Constant(2, 0.002), 4.4, 1e-6, 3};
    EnsembleSummary fast{"fast", 60.0, 900.0, Vector::Constant(2, 0.02), 4.4, 1e-4, 3};
    const std::string table = compare_runs({slow, fast});
    CHECK(table.find("fast") < table.find("slow"));
    CHECK(table.find("conv_time") != std::string::npos);
}

TEST_CASE("invalid scenarios are rejected")
{
    Scenario s = single_step(0.01, 1);
    s.theta_star_schedule.push_back({0.0, Vector::Zero(2)});
    CHECK_FALSE(validate(s).empty());
    CHECK_THROWS_AS(run_scenario(s), ConfigError);

    Scenario d = single_step(0.01, 1);
    d.duration = -1.0;
    CHECK_THROWS_AS(run_scenario(d), ConfigError);
}
