#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resc/common.hpp"
#include "resc/estimator.hpp"

namespace resc {

enum class EscMode {
    Static,  // exact solve over a moving window of p samples
    Dynamic, // forgetting RLS, hold time set from the plant time constant
};

/// Full controller configuration. Vector sizes must equal p.
struct EscConfig {
    Eigen::Index p = 2;
    Vector k0;                    // nominal relay gains, input units per second
    double dt = 1.0;              // sample period, s
    double t_hold = 2.0;          // relay hold time, s
    std::optional<double> lambda; // derived as exp(-dt / t_hold) when absent
    double gamma = 100.0;         // initial RLS covariance scale
    EscMode mode = EscMode::Static;
    bool adaptive = false;
    double zeta = 0.0;
    std::uint64_t seed = 1;
    Vector theta_init;
    Vector epsilon_init; // empty means all +1
    bool minimize = true;

    double forgetting_factor() const;
    Vector initial_directions() const;
};

/// Every violated invariant, empty when the configuration is usable.
std::vector<std::string> validate(const EscConfig& config);

struct RelayState {
    Vector epsilon;   // entries are exactly -1 or +1
    Vector k_applied; // current stochastic gains
    double timer = 0.0;
};

struct ControllerOutput {
    Vector theta;      // input at which the measurement was taken
    Vector theta_dot;  // epsilon .* k_applied, applied from theta for the next period
    Vector theta_next; // theta + dt * theta_dot
    GradientEstimate g_hat;
    RelayState relay;
    bool switched = false;
};

/**
 * Relay gains for one sample from the uniform draws `deltas` in [0, 1).
 *
 * Fixed gains:    k = 2 k0 .* delta            (mean k0)
 * Adaptive gains: k = 2 k0 .* (1 + |g_hat| + zeta delta)
 */
Vector gains_from_draws(const EscConfig& config, const Vector& g_hat, const Vector& deltas);
Vector draw_gains(const EscConfig& config, const Vector& g_hat, UniformSource& rng);

/// Relay switching frequency 1 / (2 t_hold).
double switching_frequency(double t_hold);
/// Expected steady input error around the optimum, k0 * t_hold per channel.
Vector expected_oscillation(const Vector& k0, double t_hold);

/// Replaces the estimated gradient with a known one (verification runs only).
using GradientOracle = std::function<Vector(const Vector& theta)>;

/**
 * The relay extremum-seeking control block.
 *
 * Call step() once per sample period with the latest cost measurement. The
 * first call only records the measurement; estimation and switching start
 * with the second. A switch is taken when the hold timer has expired and at
 * least one channel's estimated gradient sign disagrees with -epsilon; all
 * channels are then re-directed together and the single timer is reset.
 * A zero gradient component keeps its channel's direction.
 */
class EscController {
public:
    explicit EscController(EscConfig config);

    ControllerOutput step(double y_measured);

    void set_gradient_oracle(GradientOracle oracle) { oracle_ = std::move(oracle); }

    const EscConfig& config() const { return config_; }
    const Vector& theta() const { return theta_; }
    const RelayState& relay() const { return relay_; }
    const GradientEstimate& estimate() const { return estimate_; }
    const RlsState& rls() const { return rls_; }
    std::size_t steps() const { return steps_; }

private:
    void estimate(const RegressorSample& sample, const Vector& theta_now);
    bool maybe_switch();

    EscConfig config_;
    UniformSource rng_;
    RlsState rls_;
    std::deque<RegressorSample> window_;
    GradientEstimate estimate_;
    RelayState relay_;
    Vector theta_;
    Vector x_prev_;
    std::optional<double> y_prev_;
    GradientOracle oracle_;
    long hold_steps_ = 1;
    long steps_since_switch_ = 0;
    std::size_t steps_ = 0;
};

} // namespace resc
