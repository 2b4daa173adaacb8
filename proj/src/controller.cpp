#include "resc/controller.hpp"

#include <cmath>
#include <sstream>

namespace resc {

namespace {

constexpr double kRelTol = 1e-9;

bool close(double a, double b)
{
    return std::abs(a - b) <= kRelTol * std::max(std::abs(a), std::abs(b));
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double sign(double v)
{
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

} // namespace

double EscConfig::forgetting_factor() const
{
    return lambda.value_or(std::exp(-dt / t_hold));
}

Vector EscConfig::initial_directions() const
{
    return epsilon_init.size() == 0 ? Vector::Ones(p) : epsilon_init;
}

std::vector<std::string> validate(const EscConfig& c)
{
    std::vector<std::string> v;
    if (c.p < 1) {
        v.push_back("p must be at least 1");
        return v;
    }
    if (c.k0.size() != c.p) {
        v.push_back("k0 must have p = " + std::to_string(c.p) + " entries");
    } else if (!c.k0.allFinite() || (c.k0.array() < 0.0).any()) {
        v.push_back("k0 entries must be finite and non-negative");
    }
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) {
        v.push_back("dt must be positive");
    }
    if (!(c.t_hold > 0.0) || !std::isfinite(c.t_hold)) {
        v.push_back("t_hold must be positive");
    }
    if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) {
        v.push_back("gamma must be positive");
    }
    if (!(c.zeta >= 0.0) || !std::isfinite(c.zeta)) {
        v.push_back("zeta must be non-negative");
    }
    if (c.theta_init.size() != c.p) {
        v.push_back("theta_init must have p = " + std::to_string(c.p) + " entries");
    } else if (!c.theta_init.allFinite()) {
        v.push_back("theta_init entries must be finite");
    }
    if (c.epsilon_init.size() != 0) {
        if (c.epsilon_init.size() != c.p) {
            v.push_back("epsilon_init must have p = " + std::to_string(c.p) + " entries");
        } else if (!(c.epsilon_init.array().abs() == 1.0).all()) {
            v.push_back("epsilon_init entries must be -1 or +1");
        }
    }
    if (c.lambda && !(*c.lambda > 0.0 && *c.lambda <= 1.0)) {
        v.push_back("lambda must lie in (0, 1]");
    }
    if (!(c.dt > 0.0 && c.t_hold > 0.0)) {
        return v;
    }

    const double p = static_cast<double>(c.p);
    if (c.mode == EscMode::Static) {
        if (!close(c.t_hold, p * c.dt)) {
            v.push_back("static mode requires t_hold = p * dt = " + fmt(p * c.dt) + ", got " + fmt(c.t_hold));
        }
    } else {
        if (c.dt > c.t_hold / p * (1.0 + kRelTol)) {
            v.push_back("dynamic mode requires dt <= t_hold / p = " + fmt(c.t_hold / p) + ", got " + fmt(c.dt));
        }
        const double derived = std::exp(-c.dt / c.t_hold);
        if (c.lambda && !close(*c.lambda, derived)) {
            v.push_back("dynamic mode requires lambda = exp(-dt / t_hold) = " + fmt(derived) + ", got "
                        + fmt(*c.lambda));
        }
    }
    return v;
}

Vector gains_from_draws(const EscConfig& config, const Vector& g_hat, const Vector& deltas)
{
    if (deltas.size() != config.k0.size() || g_hat.size() != config.k0.size()) {
        throw InvalidParameter("gains_from_draws: dimension mismatch");
    }
    if (config.adaptive) {
        return (2.0 * config.k0.array() * (1.0 + g_hat.array().abs() + config.zeta * deltas.array())).matrix();
    }
    return (2.0 * config.k0.array() * deltas.array()).matrix();
}

Vector draw_gains(const EscConfig& config, const Vector& g_hat, UniformSource& rng)
{
    Vector deltas(config.k0.size());
    for (Eigen::Index j = 0; j < deltas.size(); ++j) {
        deltas(j) = rng.next();
    }
    return gains_from_draws(config, g_hat, deltas);
}

double switching_frequency(double t_hold)
{
    if (!(t_hold > 0.0)) {
        throw InvalidParameter("switching_frequency: t_hold must be positive");
    }
    return 1.0 / (2.0 * t_hold);
}

Vector expected_oscillation(const Vector& k0, double t_hold)
{
    if (!(t_hold > 0.0)) {
        throw InvalidParameter("expected_oscillation: t_hold must be positive");
    }
    return k0 * t_hold;
}

EscController::EscController(EscConfig config) : config_(std::move(config)), rng_(config_.seed)
{
    if (auto violations = validate(config_); !violations.empty()) {
        throw ConfigError(std::move(violations));
    }

    rls_ = rls_init(config_.p, config_.forgetting_factor(), config_.gamma);
    estimate_ = {Vector::Zero(config_.p), false, rls_.p_matrix.trace()};
    relay_.epsilon = config_.initial_directions();
    relay_.k_applied = draw_gains(config_, estimate_.g_hat, rng_);
    relay_.timer = 0.0;
    theta_ = config_.theta_init;

    // Timer comparisons run on whole samples so that t_hold = n * dt is met after exactly n steps.
    hold_steps_ = std::max(1L, static_cast<long>(std::ceil(config_.t_hold / config_.dt * (1.0 - kRelTol))));
}

void EscController::estimate(const RegressorSample& sample, const Vector& theta_now)
{
    if (oracle_) {
        estimate_ = {oracle_(theta_now), false, 0.0};
        return;
    }

    if (config_.mode == EscMode::Dynamic) {
        auto update = rls_update(rls_, sample);
        rls_ = std::move(update.state);
        estimate_ = std::move(update.estimate);
        return;
    }

    window_.push_back(sample);
    while (static_cast<Eigen::Index>(window_.size()) > config_.p) {
        window_.pop_front();
    }
    if (static_cast<Eigen::Index>(window_.size()) < config_.p) {
        return;
    }
    const std::vector<RegressorSample> rows(window_.begin(), window_.end());
    estimate_ = batch_ls(rows, estimate_.g_hat);
}

bool EscController::maybe_switch()
{
    if (steps_since_switch_ < hold_steps_) {
        return false;
    }

    bool disagree = false;
    for (Eigen::Index j = 0; j < config_.p; ++j) {
        const double s = sign(estimate_.g_hat(j));
        if (s != 0.0 && s != -relay_.epsilon(j)) {
            disagree = true;
        }
    }
    if (!disagree) {
        return false;
    }

    for (Eigen::Index j = 0; j < config_.p; ++j) {
        const double s = sign(estimate_.g_hat(j));
        if (s != 0.0) {
            relay_.epsilon(j) = -s;
        }
    }
    steps_since_switch_ = 0;
    return true;
}

ControllerOutput EscController::step(double y_measured)
{
    const double y = config_.minimize ? y_measured : -y_measured;
    const Vector theta_now = theta_;
    bool switched = false;

    if (y_prev_) {
        const RegressorSample sample{x_prev_, (y - *y_prev_) / config_.dt,
                                     static_cast<double>(steps_) * config_.dt};
        estimate(sample, theta_now);
        ++steps_since_switch_;
        switched = maybe_switch();
        relay_.k_applied = draw_gains(config_, estimate_.g_hat, rng_);
    }
    relay_.timer = static_cast<double>(steps_since_switch_) * config_.dt;
    y_prev_ = y;

    const Vector theta_dot = relay_.epsilon.cwiseProduct(relay_.k_applied);
    x_prev_ = theta_dot;
    theta_ = theta_now + config_.dt * theta_dot;
    ++steps_;

    return {theta_now, theta_dot, theta_, estimate_, relay_, switched};
}

} // namespace resc
