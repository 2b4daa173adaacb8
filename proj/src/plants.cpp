#include "resc/plants.hpp"

#include <cmath>
#include <string>

namespace resc {

namespace {

void check_hessian(const Vector& theta_star, const Matrix& hessian)
{
    const auto p = theta_star.size();
    if (p < 1) {
        throw InvalidParameter("QuadraticMap: optimum must have at least one channel");
    }
    if (hessian.rows() != p || hessian.cols() != p) {
        throw InvalidParameter("QuadraticMap: Hessian must be " + std::to_string(p) + "x" + std::to_string(p));
    }
    if (!(hessian - hessian.transpose()).isZero(0.0)) {
        throw InvalidParameter("QuadraticMap: Hessian is not symmetric");
    }
    if (Eigen::LLT<Matrix>(hessian).info() != Eigen::Success) {
        throw InvalidParameter("QuadraticMap: Hessian is not positive definite");
    }
}

void check_dims(const QuadraticMap& map, const Vector& theta)
{
    if (theta.size() != map.channels()) {
        throw InvalidParameter("QuadraticMap: input has " + std::to_string(theta.size()) + " channels, map has "
                               + std::to_string(map.channels()));
    }
}

} // namespace

QuadraticMap::QuadraticMap(Vector theta_star)
    : QuadraticMap(theta_star, Matrix::Identity(theta_star.size(), theta_star.size()))
{
}

QuadraticMap::QuadraticMap(Vector theta_star, Matrix hessian)
    : theta_star_(std::move(theta_star)), hessian_(std::move(hessian))
{
    check_hessian(theta_star_, hessian_);
}

double QuadraticMap::eval(const Vector& theta) const
{
    check_dims(*this, theta);
    const Vector e = theta - theta_star_;
    return 0.5 * e.dot(hessian_ * e);
}

Vector QuadraticMap::gradient(const Vector& theta) const
{
    check_dims(*this, theta);
    return hessian_ * (theta - theta_star_);
}

void QuadraticMap::set_theta_star(Vector theta_star)
{
    if (theta_star.size() != channels()) {
        throw InvalidParameter("QuadraticMap: new optimum has the wrong dimension");
    }
    theta_star_ = std::move(theta_star);
}

FirstOrderStep plant_step(const FirstOrderState& state, double q_in, double dt)
{
    if (!(dt > 0.0)) {
        throw InvalidParameter("plant_step: dt must be positive");
    }
    if (!(state.tau_s > 0.0)) {
        throw InvalidParameter("plant_step: tau_s must be positive");
    }
    const double a = std::exp(-dt / state.tau_s);
    // Deviation form: q_in is an exact fixed point, so the DC gain is exactly one.
    FirstOrderState next{q_in + a * (state.x - q_in), state.tau_s};
    return {next, next.x};
}

double StaticPlant::measure(const Vector& theta, double /*dt*/)
{
    return map_.eval(theta);
}

HammersteinPlant::HammersteinPlant(QuadraticMap map, double tau_s, double x0)
    : Plant(std::move(map)), state_{x0, tau_s}
{
    if (!(tau_s > 0.0)) {
        throw InvalidParameter("HammersteinPlant: tau_s must be positive");
    }
}

double HammersteinPlant::measure(const Vector& theta, double dt)
{
    auto step = plant_step(state_, map_.eval(theta), dt);
    state_ = step.state;
    return step.y;
}

double static_plant(const QuadraticMap& map, const Vector& theta)
{
    return map.eval(theta);
}

FirstOrderStep dynamic_plant(const QuadraticMap& map, const FirstOrderState& state, const Vector& theta,
                             double dt)
{
    return plant_step(state, map.eval(theta), dt);
}

} // namespace resc
