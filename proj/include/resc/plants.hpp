#pragma once

#include <memory>

#include "resc/common.hpp"

namespace resc {

/// Q(theta) = 0.5 (theta - theta*)' H (theta - theta*), H symmetric positive definite.
class QuadraticMap {
public:
    /// H = I.
    explicit QuadraticMap(Vector theta_star);
    QuadraticMap(Vector theta_star, Matrix hessian);

    double eval(const Vector& theta) const;
    /// H (theta - theta*). Test oracle only; the controller never sees it.
    Vector gradient(const Vector& theta) const;

    const Vector& theta_star() const { return theta_star_; }
    const Matrix& hessian() const { return hessian_; }
    Eigen::Index channels() const { return theta_star_.size(); }

    void set_theta_star(Vector theta_star);

private:
    Vector theta_star_;
    Matrix hessian_;
};

inline double map_eval(const QuadraticMap& map, const Vector& theta) { return map.eval(theta); }
inline Vector map_gradient(const QuadraticMap& map, const Vector& theta) { return map.gradient(theta); }

/// First-order lag with unity DC gain: dx/dt = (q - x) / tau_s, y = x.
struct FirstOrderState {
    double x = 0.0;
    double tau_s = 1.0;
};

struct FirstOrderStep {
    FirstOrderState state;
    double y = 0.0;
};

/// Exact zero-order-hold step: x+ = a x + (1 - a) q_in, a = exp(-dt / tau_s).
FirstOrderStep plant_step(const FirstOrderState& state, double q_in, double dt);

/**
 * A system under optimization as seen by the control loop: inputs are held
 * over one sample period, then the scalar cost is read.
 */
class Plant {
public:
    virtual ~Plant() = default;

    /// Applies theta for dt seconds and returns the measurement at the end of the period.
    virtual double measure(const Vector& theta, double dt) = 0;

    /// Steady-state cost at theta under the current optimum.
    double true_cost(const Vector& theta) const { return map_.eval(theta); }

    const QuadraticMap& map() const { return map_; }
    void set_theta_star(Vector theta_star) { map_.set_theta_star(std::move(theta_star)); }

protected:
    explicit Plant(QuadraticMap map) : map_(std::move(map)) {}

    QuadraticMap map_;
};

class StaticPlant final : public Plant {
public:
    explicit StaticPlant(QuadraticMap map) : Plant(std::move(map)) {}

    double measure(const Vector& theta, double dt) override;
};

/// Quadratic map feeding a first-order lag (Hammerstein structure).
class HammersteinPlant final : public Plant {
public:
    HammersteinPlant(QuadraticMap map, double tau_s, double x0);

    double measure(const Vector& theta, double dt) override;

    const FirstOrderState& state() const { return state_; }

private:
    FirstOrderState state_;
};

double static_plant(const QuadraticMap& map, const Vector& theta);
FirstOrderStep dynamic_plant(const QuadraticMap& map, const FirstOrderState& state, const Vector& theta,
                             double dt);

} // namespace resc
