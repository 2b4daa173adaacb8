#pragma once

#include <span>

#include "resc/common.hpp"

namespace resc {

/// One row of the gradient regression: channel rates and the cost slope they produced.
struct RegressorSample {
    Vector x;          // epsilon_j * k_j per channel
    double dy_dt = 0.0;
    double timestamp = 0.0;
};

struct GradientEstimate {
    Vector g_hat;
    bool degenerate = false;
    double covariance_trace = 0.0;
};

/**
 * Recursive least-squares state with exponential forgetting.
 *
 * p_matrix is kept exactly symmetric; g holds one partial derivative per
 * input channel.
 */
struct RlsState {
    Matrix p_matrix;
    Vector g;
    double lambda = 1.0;
    double gamma = 100.0;

    Eigen::Index channels() const { return g.size(); }
};

struct RlsUpdate {
    RlsState state;
    GradientEstimate estimate;
};

/// Condition number of X'X above which the normal equations are treated as singular.
inline constexpr double kMaxNormalCondition = 1e12;

/// P = gamma * I, g = 0. Throws InvalidParameter unless p >= 1, 0 < lambda <= 1, gamma > 0.
RlsState rls_init(Eigen::Index p, double lambda, double gamma);

/**
 * One forgetting-RLS step:
 *   d = P x / (lambda + x' P x)
 *   P <- (P - d x' P) / lambda
 *   e = dy_dt - x' g
 *   g <- g + e d
 *
 * If the denominator is not a positive finite number the input state is
 * returned untouched and the estimate is flagged degenerate.
 */
RlsUpdate rls_update(const RlsState& state, const RegressorSample& sample);

/**
 * Solves the normal equations X'X g = X'Y over a window of samples.
 *
 * When X'X is singular to working precision the estimate is flagged
 * degenerate and `fallback` is returned in g_hat. Throws
 * InsufficientSamples for fewer rows than channels.
 */
GradientEstimate batch_ls(std::span<const RegressorSample> samples, const Vector& fallback);
GradientEstimate batch_ls(std::span<const RegressorSample> samples);

} // namespace resc
