#include "resc/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace resc {

RlsState rls_init(Eigen::Index p, double lambda, double gamma)
{
    if (p < 1) {
        throw InvalidParameter("rls_init: channel count must be at least 1, got " + std::to_string(p));
    }
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw InvalidParameter("rls_init: forgetting factor must lie in (0, 1], got " + std::to_string(lambda));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidParameter("rls_init: initial scale must be positive, got " + std::to_string(gamma));
    }

    RlsState state;
    state.p_matrix = gamma * Matrix::Identity(p, p);
    state.g = Vector::Zero(p);
    state.lambda = lambda;
    state.gamma = gamma;
    return state;
}

RlsUpdate rls_update(const RlsState& state, const RegressorSample& sample)
{
    if (sample.x.size() != state.channels()) {
        throw InvalidParameter("rls_update: regressor has " + std::to_string(sample.x.size())
                               + " entries, estimator has " + std::to_string(state.channels()));
    }

    const Vector& x = sample.x;
    const Vector px = state.p_matrix * x;
    const double denom = state.lambda + x.dot(px);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        return {state, {state.g, true, state.p_matrix.trace()}};
    }

    const Vector d = px / denom;

    RlsState next = state;
    // P is symmetric, so x' P == (P x)'.
    next.p_matrix = (state.p_matrix - d * px.transpose()) / state.lambda;
    next.p_matrix = 0.5 * (next.p_matrix + next.p_matrix.transpose()).eval();

    const double e = sample.dy_dt - x.dot(state.g);
    next.g = state.g + e * d;

    GradientEstimate estimate{next.g, false, next.p_matrix.trace()};
    return {std::move(next), std::move(estimate)};
}

GradientEstimate batch_ls(std::span<const RegressorSample> samples, const Vector& fallback)
{
    const Eigen::Index p = fallback.size();
    if (static_cast<Eigen::Index>(samples.size()) < p || samples.empty()) {
        throw InsufficientSamples("batch_ls: need at least " + std::to_string(p) + " samples, got "
                                  + std::to_string(samples.size()));
    }

    const auto rows = static_cast<Eigen::Index>(samples.size());
    Matrix x(rows, p);
    Vector y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (s.x.size() != p) {
            throw InvalidParameter("batch_ls: sample " + std::to_string(i) + " has "
                                   + std::to_string(s.x.size()) + " entries, expected "
                                   + std::to_string(p));
        }
        x.row(i) = s.x.transpose();
        y(i) = s.dy_dt;
    }

    const Matrix normal = x.transpose() * x;
    const Eigen::JacobiSVD<Matrix> svd(normal);
    const Vector& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    const double condition = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(condition <= kMaxNormalCondition)) {
        return {fallback, true, std::numeric_limits<double>::infinity()};
    }

    const Eigen::LDLT<Matrix> ldlt(normal);
    Vector g_hat = ldlt.solve(x.transpose() * y);
    if (!g_hat.allFinite()) {
        return {fallback, true, std::numeric_limits<double>::infinity()};
    }
    const double trace = ldlt.solve(Matrix::Identity(p, p)).trace();
    return {std::move(g_hat), false, trace};
}

GradientEstimate batch_ls(std::span<const RegressorSample> samples)
{
    const Eigen::Index p = samples.empty() ? 0 : samples.front().x.size();
    if (samples.empty()) {
        throw InsufficientSamples("batch_ls: no samples");
    }
    return batch_ls(samples, Vector::Zero(p));
}

} // namespace resc
