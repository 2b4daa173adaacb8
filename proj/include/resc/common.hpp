#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace resc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a numeric argument falls outside its documented domain.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by configuration validation; carries every violated invariant.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/**
 * Seeded source of independent uniform draws in [0, 1).
 *
 * The engine output is fixed by the standard; the bit-to-double mapping is
 * done here rather than through std::uniform_real_distribution, whose
 * algorithm varies between standard libraries.
 */
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed);

    double next();

private:
    std::mt19937_64 engine_;
};

} // namespace resc
