#include "resc/common.hpp"

namespace resc {

namespace {

std::string join_violations(const std::vector<std::string>& violations)
{
    std::string message = "invalid configuration:";
    for (const auto& v : violations) {
        message += "\n  - ";
        message += v;
    }
    return message;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations))
{
}

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

} // namespace resc
