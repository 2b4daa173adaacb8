#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resc/harness.hpp"

namespace resc {

/// Malformed configuration text (syntax, unknown key, bad number).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);

    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Scenario files are UTF-8 `key = value` lines grouped under optional
 * section headers:
 *
 *   [controller]  p k0 dt t_hold lambda gamma mode adaptive zeta seed
 *                 theta_init epsilon_init minimize
 *   [plant]       plant tau_s
 *   [scenario]    theta_star_schedule duration
 *
 * Vectors are comma separated. The schedule is `time: v1, v2; time: ...`.
 * `#` starts a comment. Unknown keys, duplicate keys and keys under the
 * wrong section are errors. Parsing checks syntax only; call validate()
 * for the controller invariants.
 */
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Writes every field with round-trip precision; parse_scenario(format_scenario(s)) reproduces s.
std::string format_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Shortest decimal that reads back to the same double; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double value);

struct Preset {
    std::string name;
    std::string description;
    Scenario scenario;
};

const std::vector<Preset>& presets();
/// Throws std::out_of_range for an unknown name.
const Preset& find_preset(std::string_view name);

/// Column names of trajectory.csv for p channels.
std::vector<std::string> trajectory_columns(Eigen::Index p);
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records);

/// Flat JSON summary; non-finite times are written as null.
std::string metrics_json(const RunMetrics& metrics);

} // namespace resc
