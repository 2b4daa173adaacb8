#include "resc/config_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace resc {

namespace {

const std::map<std::string, std::string, std::less<>> kKeySection = {
    {"p", "controller"},          {"k0", "controller"},        {"dt", "controller"},
    {"t_hold", "controller"},     {"lambda", "controller"},    {"gamma", "controller"},
    {"mode", "controller"},       {"adaptive", "controller"},  {"zeta", "controller"},
    {"seed", "controller"},       {"theta_init", "controller"}, {"epsilon_init", "controller"},
    {"minimize", "controller"},   {"plant", "plant"},          {"tau_s", "plant"},
    {"theta_star_schedule", "scenario"}, {"duration", "scenario"},
};

const std::array<std::string_view, 9> kRequired = {
    "p", "k0", "dt", "t_hold", "mode", "theta_init", "plant", "theta_star_schedule", "duration",
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, int line, std::string_view key)
{
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError(line, "'" + std::string(key) + "': not a number: '" + std::string(text) + "'");
    }
    return value;
}

Vector parse_vector(std::string_view text, int line, std::string_view key)
{
    std::vector<double> values;
    while (true) {
        const auto comma = text.find(',');
        values.push_back(parse_double(text.substr(0, comma), line, key));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

bool parse_bool(std::string_view text, int line, std::string_view key)
{
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    throw ParseError(line, "'" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'");
}

std::vector<ScheduleEntry> parse_schedule(std::string_view text, int line)
{
    std::vector<ScheduleEntry> schedule;
    while (!text.empty()) {
        const auto semi = text.find(';');
        const auto entry = trim(text.substr(0, semi));
        const auto colon = entry.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(line, "theta_star_schedule: expected 'time: v1, v2, ...', got '" + std::string(entry) + "'");
        }
        schedule.push_back({parse_double(entry.substr(0, colon), line, "theta_star_schedule"),
                            parse_vector(entry.substr(colon + 1), line, "theta_star_schedule")});
        if (semi == std::string_view::npos) {
            break;
        }
        text.remove_prefix(semi + 1);
    }
    if (schedule.empty()) {
        throw ParseError(line, "theta_star_schedule: empty");
    }
    return schedule;
}

std::string format_vector(const Vector& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_double(v(i));
    }
    return out;
}

nlohmann::ordered_json finite_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json to_json(const Vector& v)
{
    return nlohmann::ordered_json(std::vector<double>(v.data(), v.data() + v.size()));
}

Scenario make_preset(double k0, bool dynamic, bool adaptive)
{
    Scenario s;
    EscConfig& c = s.config;
    c.p = 2;
    c.k0 = Vector::Constant(2, k0);
    c.dt = 1.0;
    c.t_hold = dynamic ? 10.0 : 2.0;
    c.mode = dynamic ? EscMode::Dynamic : EscMode::Static;
    c.adaptive = adaptive;
    c.zeta = adaptive ? 0.001 : 0.0;
    c.seed = 1;
    c.theta_init = (Vector(2) << 0.2, 0.7).finished();
    s.plant = dynamic ? PlantKind::Hammerstein : PlantKind::StaticMap;
    s.tau_s = 10.0;
    s.duration = 4000.0;
    s.theta_star_schedule = {{0.0, (Vector(2) << 0.2, 0.7).finished()},
                             {2000.0, (Vector(2) << 0.8, 0.3).finished()}};
    return s;
}

} // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
{
}

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    s.config.k0.resize(0);
    std::set<std::string, std::less<>> seen;
    std::string section;
    int line_no = 0;

    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(line_no, "malformed section header '" + std::string(line) + "'");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "controller" && section != "plant" && section != "scenario") {
                throw ParseError(line_no, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        const auto known = kKeySection.find(key);
        if (known == kKeySection.end()) {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
        if (!section.empty() && known->second != section) {
            throw ParseError(line_no, "key '" + key + "' belongs in [" + known->second + "], not [" + section + "]");
        }
        if (!seen.insert(key).second) {
            throw ParseError(line_no, "duplicate key '" + key + "'");
        }

        EscConfig& c = s.config;
        if (key == "p") {
            const double p = parse_double(value, line_no, key);
            if (p != std::floor(p) || p < 1.0 || p > 1e6) {
                throw ParseError(line_no, "'p': expected a positive integer");
            }
            c.p = static_cast<Eigen::Index>(p);
        } else if (key == "k0") {
            c.k0 = parse_vector(value, line_no, key);
        } else if (key == "dt") {
            c.dt = parse_double(value, line_no, key);
        } else if (key == "t_hold") {
            c.t_hold = parse_double(value, line_no, key);
        } else if (key == "lambda") {
            c.lambda = parse_double(value, line_no, key);
        } else if (key == "gamma") {
            c.gamma = parse_double(value, line_no, key);
        } else if (key == "mode") {
            if (value == "static") {
                c.mode = EscMode::Static;
            } else if (value == "dynamic") {
                c.mode = EscMode::Dynamic;
            } else {
                throw ParseError(line_no, "'mode': expected static or dynamic");
            }
        } else if (key == "adaptive") {
            c.adaptive = parse_bool(value, line_no, key);
        } else if (key == "zeta") {
            c.zeta = parse_double(value, line_no, key);
        } else if (key == "seed") {
            std::uint64_t seed = 0;
            const auto* end = value.data() + value.size();
            auto [ptr, ec] = std::from_chars(value.data(), end, seed);
            if (ec != std::errc{} || ptr != end || value.empty()) {
                throw ParseError(line_no, "'seed': expected a non-negative integer");
            }
            c.seed = seed;
        } else if (key == "theta_init") {
            c.theta_init = parse_vector(value, line_no, key);
        } else if (key == "epsilon_init") {
            c.epsilon_init = parse_vector(value, line_no, key);
        } else if (key == "minimize") {
            c.minimize = parse_bool(value, line_no, key);
        } else if (key == "plant") {
            if (value == "static") {
                s.plant = PlantKind::StaticMap;
            } else if (value == "hammerstein") {
                s.plant = PlantKind::Hammerstein;
            } else {
                throw ParseError(line_no, "'plant': expected static or hammerstein");
            }
        } else if (key == "tau_s") {
            s.tau_s = parse_double(value, line_no, key);
        } else if (key == "theta_star_schedule") {
            s.theta_star_schedule = parse_schedule(value, line_no);
        } else if (key == "duration") {
            s.duration = parse_double(value, line_no, key);
        }
    }

    for (auto key : kRequired) {
        if (!seen.contains(key)) {
            throw ParseError(line_no, "missing required key '" + std::string(key) + "'");
        }
    }
    if (s.plant == PlantKind::Hammerstein && !seen.contains("tau_s")) {
        throw ParseError(line_no, "plant = hammerstein requires 'tau_s'");
    }
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string format_scenario(const Scenario& s)
{
    const EscConfig& c = s.config;
    std::ostringstream os;
    os << "[controller]\n";
    os << "p = " << c.p << '\n';
    os << "k0 = " << format_vector(c.k0) << '\n';
    os << "dt = " << format_double(c.dt) << '\n';
    os << "t_hold = " << format_double(c.t_hold) << '\n';
    if (c.lambda) {
        os << "lambda = " << format_double(*c.lambda) << '\n';
    }
    os << "gamma = " << format_double(c.gamma) << '\n';
    os << "mode = " << (c.mode == EscMode::Static ? "static" : "dynamic") << '\n';
    os << "adaptive = " << (c.adaptive ? "true" : "false") << '\n';
    os << "zeta = " << format_double(c.zeta) << '\n';
    os << "seed = " << c.seed << '\n';
    os << "theta_init = " << format_vector(c.theta_init) << '\n';
    if (c.epsilon_init.size() != 0) {
        os << "epsilon_init = " << format_vector(c.epsilon_init) << '\n';
    }
    os << "minimize = " << (c.minimize ? "true" : "false") << '\n';
    os << "\n[plant]\n";
    os << "plant = " << (s.plant == PlantKind::StaticMap ? "static" : "hammerstein") << '\n';
    if (s.plant == PlantKind::Hammerstein) {
        os << "tau_s = " << format_double(s.tau_s) << '\n';
    }
    os << "\n[scenario]\n";
    os << "theta_star_schedule = ";
    for (std::size_t i = 0; i < s.theta_star_schedule.size(); ++i) {
        if (i > 0) {
            os << "; ";
        }
        os << format_double(s.theta_star_schedule[i].time) << ": " << format_vector(s.theta_star_schedule[i].theta_star);
    }
    os << '\n';
    os << "duration = " << format_double(s.duration) << '\n';
    return os.str();
}

void save_scenario(const Scenario& scenario, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << format_scenario(scenario);
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = {
        {"static-fig4", "static map, p=2, K0=0.01, dt=1, T_d=2; optimum steps [0.2,0.7] -> [0.8,0.3] at t=2000",
         make_preset(0.01, false, false)},
        {"static-fig4-k0.001", "static-fig4 with K0=0.001", make_preset(0.001, false, false)},
        {"dynamic-fig5", "Hammerstein plant tau_s=10, K0=0.01, dt=1, T_d=10, lambda=exp(-0.1)",
         make_preset(0.01, true, false)},
        {"dynamic-fig5-k0.001", "dynamic-fig5 with K0=0.001", make_preset(0.001, true, false)},
        {"adaptive-fig6", "dynamic-fig5 with adaptive gains, zeta=0.001, K0=0.0025 (resting gain 2*K0=0.005)",
         make_preset(0.0025, true, true)},
    };
    return all;
}

const Preset& find_preset(std::string_view name)
{
    for (const auto& p : presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw std::out_of_range("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> trajectory_columns(Eigen::Index p)
{
    std::vector<std::string> cols{"t"};
    const auto indexed = [&](const char* prefix) {
        for (Eigen::Index j = 1; j <= p; ++j) {
            cols.push_back(prefix + std::to_string(j));
        }
    };
    indexed("theta_");
    cols.emplace_back("y");
    cols.emplace_back("q_true");
    indexed("ghat_");
    indexed("eps_");
    indexed("k_");
    cols.emplace_back("switched");
    return cols;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records)
{
    const Eigen::Index p = records.empty() ? 0 : records.front().theta.size();
    const auto cols = trajectory_columns(p);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i];
    }
    os << '\n';

    const auto vec = [&os](const Vector& v) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            os << ',' << format_double(v(j));
        }
    };
    for (const auto& r : records) {
        os << format_double(r.t);
        vec(r.theta);
        os << ',' << format_double(r.y) << ',' << format_double(r.q_true);
        vec(r.g_hat);
        vec(r.epsilon);
        vec(r.k_applied);
        os << ',' << (r.switched ? 1 : 0) << '\n';
    }
}

std::string metrics_json(const RunMetrics& m)
{
    nlohmann::ordered_json j;
    j["seed"] = m.seed;
    nlohmann::ordered_json conv = nlohmann::ordered_json::array();
    nlohmann::ordered_json segments = nlohmann::ordered_json::array();
    for (const auto& s : m.segments) {
        conv.push_back(finite_or_null(s.convergence_time));
        nlohmann::ordered_json seg;
        seg["start"] = s.start;
        seg["end"] = s.end;
        seg["theta_star"] = to_json(s.theta_star);
        seg["convergence_time"] = finite_or_null(s.convergence_time);
        seg["settling_time"] = finite_or_null(s.settling_time);
        seg["steady_mae"] = to_json(s.steady_mae);
        segments.push_back(seg);
    }
    j["convergence_time"] = conv;
    j["steady_mae"] = m.segments.empty() ? nlohmann::ordered_json::array() : to_json(m.final_segment().steady_mae);
    j["mean_switch_period"] = finite_or_null(m.mean_switch_period);
    j["switches"] = m.switches;
    j["final_cost_mean"] = m.final_cost_mean;
    j["segments"] = segments;
    return j.dump(2) + "\n";
}

} // namespace resc
