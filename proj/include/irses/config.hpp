#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "irses/errors.hpp"

namespace irses {

enum class RcsPhaseMode { Zero, SeededUniform };

// Experiment configuration. Defaults reproduce the reference setup: 2 GHz
// carrier (lambda = 0.15 m), half-wavelength element spacing, a symmetric
// [-0.25, 0.25] horizontal window sampled at K = 20 points, and a 0.1 m^2
// target surface.
struct ExperimentConfig {
    // [array]
    int n_x = 16;
    int n_y = 1;
    double delta_e_m = 0.075;

    // [signal]
    double frequency_hz = 2e9;
    double surface_area_m2 = 0.1;
    RcsPhaseMode rcs_phase_mode = RcsPhaseMode::Zero;

    // [window]
    double phi_min = -0.25;
    double phi_max = 0.25;
    double omega_min = 0.0;
    double omega_max = 0.0;

    // [sampling]
    int k_x = 20;
    int k_y = 1;

    // [solver]
    double tol = 1e-7;
    double fine_grid_density = 2000.0;
    int max_newton_iters = 600;

    // [sweep]
    std::vector<int> n_x_list = {4, 8, 16, 32};
    std::vector<int> k_list = {2, 5, 10, 20, 40};
    std::vector<double> phi_max_list = {0.25};
    double gain_phi_min = -0.5;
    double gain_phi_max = 0.5;
    int gain_grid_points = 1001;
    int random_phase_trials = 100;

    // [simulate]
    double region_x_min = -50.0, region_x_max = 50.0;
    double region_y_min = -50.0, region_y_max = 50.0;
    double region_z = 0.0;
    double target_x = 0.0, target_y = 0.0, target_z = 400.0;
    double alpha = 1.0;
    double sigma2 = 1e-10;
    double speed_mps = 50.0;
    int m_antennas = 4;
    int trials = 50;
    double time_s = 0.0;
    int window_grid = 201;

    // [output]
    std::uint64_t seed = 1;
    std::string path;  // empty = stdout

    double lambda_m() const { return 3.0e8 / frequency_hz; }

    void validate() const;
    // Ordered (key, value) pairs of the fully resolved configuration, used
    // for reproducibility headers in every output file.
    std::vector<std::pair<std::string, std::string>> resolved_items() const;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& value, const std::string& field, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw ConfigError("trailing characters in numeric value for " + field, field, line);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + value + "' as a number for " + field, field, line);
    }
}

inline int parse_int(const std::string& value, const std::string& field, int line) {
    int v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw ConfigError("cannot parse '" + value + "' as an integer for " + field, field, line);
    return v;
}

inline std::uint64_t parse_u64(const std::string& value, const std::string& field, int line) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw ConfigError("cannot parse '" + value + "' as an unsigned integer for " + field,
                          field, line);
    return v;
}

template <typename T, typename Parse>
inline std::vector<T> parse_list(const std::string& value, const std::string& field, int line,
                                 Parse parse) {
    std::vector<T> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("empty element in list for " + field, field, line);
        out.push_back(parse(item, field, line));
    }
    if (out.empty()) throw ConfigError("empty list for " + field, field, line);
    return out;
}

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
    const auto fail = [](const std::string& field, const std::string& msg) {
        throw ConfigError("invalid value for " + field + ": " + msg, field);
    };
    if (n_x < 1) fail("array.n_x", "must be >= 1");
    if (n_y < 1) fail("array.n_y", "must be >= 1");
    if (!(delta_e_m > 0.0)) fail("array.delta_e_m", "must be positive");
    if (!(frequency_hz > 0.0)) fail("signal.frequency_hz", "must be positive");
    if (delta_e_m > lambda_m() / 2.0 + 1e-15)
        fail("array.delta_e_m", "must not exceed lambda/2");
    if (!(surface_area_m2 >= 0.0)) fail("signal.surface_area_m2", "must be >= 0");
    if (phi_min > phi_max) fail("window.phi_min", "must be <= window.phi_max");
    if (omega_min > omega_max) fail("window.omega_min", "must be <= window.omega_max");
    if (k_x < 1) fail("sampling.k_x", "must be >= 1");
    if (k_y < 1) fail("sampling.k_y", "must be >= 1");
    if (!(tol > 0.0)) fail("solver.tol", "must be positive");
    if (fine_grid_density < 100.0) fail("solver.fine_grid_density", "must be >= 100");
    if (max_newton_iters < 10) fail("solver.max_newton_iters", "must be >= 10");
    for (int v : n_x_list)
        if (v < 1) fail("sweep.n_x_list", "entries must be >= 1");
    for (int v : k_list)
        if (v < 1) fail("sweep.k_list", "entries must be >= 1");
    for (double v : phi_max_list)
        if (!(v > 0.0)) fail("sweep.phi_max_list", "entries must be positive");
    if (gain_phi_min >= gain_phi_max) fail("sweep.gain_phi_min", "must be < sweep.gain_phi_max");
    if (gain_grid_points < 2) fail("sweep.gain_grid_points", "must be >= 2");
    if (random_phase_trials < 1) fail("sweep.random_phase_trials", "must be >= 1");
    if (region_x_min > region_x_max) fail("simulate.region_x_min", "must be <= region_x_max");
    if (region_y_min > region_y_max) fail("simulate.region_y_min", "must be <= region_y_max");
    if (!(target_z > region_z)) fail("simulate.target_z", "must be above region_z");
    if (!(alpha > 0.0)) fail("simulate.alpha", "must be positive");
    if (!(sigma2 > 0.0)) fail("simulate.sigma2", "must be positive");
    if (speed_mps < 0.0) fail("simulate.speed_mps", "must be >= 0");
    if (m_antennas < 1) fail("simulate.m_antennas", "must be >= 1");
    if (trials < 1) fail("simulate.trials", "must be >= 1");
    if (window_grid < 2) fail("simulate.window_grid", "must be >= 2");
}

inline std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved_items()
    const {
    using detail::format_g17;
    const auto join_i = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    const auto join_d = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_g17(v[i]);
        return s;
    };
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("array.n_x", std::to_string(n_x));
    out.emplace_back("array.n_y", std::to_string(n_y));
    out.emplace_back("array.delta_e_m", format_g17(delta_e_m));
    out.emplace_back("signal.frequency_hz", format_g17(frequency_hz));
    out.emplace_back("signal.surface_area_m2", format_g17(surface_area_m2));
    out.emplace_back("signal.rcs_phase_mode",
                     rcs_phase_mode == RcsPhaseMode::Zero ? "zero" : "seeded-uniform");
    out.emplace_back("window.phi_min", format_g17(phi_min));
    out.emplace_back("window.phi_max", format_g17(phi_max));
    out.emplace_back("window.omega_min", format_g17(omega_min));
    out.emplace_back("window.omega_max", format_g17(omega_max));
    out.emplace_back("sampling.k_x", std::to_string(k_x));
    out.emplace_back("sampling.k_y", std::to_string(k_y));
    out.emplace_back("solver.tol", format_g17(tol));
    out.emplace_back("solver.fine_grid_density", format_g17(fine_grid_density));
    out.emplace_back("solver.max_newton_iters", std::to_string(max_newton_iters));
    out.emplace_back("sweep.n_x_list", join_i(n_x_list));
    out.emplace_back("sweep.k_list", join_i(k_list));
    out.emplace_back("sweep.phi_max_list", join_d(phi_max_list));
    out.emplace_back("sweep.gain_phi_min", format_g17(gain_phi_min));
    out.emplace_back("sweep.gain_phi_max", format_g17(gain_phi_max));
    out.emplace_back("sweep.gain_grid_points", std::to_string(gain_grid_points));
    out.emplace_back("sweep.random_phase_trials", std::to_string(random_phase_trials));
    out.emplace_back("simulate.region_x_min", format_g17(region_x_min));
    out.emplace_back("simulate.region_x_max", format_g17(region_x_max));
    out.emplace_back("simulate.region_y_min", format_g17(region_y_min));
    out.emplace_back("simulate.region_y_max", format_g17(region_y_max));
    out.emplace_back("simulate.region_z", format_g17(region_z));
    out.emplace_back("simulate.target_x", format_g17(target_x));
    out.emplace_back("simulate.target_y", format_g17(target_y));
    out.emplace_back("simulate.target_z", format_g17(target_z));
    out.emplace_back("simulate.alpha", format_g17(alpha));
    out.emplace_back("simulate.sigma2", format_g17(sigma2));
    out.emplace_back("simulate.speed_mps", format_g17(speed_mps));
    out.emplace_back("simulate.m_antennas", std::to_string(m_antennas));
    out.emplace_back("simulate.trials", std::to_string(trials));
    out.emplace_back("simulate.time_s", format_g17(time_s));
    out.emplace_back("simulate.window_grid", std::to_string(window_grid));
    out.emplace_back("output.seed", std::to_string(seed));
    out.emplace_back("output.path", path);
    return out;
}

inline ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    const auto apply = [&](const std::string& key, const std::string& value, int line) {
        using namespace detail;
        const std::string field = section + "." + key;
        if (field == "array.n_x") cfg.n_x = parse_int(value, field, line);
        else if (field == "array.n_y") cfg.n_y = parse_int(value, field, line);
        else if (field == "array.delta_e_m") cfg.delta_e_m = parse_double(value, field, line);
        else if (field == "signal.frequency_hz") cfg.frequency_hz = parse_double(value, field, line);
        else if (field == "signal.surface_area_m2") cfg.surface_area_m2 = parse_double(value, field, line);
        else if (field == "signal.rcs_phase_mode") {
            if (value == "zero") cfg.rcs_phase_mode = RcsPhaseMode::Zero;
            else if (value == "seeded-uniform") cfg.rcs_phase_mode = RcsPhaseMode::SeededUniform;
            else throw ConfigError("unknown rcs_phase_mode '" + value + "' for " + field, field, line);
        }
        else if (field == "window.phi_min") cfg.phi_min = parse_double(value, field, line);
        else if (field == "window.phi_max") cfg.phi_max = parse_double(value, field, line);
        else if (field == "window.omega_min") cfg.omega_min = parse_double(value, field, line);
        else if (field == "window.omega_max") cfg.omega_max = parse_double(value, field, line);
        else if (field == "sampling.k_x") cfg.k_x = parse_int(value, field, line);
        else if (field == "sampling.k_y") cfg.k_y = parse_int(value, field, line);
        else if (field == "solver.tol") cfg.tol = parse_double(value, field, line);
        else if (field == "solver.fine_grid_density") cfg.fine_grid_density = parse_double(value, field, line);
        else if (field == "solver.max_newton_iters") cfg.max_newton_iters = parse_int(value, field, line);
        else if (field == "sweep.n_x_list") cfg.n_x_list = parse_list<int>(value, field, line, parse_int);
        else if (field == "sweep.k_list") cfg.k_list = parse_list<int>(value, field, line, parse_int);
        else if (field == "sweep.phi_max_list") cfg.phi_max_list = parse_list<double>(value, field, line, parse_double);
        else if (field == "sweep.gain_phi_min") cfg.gain_phi_min = parse_double(value, field, line);
        else if (field == "sweep.gain_phi_max") cfg.gain_phi_max = parse_double(value, field, line);
        else if (field == "sweep.gain_grid_points") cfg.gain_grid_points = parse_int(value, field, line);
        else if (field == "sweep.random_phase_trials") cfg.random_phase_trials = parse_int(value, field, line);
        else if (field == "simulate.region_x_min") cfg.region_x_min = parse_double(value, field, line);
        else if (field == "simulate.region_x_max") cfg.region_x_max = parse_double(value, field, line);
        else if (field == "simulate.region_y_min") cfg.region_y_min = parse_double(value, field, line);
        else if (field == "simulate.region_y_max") cfg.region_y_max = parse_double(value, field, line);
        else if (field == "simulate.region_z") cfg.region_z = parse_double(value, field, line);
        else if (field == "simulate.target_x") cfg.target_x = parse_double(value, field, line);
        else if (field == "simulate.target_y") cfg.target_y = parse_double(value, field, line);
        else if (field == "simulate.target_z") cfg.target_z = parse_double(value, field, line);
        else if (field == "simulate.alpha") cfg.alpha = parse_double(value, field, line);
        else if (field == "simulate.sigma2") cfg.sigma2 = parse_double(value, field, line);
        else if (field == "simulate.speed_mps") cfg.speed_mps = parse_double(value, field, line);
        else if (field == "simulate.m_antennas") cfg.m_antennas = parse_int(value, field, line);
        else if (field == "simulate.trials") cfg.trials = parse_int(value, field, line);
        else if (field == "simulate.time_s") cfg.time_s = parse_double(value, field, line);
        else if (field == "simulate.window_grid") cfg.window_grid = parse_int(value, field, line);
        else if (field == "output.seed") cfg.seed = parse_u64(value, field, line);
        else if (field == "output.path") cfg.path = value;
        else throw ConfigError("unknown configuration key '" + field + "'", field, line);
    };

    while (std::getline(in, raw)) {
        line_no++;
        std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header '" + line + "'", line,
                                  line_no);
            section = detail::trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"array",  "signal",   "window", "sampling",
                                          "solver", "sweep",    "simulate", "output"};
            bool ok = false;
            for (const char* s : known) ok = ok || section == s;
            if (!ok)
                throw ConfigError("unknown configuration section '" + section + "'", section,
                                  line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", line, line_no);
        if (section.empty())
            throw ConfigError("key outside of any [section]", line, line_no);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line, line_no);
        apply(key, value, line_no);
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig ExperimentConfig::from_file(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("cannot open config file '" + file_path + "'", file_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

}  // namespace irses
