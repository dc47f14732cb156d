#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "irses/channel.hpp"
#include "irses/config.hpp"
#include "irses/optimizer.hpp"

namespace irses {

using Json = nlohmann::ordered_json;

// Derived deterministic sub-streams of the master seed; the salt values per
// command are documented in the README next to the output formats.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t salt) {
    SplitMix64 g(master + 0xD1342543DE82EF95ULL * salt);
    return g.next();
}

namespace detail {

inline std::string to_db_string(double linear) {
    if (!(linear > 0.0)) return "-inf";
    return format_g17(10.0 * std::log10(linear));
}

// Bounded worker pool; results are stored by input index so output order is
// independent of completion order.
inline void parallel_for_ordered(int n, const std::function<void(int)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, 8u));
    if (n <= 1 || workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

inline TargetRcs rcs_from_config(const ExperimentConfig& cfg) {
    double xi = 0.0;
    if (cfg.rcs_phase_mode == RcsPhaseMode::SeededUniform) {
        SplitMix64 g(sub_seed(cfg.seed, 1));
        xi = 2.0 * std::numbers::pi * g.uniform01();
    }
    return make_target_rcs(cfg.surface_area_m2, cfg.lambda_m(), xi);
}

inline ArrayGeometry geometry_from_config(const ExperimentConfig& cfg, int n_x_override = 0) {
    return ArrayGeometry(n_x_override > 0 ? n_x_override : cfg.n_x, cfg.n_y, cfg.delta_e_m,
                         cfg.lambda_m());
}

inline AngularWindow window_from_config(const ExperimentConfig& cfg) {
    return {cfg.phi_min, cfg.phi_max, cfg.omega_min, cfg.omega_max};
}

inline LmiOptions lmi_options_from_config(const ExperimentConfig& cfg) {
    LmiOptions opts;
    opts.max_newton_iters = cfg.max_newton_iters;
    return opts;
}

namespace detail {

inline void append_config_header(std::ostringstream& out, const ExperimentConfig& cfg,
                                 const std::string& command) {
    out << "# irses " << command << "\n";
    for (const auto& [key, value] : cfg.resolved_items())
        out << "# " << key << " = " << value << "\n";
}

inline Json config_json(const ExperimentConfig& cfg) {
    Json j = Json::object();
    for (const auto& [key, value] : cfg.resolved_items()) j[key] = value;
    return j;
}

inline Json solution_json(const StealthSolution& sol) {
    Json s = Json::object();
    s["eta_star"] = sol.eta_star;
    s["eta_star_db"] = to_db_string(sol.eta_star);
    s["dual_objective"] = sol.dual_objective;
    s["duality_gap"] = sol.duality_gap;
    s["kkt_residual"] = sol.kkt_residual;
    s["effective_samples"] = sol.effective_samples;
    Json theta = Json::array();
    for (Eigen::Index i = 0; i < sol.theta_star.theta.size(); ++i)
        theta.push_back(Json{{"magnitude", std::abs(sol.theta_star.theta[i])},
                             {"phase", std::arg(sol.theta_star.theta[i])}});
    s["theta"] = std::move(theta);
    s["lambda"] = std::vector<double>(sol.duals.lambda.data(),
                                      sol.duals.lambda.data() + sol.duals.lambda.size());
    s["mu"] = std::vector<double>(sol.duals.mu.data(),
                                  sol.duals.mu.data() + sol.duals.mu.size());
    s["sampled_gains"] = std::vector<double>(
        sol.sampled_gains.data(), sol.sampled_gains.data() + sol.sampled_gains.size());
    s["stats"] = Json{{"barrier_iterations", sol.stats.barrier_iterations},
                      {"certified_gap", sol.stats.certified_gap},
                      {"lmi_min_eigenvalue", sol.stats.lmi_min_eigenvalue},
                      {"equality_residual", sol.stats.equality_residual},
                      {"amplitude_saturation_fraction",
                       sol.stats.amplitude_saturation_fraction}};
    return s;
}

}  // namespace detail

// `solve`: one instance from the [window]/[sampling] sections, reported as JSON.
inline std::string run_solve(const ExperimentConfig& cfg) {
    cfg.validate();
    const TargetRcs rcs = rcs_from_config(cfg);
    const StealthInstance inst = make_uniform_instance(
        geometry_from_config(cfg), rcs, window_from_config(cfg), cfg.k_x, cfg.k_y);
    const StealthSolution sol = solve_stealth(inst, cfg.tol, lmi_options_from_config(cfg));

    Json j = Json::object();
    j["command"] = "solve";
    j["config"] = detail::config_json(cfg);
    j["solution"] = detail::solution_json(sol);
    return j.dump(2) + "\n";
}

// `sweep-gain`: reflection gain versus phi for the four methods on a dense
// grid spanning [gain_phi_min, gain_phi_max].
inline std::string run_sweep_gain(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n_y != 1)
        throw ConfigError("sweep-gain requires a ULA configuration (array.n_y = 1)",
                          "array.n_y");
    const TargetRcs rcs = rcs_from_config(cfg);
    const ArrayGeometry geom = geometry_from_config(cfg);
    const AngularWindow window = window_from_config(cfg);
    const StealthInstance inst = make_uniform_instance(geom, rcs, window, cfg.k_x, cfg.k_y);
    const StealthSolution sol = solve_stealth(inst, cfg.tol, lmi_options_from_config(cfg));

    struct Method {
        const char* name;
        ReflectionVector theta;
    };
    const std::vector<Method> methods = {
        {"proposed", sol.theta_star},
        {"no-irs", baseline_no_irs(inst)},
        {"single-point", baseline_single_point(inst)},
        {"random-phase", baseline_random_phase(inst, sub_seed(cfg.seed, 3))},
    };

    const double omega_mid = (window.omega_min + window.omega_max) / 2.0;
    std::ostringstream out;
    detail::append_config_header(out, cfg, "sweep-gain");
    out << "phi,method,gain_linear,gain_db,eta_star,duality_gap\n";
    for (int i = 0; i < cfg.gain_grid_points; ++i) {
        const double phi =
            cfg.gain_phi_min + static_cast<double>(i) * (cfg.gain_phi_max - cfg.gain_phi_min) /
                                   (cfg.gain_grid_points - 1);
        for (const auto& m : methods) {
            const double g = std::norm(reflection_gain(m.theta, {phi, omega_mid}, rcs, geom));
            out << detail::format_g17(phi) << ',' << m.name << ',' << detail::format_g17(g)
                << ',' << detail::to_db_string(g) << ',';
            if (std::string_view(m.name) == "proposed")
                out << detail::format_g17(sol.eta_star) << ','
                    << detail::format_g17(sol.duality_gap);
            else
                out << ',';
            out << '\n';
        }
    }
    return out.str();
}

// `sweep-elements`: in-window fine-grid maximum gain versus the number of
// elements N_x, for all four methods. The random-phase value is the mean
// over `random_phase_trials` seeded draws.
inline std::string run_sweep_elements(const ExperimentConfig& cfg) {
    cfg.validate();
    const TargetRcs rcs = rcs_from_config(cfg);
    const AngularWindow window = window_from_config(cfg);

    struct Row {
        int n_x = 0;
        double proposed = 0.0, no_irs = 0.0, single_point = 0.0, random_phase = 0.0;
        double eta_star = 0.0, duality_gap = 0.0;
    };
    std::vector<Row> rows(cfg.n_x_list.size());
    detail::parallel_for_ordered(static_cast<int>(cfg.n_x_list.size()), [&](int idx) {
        const int n_x = cfg.n_x_list[idx];
        const ArrayGeometry geom = geometry_from_config(cfg, n_x);
        const StealthInstance inst = make_uniform_instance(geom, rcs, window, cfg.k_x, cfg.k_y);
        const StealthSolution sol = solve_stealth(inst, cfg.tol, lmi_options_from_config(cfg));
        Row& row = rows[idx];
        row.n_x = n_x;
        row.eta_star = sol.eta_star;
        row.duality_gap = sol.duality_gap;
        row.proposed =
            window_max_gain(sol.theta_star, window, rcs, geom, cfg.fine_grid_density).eta_cont;
        row.no_irs =
            window_max_gain(baseline_no_irs(inst), window, rcs, geom, cfg.fine_grid_density)
                .eta_cont;
        row.single_point = window_max_gain(baseline_single_point(inst), window, rcs, geom,
                                           cfg.fine_grid_density)
                               .eta_cont;
        double acc = 0.0;
        for (int trial = 0; trial < cfg.random_phase_trials; ++trial) {
            const ReflectionVector theta =
                baseline_random_phase(inst, sub_seed(cfg.seed, 1000 + trial));
            acc += window_max_gain(theta, window, rcs, geom, cfg.fine_grid_density).eta_cont;
        }
        row.random_phase = acc / cfg.random_phase_trials;
    });

    std::ostringstream out;
    detail::append_config_header(out, cfg, "sweep-elements");
    out << "n_x,method,max_gain_linear,max_gain_db,eta_star,duality_gap\n";
    for (const Row& row : rows) {
        const auto emit = [&](const char* name, double value, bool with_eta) {
            out << row.n_x << ',' << name << ',' << detail::format_g17(value) << ','
                << detail::to_db_string(value) << ',';
            if (with_eta)
                out << detail::format_g17(row.eta_star) << ','
                    << detail::format_g17(row.duality_gap);
            else
                out << ',';
            out << '\n';
        };
        emit("proposed", row.proposed, true);
        emit("no-irs", row.no_irs, false);
        emit("single-point", row.single_point, false);
        emit("random-phase", row.random_phase, false);
    }
    return out.str();
}

// `sweep-samples`: continuous in-window maximum of the K-sample solution
// versus K, for each (n_x, phi_max) combination.
inline std::string run_sweep_samples(const ExperimentConfig& cfg) {
    cfg.validate();
    const TargetRcs rcs = rcs_from_config(cfg);

    struct Point {
        int n_x = 0;
        double phi_max = 0.0;
        int k = 0;
    };
    std::vector<Point> points;
    for (int n_x : cfg.n_x_list)
        for (double phi_max : cfg.phi_max_list)
            for (int k : cfg.k_list) points.push_back({n_x, phi_max, k});

    struct Row {
        Point p;
        double eta_star = 0.0, eta_cont = 0.0, duality_gap = 0.0;
    };
    std::vector<Row> rows(points.size());
    detail::parallel_for_ordered(static_cast<int>(points.size()), [&](int idx) {
        const Point& p = points[idx];
        const ArrayGeometry geom = geometry_from_config(cfg, p.n_x);
        const AngularWindow window{-p.phi_max, p.phi_max, cfg.omega_min, cfg.omega_max};
        const StealthInstance inst = make_uniform_instance(geom, rcs, window, p.k, cfg.k_y);
        const StealthSolution sol = solve_stealth(inst, cfg.tol, lmi_options_from_config(cfg));
        Row& row = rows[idx];
        row.p = p;
        row.eta_star = sol.eta_star;
        row.duality_gap = sol.duality_gap;
        row.eta_cont =
            window_max_gain(sol.theta_star, window, rcs, geom, cfg.fine_grid_density).eta_cont;
    });

    std::ostringstream out;
    detail::append_config_header(out, cfg, "sweep-samples");
    out << "k,n_x,phi_max,eta_star,eta_cont_linear,eta_cont_db,duality_gap\n";
    for (const Row& row : rows)
        out << row.p.k << ',' << row.p.n_x << ',' << detail::format_g17(row.p.phi_max) << ','
            << detail::format_g17(row.eta_star) << ',' << detail::format_g17(row.eta_cont)
            << ',' << detail::to_db_string(row.eta_cont) << ','
            << detail::format_g17(row.duality_gap) << '\n';
    return out.str();
}

// `simulate`: random bistatic placements inside the region, comparing the
// received SNR with and without the optimized reflection and checking that
// the echo norm factors through the reflection gain on every trial.
inline std::string run_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const RegionRect region{cfg.region_x_min, cfg.region_x_max, cfg.region_y_min,
                            cfg.region_y_max, cfg.region_z};
    const Vec3 target{cfg.target_x, cfg.target_y, cfg.target_z};
    const AngularWindow window = angular_window(region, target, cfg.window_grid);

    const TargetRcs rcs = rcs_from_config(cfg);
    const ArrayGeometry geom = geometry_from_config(cfg);
    const StealthInstance inst = make_uniform_instance(geom, rcs, window, cfg.k_x, cfg.k_y);
    const StealthSolution sol = solve_stealth(inst, cfg.tol, lmi_options_from_config(cfg));
    const ReflectionVector no_irs = baseline_no_irs(inst);

    ChannelParams params;
    params.alpha = cfg.alpha;
    params.lambda = cfg.lambda_m();
    params.speed = cfg.speed_mps;
    params.sigma2 = cfg.sigma2;
    params.m_antennas = cfg.m_antennas;
    const RadarWaveform waveform = default_waveform(cfg.m_antennas);

    SplitMix64 placement(sub_seed(cfg.seed, 2));
    const auto draw_point = [&]() -> Vec3 {
        const double x = cfg.region_x_min +
                         placement.uniform01() * (cfg.region_x_max - cfg.region_x_min);
        const double y = cfg.region_y_min +
                         placement.uniform01() * (cfg.region_y_max - cfg.region_y_min);
        return {x, y, cfg.region_z};
    };

    Json trials = Json::array();
    double max_residual = 0.0;
    bool all_in_window = true;
    std::vector<double> ratios;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const Vec3 w_t = draw_point();
        const Vec3 w_r = draw_point();
        const SpatialFrequencyPair dev = channel_deviation(target, w_t, w_r);
        const bool in_window = window.contains(dev, 1e-3 * (1.0 + window.phi_width()));
        all_in_window = all_in_window && in_window;

        const double snr_with = receiver_snr(target, w_t, w_r, sol.theta_star, waveform,
                                             cfg.time_s, geom, params, rcs);
        const double snr_without =
            receiver_snr(target, w_t, w_r, no_irs, waveform, cfg.time_s, geom, params, rcs);

        // Eq-level consistency: the noiseless echo norm over M sigma^2 must
        // equal the factored SNR.
        const ComplexVector y_nl = noiseless_echo(target, w_t, w_r, sol.theta_star, waveform,
                                                  cfg.time_s, geom, params, rcs);
        const double snr_from_echo =
            y_nl.squaredNorm() / (params.m_antennas * params.sigma2);
        const double residual =
            std::abs(snr_from_echo - snr_with) / std::max(snr_with, 1e-300);
        max_residual = std::max(max_residual, residual);

        const EchoSnapshot snap =
            simulate_echo(target, w_t, w_r, sol.theta_star, waveform, cfg.time_s, geom,
                          params, rcs, sub_seed(cfg.seed, 100 + trial));

        const double ratio = snr_without > 0.0 ? snr_with / snr_without : 0.0;
        ratios.push_back(ratio);
        trials.push_back(Json{{"trial", trial},
                              {"w_t", {w_t.x, w_t.y, w_t.z}},
                              {"w_r", {w_r.x, w_r.y, w_r.z}},
                              {"deviation", {dev.phi, dev.omega}},
                              {"in_window", in_window},
                              {"snr_with_irs", snr_with},
                              {"snr_without_irs", snr_without},
                              {"snr_ratio", ratio},
                              {"snr_ratio_db", detail::to_db_string(ratio)},
                              {"factorization_residual", residual},
                              {"noisy_echo_norm_sq", snap.y.squaredNorm()}});
    }

    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];

    Json j = Json::object();
    j["command"] = "simulate";
    j["config"] = detail::config_json(cfg);
    j["window"] = Json{{"phi_min", window.phi_min},
                       {"phi_max", window.phi_max},
                       {"omega_min", window.omega_min},
                       {"omega_max", window.omega_max}};
    j["solution"] = detail::solution_json(sol);
    j["summary"] = Json{{"trials", cfg.trials},
                        {"all_in_window", all_in_window},
                        {"max_factorization_residual", max_residual},
                        {"snr_ratio_min", sorted.empty() ? 0.0 : sorted.front()},
                        {"snr_ratio_median", median},
                        {"snr_ratio_max", sorted.empty() ? 0.0 : sorted.back()}};
    j["trials"] = std::move(trials);
    return j.dump(2) + "\n";
}

}  // namespace irses
