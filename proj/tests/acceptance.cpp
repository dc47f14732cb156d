// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "irses/channel.hpp"
#include "irses/harness.hpp"
#include "irses/optimizer.hpp"

using namespace irses;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) g_failures++;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const double kLambda = 0.15;

TargetRcs reference_rcs() { return make_target_rcs(0.1, kLambda); }

StealthInstance flagship_instance() {
    return make_uniform_instance(ArrayGeometry(16, 1, 0.075, kLambda), reference_rcs(),
                                 {-0.25, 0.25, 0, 0}, 20, 1);
}

// 1. |tau| and the no-IRS gain match the hand-computed constants.
void criterion_rcs_constant() {
    const TargetRcs rcs = reference_rcs();
    const double want_mag = 4.0 * std::numbers::pi * 0.1 * 0.1 / (0.15 * 0.15);
    bool pass = std::abs(rcs.magnitude - want_mag) <= 1e-6 * want_mag;
    pass = pass && std::abs(rcs.magnitude - 5.585053606381854) <= 1e-6 * want_mag;

    const ArrayGeometry geom(16, 1, 0.075, kLambda);
    ReflectionVector zero;
    zero.theta = ComplexVector::Zero(16);
    const double want_gain = want_mag * want_mag;
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double phi = -0.5 + i * 1.0 / 200.0;
        const double g = std::norm(reflection_gain(zero, {phi, 0}, rcs, geom));
        worst = std::max(worst, std::abs(g - want_gain) / want_gain);
    }
    pass = pass && worst <= 1e-6;
    report(1, "RCS constant and no-IRS gain", pass,
           "|tau|=" + fmt(rcs.magnitude) + " |tau|^2=" + fmt(want_gain) +
               " max rel dev=" + fmt(worst));
}

// 2. Single broadside sample with 16 elements cancels exactly.
void criterion_exact_cancellation() {
    const StealthInstance inst = make_uniform_instance(
        ArrayGeometry(16, 1, 0.075, kLambda), reference_rcs(), {0, 0, 0, 0}, 1, 1);
    const StealthSolution sol = solve_stealth(inst);
    bool pass = sol.eta_star <= 1e-9;
    const std::complex<double> want = -inst.tau_s.value / 16.0;
    double worst = 0.0;
    for (int i = 0; i < 16; ++i)
        worst = std::max(worst, std::abs(sol.theta_star.theta[i] - want));
    pass = pass && worst <= 1e-6;
    report(2, "exact cancellation (N=16, K=1)", pass,
           "eta*=" + fmt(sol.eta_star) + " max|theta - (-tau/16)|=" + fmt(worst));
}

// 3. Scalar disk-constrained optimum (|tau| - 1)^2.
void criterion_scalar_analytic() {
    const StealthInstance inst = make_uniform_instance(
        ArrayGeometry(1, 1, 0.075, kLambda), reference_rcs(), {0, 0, 0, 0}, 1, 1);
    const StealthSolution sol = solve_stealth(inst);
    const double tau_abs = std::abs(inst.tau_s.value);
    const double want = (tau_abs - 1.0) * (tau_abs - 1.0);
    bool pass = std::abs(sol.eta_star - want) <= 1e-6 * want;
    pass = pass && std::abs(sol.theta_star.theta[0] + inst.tau_s.value / tau_abs) <= 1e-6;
    report(3, "1-D analytic optimum", pass,
           "eta*=" + fmt(sol.eta_star) + " want=" + fmt(want));
}

// 4. Strong duality and complementary slackness on the flagship instance.
void criterion_strong_duality() {
    const StealthInstance inst = flagship_instance();
    const StealthSolution sol = solve_stealth(inst);
    const double budget = 1e-6 * (1.0 + sol.eta_star);
    bool pass = sol.duality_gap >= -1e-8 && sol.duality_gap <= budget;
    pass = pass && sol.kkt_residual <= budget;
    double worst_gain = 0.0;
    for (int i = 0; i < sol.sampled_gains.size(); ++i)
        worst_gain = std::max(worst_gain, sol.sampled_gains[i]);
    pass = pass && worst_gain <= sol.eta_star + 1e-8;
    report(4, "strong duality on the flagship instance", pass,
           "eta*=" + fmt(sol.eta_star) + " gap=" + fmt(sol.duality_gap) +
               " kkt=" + fmt(sol.kkt_residual));
}

// 5. The projected-subgradient oracle agrees with the dual pipeline.
void criterion_cross_solver() {
    StepSchedule geo;
    geo.kind = StepSchedule::Kind::GeometricEpochs;

    struct Case {
        StealthInstance inst;
        std::string label;
    };
    std::vector<Case> cases;
    cases.push_back({flagship_instance(), "flagship"});
    SplitMix64 rng(20240809);
    for (int i = 0; i < 20; ++i) {
        const int n_x = 4 + static_cast<int>(rng.next() % 29);
        const int k = 5 + static_cast<int>(rng.next() % 36);
        const double phi_max = 0.15 + 0.3 * rng.uniform01();
        cases.push_back({make_uniform_instance(ArrayGeometry(n_x, 1, 0.075, kLambda),
                                               reference_rcs(), {-phi_max, phi_max, 0, 0},
                                               k, 1),
                         "N=" + std::to_string(n_x) + ",K=" + std::to_string(k)});
    }

    bool pass = true;
    double worst_rel = 0.0;
    std::string worst_label;
    for (const auto& c : cases) {
        const StealthSolution sol = solve_stealth(c.inst);
        const PrimalResult oracle = primal_oracle(c.inst, 160000, geo);
        const double rel = std::abs(oracle.eta - sol.eta_star) / std::max(sol.eta_star, 1e-12);
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_label = c.label;
        }
        pass = pass && rel <= 1e-3;
    }
    report(5, "cross-solver agreement (flagship + 20 random)", pass,
           "worst rel=" + fmt(worst_rel) + " at " + worst_label);
}

// 6. Band-stop behavior of the flagship solution.
void criterion_band_stop() {
    const StealthInstance inst = flagship_instance();
    const StealthSolution sol = solve_stealth(inst);
    const ArrayGeometry geom = inst.geom;
    const TargetRcs rcs = inst.tau_s;

    const double in_max =
        window_max_gain(sol.theta_star, {-0.25, 0.25, 0, 0}, rcs, geom, 2000).eta_cont;
    const double out_left =
        window_max_gain(sol.theta_star, {-0.5, -0.2501, 0, 0}, rcs, geom, 2000).eta_cont;
    const double out_right =
        window_max_gain(sol.theta_star, {0.2501, 0.5, 0, 0}, rcs, geom, 2000).eta_cont;
    const double out_max = std::max(out_left, out_right);
    const double no_irs = std::norm(rcs.value);

    bool pass = in_max <= 1.05 * sol.eta_star;
    pass = pass && in_max < no_irs;
    pass = pass && out_max > in_max;
    report(6, "band-stop behavior", pass,
           "in=" + fmt(in_max) + " out=" + fmt(out_max) + " no-IRS=" + fmt(no_irs) +
               " eta*=" + fmt(sol.eta_star));
}

// 7. Monotone improvement with N_x; sampled-resolution plateau in K.
void criterion_monotonicity() {
    const TargetRcs rcs = reference_rcs();
    bool pass_n = true;
    std::string detail_n = "eta*:";
    double prev = 1e300;
    for (int n_x : {4, 8, 16, 32}) {
        const StealthInstance inst = make_uniform_instance(
            ArrayGeometry(n_x, 1, 0.075, kLambda), rcs, {-0.25, 0.25, 0, 0}, 20, 1);
        const StealthSolution sol = solve_stealth(inst);
        pass_n = pass_n && sol.eta_star <= prev + 1e-9;
        prev = sol.eta_star;
        detail_n += " " + fmt(sol.eta_star);
    }

    bool pass_k = true;
    std::string detail_k = "cont:";
    std::vector<double> cont;
    for (int k : {2, 5, 10, 20, 40}) {
        const StealthInstance inst = make_uniform_instance(
            ArrayGeometry(16, 1, 0.075, kLambda), rcs, {-0.25, 0.25, 0, 0}, k, 1);
        const StealthSolution sol = solve_stealth(inst);
        cont.push_back(
            window_max_gain(sol.theta_star, {-0.25, 0.25, 0, 0}, rcs, inst.geom, 2000)
                .eta_cont);
        detail_k += " " + fmt(cont.back());
    }
    for (std::size_t i = 1; i < cont.size(); ++i)
        pass_k = pass_k && cont[i] <= cont[i - 1] + 1e-6 * (1.0 + cont[i - 1]);
    const bool plateau = std::abs(cont[4] - cont[3]) <= 0.05 * cont[3];

    report(7, "monotonicity in N_x and K (plateau)", pass_n && pass_k && plateau,
           detail_n + " | " + detail_k + " | plateau dev=" +
               fmt(std::abs(cont[4] - cont[3]) / cont[3]));
}

// 8. Echo-equation vs factored-SNR consistency over random scenes.
void criterion_factorization() {
    SplitMix64 rng(777);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double lambda = 0.1 + 0.15 * rng.uniform01();
        const int n_x = 1 + static_cast<int>(rng.next() % 8);
        const int n_y = 1 + static_cast<int>(rng.next() % 4);
        const ArrayGeometry geom(n_x, n_y, lambda / 2 * (0.4 + 0.6 * rng.uniform01()),
                                 lambda);
        ChannelParams params;
        params.alpha = 0.5 + 1.5 * rng.uniform01();
        params.lambda = lambda;
        params.speed = 80 * rng.uniform01();
        params.sigma2 = 1e-10 * (1 + 9 * rng.uniform01());
        params.m_antennas = 1 + static_cast<int>(rng.next() % 6);
        const TargetRcs rcs = make_target_rcs(0.03 + 0.1 * rng.uniform01(), lambda,
                                              2 * std::numbers::pi * rng.uniform01());
        const Vec3 q{-40 + 80 * rng.uniform01(), -40 + 80 * rng.uniform01(),
                     100 + 400 * rng.uniform01()};
        const Vec3 w_t{-300 + 600 * rng.uniform01(), -300 + 600 * rng.uniform01(), 0};
        const Vec3 w_r{-300 + 600 * rng.uniform01(), -300 + 600 * rng.uniform01(), 0};
        ReflectionVector theta;
        theta.theta.resize(geom.elements());
        for (int i = 0; i < geom.elements(); ++i)
            theta.theta[i] =
                std::polar(rng.uniform01(), 2 * std::numbers::pi * rng.uniform01());
        RadarWaveform wf;
        wf.x.resize(params.m_antennas);
        for (int i = 0; i < params.m_antennas; ++i)
            wf.x[i] = std::complex<double>(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
        const double t = 1e-3 * rng.uniform01();

        const double snr = receiver_snr(q, w_t, w_r, theta, wf, t, geom, params, rcs);
        const ComplexVector y =
            noiseless_echo(q, w_t, w_r, theta, wf, t, geom, params, rcs);
        const double direct = y.squaredNorm() / (params.m_antennas * params.sigma2);
        worst = std::max(worst, std::abs(snr - direct) / std::max(direct, 1e-300));
    }
    report(8, "channel/gain factorization (200 scenes)", worst <= 1e-10,
           "worst rel=" + fmt(worst));
}

// 9. Complementary slackness prunes the sample set.
void criterion_kkt_sparsity() {
    const StealthInstance inst = flagship_instance();
    const StealthSolution sol = solve_stealth(inst);
    bool pass = true;
    for (int i = 0; i < inst.num_samples(); ++i)
        if (sol.sampled_gains[i] < sol.eta_star - 1e-4)
            pass = pass && sol.duals.lambda[i] <= 1e-5;
    const int effective = static_cast<int>(sol.effective_samples.size());
    pass = pass && effective < inst.num_samples();
    report(9, "KKT sparsity of the sample set", pass,
           "|K_eff|=" + std::to_string(effective) + " of " +
               std::to_string(inst.num_samples()));
}

// 10. Byte-identical outputs for identical configs and seeds.
void criterion_determinism() {
    ExperimentConfig cfg;
    cfg.n_x = 8;
    cfg.k_x = 10;
    cfg.gain_grid_points = 201;
    cfg.random_phase_trials = 3;
    cfg.trials = 5;
    cfg.window_grid = 101;
    cfg.fine_grid_density = 400;
    cfg.seed = 31337;

    const bool solve_ok = run_solve(cfg) == run_solve(cfg);
    const bool sweep_ok = run_sweep_gain(cfg) == run_sweep_gain(cfg);
    const bool simulate_ok = run_simulate(cfg) == run_simulate(cfg);
    report(10, "byte-identical reruns (solve, sweep-gain, simulate)",
           solve_ok && sweep_ok && simulate_ok,
           std::string("solve=") + (solve_ok ? "ok" : "DIFF") + " sweep=" +
               (sweep_ok ? "ok" : "DIFF") + " simulate=" + (simulate_ok ? "ok" : "DIFF"));
}

}  // namespace

int main() {
    criterion_rcs_constant();
    criterion_exact_cancellation();
    criterion_scalar_analytic();
    criterion_strong_duality();
    criterion_cross_solver();
    criterion_band_stop();
    criterion_monotonicity();
    criterion_factorization();
    criterion_kkt_sparsity();
    criterion_determinism();
    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
