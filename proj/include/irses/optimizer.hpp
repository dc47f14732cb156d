#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "irses/errors.hpp"
#include "irses/gain.hpp"
#include "irses/geometry.hpp"
#include "irses/lmi.hpp"
#include "irses/rng.hpp"

namespace irses {

// One solvable min-max reflection problem: geometry, target RCS, angular
// window, and the sampled steering vectors u_k.
struct StealthInstance {
    ArrayGeometry geom;
    TargetRcs tau_s;
    AngularWindow window;
    SamplingPlan plan;
    std::vector<ComplexVector> u_vectors;

    int num_samples() const { return static_cast<int>(u_vectors.size()); }
    int num_elements() const { return geom.elements(); }
};

inline StealthInstance make_instance(const ArrayGeometry& geom, const TargetRcs& tau_s,
                                     const AngularWindow& window, SamplingPlan plan) {
    if (plan.points.empty()) throw std::invalid_argument("make_instance: empty sampling plan");
    StealthInstance inst;
    inst.geom = geom;
    inst.tau_s = tau_s;
    inst.window = window;
    inst.plan = std::move(plan);
    inst.u_vectors.reserve(inst.plan.points.size());
    for (const auto& p : inst.plan.points)
        inst.u_vectors.push_back(steering_of_sample(p, geom));
    return inst;
}

inline StealthInstance make_uniform_instance(const ArrayGeometry& geom,
                                             const TargetRcs& tau_s,
                                             const AngularWindow& window, int k_x,
                                             int k_y) {
    return make_instance(geom, tau_s, window, sample_window(window, k_x, k_y));
}

struct DualVariables {
    RealVector lambda;  // length K, >= 0, sums to 1
    RealVector mu;      // length N, >= 0

    void validate(int k, int n) const {
        if (lambda.size() != k || mu.size() != n)
            throw std::invalid_argument("DualVariables: size mismatch");
        if (lambda.minCoeff() < 0.0 || mu.minCoeff() < 0.0)
            throw std::invalid_argument("DualVariables: negative entries");
        if (std::abs(lambda.sum() - 1.0) > 1e-9)
            throw std::invalid_argument("DualVariables: lambda must sum to one");
    }
};

struct DualAssembly {
    ComplexMatrix q_matrix;  // Q = sum_k lambda_k u_k u_k^H + diag(mu)
    ComplexVector v;         // v = sum_k lambda_k u_k
    double dual_value = 0.0; // f = -|tau|^2 v^H Q^-1 v - sum(mu) + |tau|^2
};

inline DualAssembly assemble_dual(const DualVariables& duals,
                                  const StealthInstance& instance) {
    const int k = instance.num_samples();
    const int n = instance.num_elements();
    duals.validate(k, n);

    DualAssembly out;
    out.q_matrix = ComplexMatrix::Zero(n, n);
    out.v = ComplexVector::Zero(n);
    for (int i = 0; i < k; ++i) {
        if (duals.lambda[i] == 0.0) continue;
        out.q_matrix.noalias() +=
            duals.lambda[i] * (instance.u_vectors[i] * instance.u_vectors[i].adjoint());
        out.v += duals.lambda[i] * instance.u_vectors[i];
    }
    out.q_matrix += duals.mu.cast<std::complex<double>>().asDiagonal();

    Eigen::LLT<ComplexMatrix> llt(out.q_matrix);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError(
            "assemble_dual: Q is singular; solve with a positive mu floor");
    const double tau_sq = std::norm(instance.tau_s.value);
    const double quad = std::real(out.v.dot(llt.solve(out.v)));
    out.dual_value = -tau_sq * quad - duals.mu.sum() + tau_sq;
    return out;
}

// Minimizer of the Lagrangian in theta: the solution of Q theta = -tau_S v.
inline ComplexVector stationary_theta(const DualVariables& duals,
                                      const StealthInstance& instance) {
    const DualAssembly a = assemble_dual(duals, instance);
    Eigen::LLT<ComplexMatrix> llt(a.q_matrix);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError(
            "stationary_theta: Q is singular; solve with a positive mu floor");
    return -instance.tau_s.value * llt.solve(a.v);
}

// The dual problem as one affine Hermitian LMI in z = [q, lambda, mu_excess]
// with mu = mu_excess + mu_floor:
//   [[ |tau|^2 - 1^T mu - q , tau^* v^H ],
//    [ tau v                , Q         ]]  >= 0,
//   sum(lambda) = 1, lambda >= 0, mu_excess >= 0.
struct P4Problem {
    LmiProblem lmi;
    double mu_floor = 0.0;
    int num_samples = 0;
    int num_elements = 0;
};

inline double default_mu_floor(const TargetRcs& tau_s) {
    return 1e-8 * (1.0 + std::norm(tau_s.value));
}

inline P4Problem build_p4(const StealthInstance& instance, double mu_floor) {
    const int k = instance.num_samples();
    const int n = instance.num_elements();
    const std::complex<double> tau = instance.tau_s.value;
    const double tau_sq = std::norm(tau);
    if (mu_floor < 0.0) throw std::invalid_argument("build_p4: mu_floor must be >= 0");

    P4Problem p4;
    p4.mu_floor = mu_floor;
    p4.num_samples = k;
    p4.num_elements = n;

    LmiProblem& lmi = p4.lmi;
    lmi.num_vars = 1 + k + n;
    lmi.objective = RealVector::Zero(lmi.num_vars);
    lmi.objective[0] = 1.0;

    const int dim = n + 1;
    lmi.f.assign(lmi.num_vars + 1, ComplexMatrix::Zero(dim, dim));
    lmi.f[0](0, 0) = tau_sq - n * mu_floor;
    for (int i = 0; i < n; ++i) lmi.f[0](1 + i, 1 + i) = mu_floor;
    lmi.f[1](0, 0) = -1.0;  // coefficient of q
    for (int j = 0; j < k; ++j) {
        ComplexMatrix& fj = lmi.f[2 + j];
        const ComplexVector& u = instance.u_vectors[j];
        fj.block(1, 1, n, n) = u * u.adjoint();
        fj.block(1, 0, n, 1) = tau * u;
        fj.block(0, 1, 1, n) = (tau * u).adjoint();
    }
    for (int i = 0; i < n; ++i) {
        ComplexMatrix& fi = lmi.f[2 + k + i];
        fi(0, 0) = -1.0;
        fi(1 + i, 1 + i) = 1.0;
    }

    lmi.eq_lhs = RealMatrix::Zero(1, lmi.num_vars);
    lmi.eq_lhs.block(0, 1, 1, k).setOnes();
    lmi.eq_rhs = RealVector::Constant(1, 1.0);
    lmi.nonneg.clear();
    for (int i = 1; i < lmi.num_vars; ++i) lmi.nonneg.push_back(i);

    // Strictly feasible bootstrap: uniform lambda, mu large enough that the
    // Schur complement has slack exactly one at q0 = f(lambda0, mu0) - 1.
    DualVariables d0;
    d0.lambda = RealVector::Constant(k, 1.0 / k);
    const double mu_boot =
        std::max(std::sqrt(tau_sq) * std::sqrt(static_cast<double>(n)) + 1.0,
                 2.0 * mu_floor + 1e-12);
    d0.mu = RealVector::Constant(n, mu_boot);
    const DualAssembly a0 = assemble_dual(d0, instance);
    lmi.initial_point = RealVector::Zero(lmi.num_vars);
    lmi.initial_point[0] = a0.dual_value - 1.0;
    lmi.initial_point.segment(1, k).setConstant(1.0 / k);
    lmi.initial_point.segment(1 + k, n).setConstant(mu_boot - mu_floor);
    return p4;
}

struct SolveStats {
    int barrier_iterations = 0;
    double certified_gap = 0.0;
    double lmi_min_eigenvalue = 0.0;
    double equality_residual = 0.0;
    double amplitude_saturation_fraction = 0.0;  // share of |theta_n| > 0.99
};

struct StealthSolution {
    ReflectionVector theta_star;
    double eta_star = 0.0;
    DualVariables duals;
    double dual_objective = 0.0;
    double duality_gap = 0.0;
    double kkt_residual = 0.0;
    std::vector<int> effective_samples;  // indices with lambda above threshold
    RealVector sampled_gains;            // |u_k^T theta* + tau|^2 per sample
    SolveStats stats;
};

inline RealVector sampled_gains(const ComplexVector& theta, const StealthInstance& inst) {
    RealVector g(inst.num_samples());
    for (int i = 0; i < inst.num_samples(); ++i) {
        std::complex<double> acc = inst.tau_s.value;
        const ComplexVector& u = inst.u_vectors[i];
        for (Eigen::Index j = 0; j < u.size(); ++j) acc += u[j] * theta[j];
        g[i] = std::norm(acc);
    }
    return g;
}

namespace detail {

// Mirror index map of a tensor-grid plan on a sign-symmetric window: the
// sample at (-phi, -omega) carries the conjugate steering vector.
inline bool conjugate_symmetric_plan(const StealthInstance& inst, std::vector<int>& sigma) {
    if (inst.plan.mode != SamplingMode::UniformGrid) return false;
    const auto& w = inst.window;
    const double sx = std::abs(w.phi_min + w.phi_max);
    const double sy = std::abs(w.omega_min + w.omega_max);
    if (sx > 1e-12 * (std::abs(w.phi_min) + std::abs(w.phi_max) + 1e-300)) return false;
    if (sy > 1e-12 * (std::abs(w.omega_min) + std::abs(w.omega_max) + 1e-300)) return false;
    const int kx = inst.plan.k_x, ky = inst.plan.k_y;
    sigma.resize(static_cast<std::size_t>(kx) * ky);
    for (int ix = 0; ix < kx; ++ix)
        for (int iy = 0; iy < ky; ++iy)
            sigma[ix * ky + iy] = (kx - 1 - ix) * ky + (ky - 1 - iy);
    return true;
}

}  // namespace detail

// Full pipeline: build the Schur-complement dual, solve it with the interior
// point kernel, recover theta*, and recompute eta* as the exact sampled max
// so the reported objective is primal-feasible by construction.
inline StealthSolution solve_stealth(const StealthInstance& instance, double tol = 1e-7,
                                     const LmiOptions& lmi_opts = {}) {
    if (instance.num_samples() < 1 || instance.num_elements() < 1)
        throw std::invalid_argument("solve_stealth: need K >= 1 and N >= 1");
    const int k = instance.num_samples();
    const int n = instance.num_elements();

    // The dual data depends on tau_S only through |tau_S| (congruence by a
    // unit phase), so solve with the phase stripped; the recovery below
    // restores it. This makes phase covariance of the solution exact.
    StealthInstance canonical = instance;
    canonical.tau_s.value = std::abs(instance.tau_s.value);
    canonical.tau_s.phase = 0.0;

    const double mu_floor = default_mu_floor(instance.tau_s);
    P4Problem p4 = build_p4(canonical, mu_floor);
    LmiSolution lmi_sol = solve_lmi(p4.lmi, tol, lmi_opts);

    StealthSolution sol;
    sol.duals.lambda = lmi_sol.variables.segment(1, k);
    sol.duals.mu = lmi_sol.variables.segment(1 + k, n).array() + mu_floor;
    for (int i = 0; i < k; ++i) sol.duals.lambda[i] = std::max(sol.duals.lambda[i], 0.0);

    // Averaging dual weights over the conjugation symmetry of a symmetric
    // uniform plan preserves feasibility and cannot decrease the dual value.
    std::vector<int> sigma;
    if (detail::conjugate_symmetric_plan(instance, sigma)) {
        RealVector sym(k);
        for (int i = 0; i < k; ++i)
            sym[i] = 0.5 * (sol.duals.lambda[i] + sol.duals.lambda[sigma[i]]);
        sol.duals.lambda = sym;
    }
    sol.duals.lambda /= sol.duals.lambda.sum();

    const DualAssembly assembly = assemble_dual(sol.duals, canonical);
    sol.dual_objective = assembly.dual_value;

    // theta* = -tau_S conj(Q^-1 v): stationarity of the Lagrangian for the
    // u^T-form gain constraints. On conjugate-symmetric plans Q and v are
    // real and this coincides with -tau_S Q^-1 v.
    Eigen::LLT<ComplexMatrix> llt(assembly.q_matrix);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError("solve_stealth: Q singular at recovered duals");
    sol.theta_star.theta = -instance.tau_s.value * llt.solve(assembly.v).conjugate();

    // The finite dual accuracy can leave amplitudes a hair above one; scale
    // back onto the feasible set so eta* is attained by a feasible vector.
    double amp_max = 0.0;
    for (int i = 0; i < n; ++i)
        amp_max = std::max(amp_max, std::abs(sol.theta_star.theta[i]));
    if (amp_max > 1.0) sol.theta_star.theta /= amp_max;

    sol.sampled_gains = sampled_gains(sol.theta_star.theta, instance);
    sol.eta_star = sol.sampled_gains.maxCoeff();
    sol.duality_gap = sol.eta_star - sol.dual_objective;

    sol.kkt_residual = 0.0;
    for (int i = 0; i < k; ++i)
        sol.kkt_residual = std::max(
            sol.kkt_residual,
            sol.duals.lambda[i] * std::abs(sol.eta_star - sol.sampled_gains[i]));

    const double lambda_max = sol.duals.lambda.maxCoeff();
    for (int i = 0; i < k; ++i)
        if (sol.duals.lambda[i] > 1e-5 * lambda_max) sol.effective_samples.push_back(i);

    int saturated = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(sol.theta_star.theta[i]) > 0.99) saturated++;
    sol.stats.amplitude_saturation_fraction = static_cast<double>(saturated) / n;
    sol.stats.barrier_iterations = lmi_sol.barrier_iterations;
    sol.stats.certified_gap = lmi_sol.certified_gap;
    sol.stats.lmi_min_eigenvalue = lmi_sol.min_eigenvalue;
    sol.stats.equality_residual = lmi_sol.equality_residual;
    return sol;
}

// Step-size policies for the projected subgradient oracle.
struct StepSchedule {
    enum class Kind { InverseSqrt, GeometricEpochs, AdaptivePolyak };
    Kind kind = Kind::InverseSqrt;
    double c = 0.0;         // InverseSqrt: gamma_t = c / sqrt(t); 0 = default
    double gamma0 = 0.05;   // GeometricEpochs: initial step
    double decay = 0.75;    // GeometricEpochs: per-epoch multiplier
    int epoch_len = 4000;   // epoch length (GeometricEpochs, AdaptivePolyak)
};

struct PrimalResult {
    ReflectionVector theta;
    double eta = 0.0;
    int iterations_used = 0;
};

// Independent verification solver: projected subgradient on the sampled
// min-max objective. At each step the worst sample (smallest index on ties)
// contributes the gradient 2 r conj(u); entries are projected back onto the
// closed unit disk. Returns the best iterate seen.
inline PrimalResult primal_oracle(const StealthInstance& instance, int iterations,
                                  const StepSchedule& schedule = {}) {
    if (iterations < 1) throw std::invalid_argument("primal_oracle: iterations must be >= 1");
    const int k = instance.num_samples();
    const int n = instance.num_elements();
    const double tau_abs = std::abs(instance.tau_s.value);

    const double c_default = 0.1 * (1.0 + tau_abs) / n;
    const double c = schedule.c > 0.0 ? schedule.c : c_default;
    const int epoch_len = std::max(1, schedule.epoch_len);

    ComplexVector theta = ComplexVector::Zero(n);
    ComplexVector best_theta = theta;

    const auto objective_and_worst = [&](const ComplexVector& th, int& worst) {
        double f = -1.0;
        worst = 0;
        std::complex<double> r_worst = 0.0;
        for (int i = 0; i < k; ++i) {
            std::complex<double> acc = instance.tau_s.value;
            const ComplexVector& u = instance.u_vectors[i];
            for (Eigen::Index j = 0; j < n; ++j) acc += u[j] * th[j];
            const double g = std::norm(acc);
            if (g > f) {
                f = g;
                worst = i;
                r_worst = acc;
            }
        }
        return std::make_pair(f, r_worst);
    };

    int worst = 0;
    auto [f0, r0] = objective_and_worst(theta, worst);
    double f_best = f0;
    double f_cur = f0;
    std::complex<double> r_cur = r0;

    // Polyak target gap, halved whenever an epoch fails to realize half of it.
    double delta = std::max(0.25 * f_best, 1e-6);
    double epoch_start_best = f_best;
    int epoch_count = 0;

    int it = 1;
    for (; it <= iterations; ++it) {
        double gamma = 0.0;
        switch (schedule.kind) {
            case StepSchedule::Kind::InverseSqrt:
                gamma = c / std::sqrt(static_cast<double>(it));
                break;
            case StepSchedule::Kind::GeometricEpochs: {
                const int epoch = (it - 1) / epoch_len;
                gamma = schedule.gamma0 * std::pow(schedule.decay, epoch);
                break;
            }
            case StepSchedule::Kind::AdaptivePolyak: {
                const double grad_sq = 4.0 * std::norm(r_cur) * n;
                const double target = std::max(f_best - delta, 0.0);
                gamma = grad_sq > 0.0 ? (f_cur - target) / grad_sq : 0.0;
                if (++epoch_count >= epoch_len) {
                    if (epoch_start_best - f_best < 0.5 * delta) delta *= 0.5;
                    epoch_start_best = f_best;
                    epoch_count = 0;
                }
                break;
            }
        }

        const ComplexVector& u = instance.u_vectors[worst];
        for (Eigen::Index j = 0; j < n; ++j) {
            theta[j] -= gamma * 2.0 * r_cur * std::conj(u[j]);
            const double a = std::abs(theta[j]);
            if (a > 1.0) theta[j] /= a;
        }

        const auto [f_new, r_new] = objective_and_worst(theta, worst);
        f_cur = f_new;
        r_cur = r_new;
        if (f_cur < f_best) {
            f_best = f_cur;
            best_theta = theta;
        }
        if (f_best <= 1e-15) break;
    }

    PrimalResult res;
    res.theta.theta = best_theta;
    res.eta = f_best;
    res.iterations_used = std::min(it, iterations);
    return res;
}

inline ReflectionVector baseline_no_irs(const StealthInstance& instance) {
    ReflectionVector v;
    v.theta = ComplexVector::Zero(instance.num_elements());
    return v;
}

// Reverse alignment against the window-center steering vector: cancels the
// bare-surface return exactly at the center whenever N >= |tau_S|.
inline ReflectionVector baseline_single_point(const StealthInstance& instance) {
    const int n = instance.num_elements();
    const ComplexVector u0 = steering_of_sample({0.0, 0.0}, instance.geom);
    const double beta = std::min(1.0, std::abs(instance.tau_s.value) / n);
    const double tau_phase = std::arg(instance.tau_s.value);
    ReflectionVector v;
    v.theta.resize(n);
    for (int i = 0; i < n; ++i)
        v.theta[i] = std::polar(beta, std::numbers::pi + tau_phase - std::arg(u0[i]));
    return v;
}

inline ReflectionVector baseline_random_phase(const StealthInstance& instance,
                                              std::uint64_t seed) {
    SplitMix64 rng(seed);
    ReflectionVector v;
    v.theta.resize(instance.num_elements());
    for (int i = 0; i < instance.num_elements(); ++i)
        v.theta[i] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform01());
    return v;
}

}  // namespace irses
