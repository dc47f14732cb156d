#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "irses/errors.hpp"
#include "irses/geometry.hpp"

namespace irses {

inline bool is_hermitian(const ComplexMatrix& h, double tol = 1e-12) {
    if (h.rows() != h.cols()) return false;
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

// [[Re, -Im], [Im, Re]]: symmetric, eigenvalues of h each doubled, so
// h is PSD iff the embedding is PSD.
inline RealMatrix real_embed(const ComplexMatrix& h) {
    if (!is_hermitian(h))
        throw std::invalid_argument("real_embed: matrix is not Hermitian");
    const Eigen::Index n = h.rows();
    RealMatrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = h.real();
    out.topRightCorner(n, n) = -h.imag();
    out.bottomLeftCorner(n, n) = h.imag();
    out.bottomRightCorner(n, n) = h.real();
    // Clean the embedding to exact symmetry so Cholesky sees a symmetric input.
    out = ((out + out.transpose()) * 0.5).eval();
    return out;
}

// maximize objective^T z
//   s.t.  f[0] + sum_i z_i f[i+1]  >= 0   (one Hermitian LMI block)
//         eq_lhs z = eq_rhs
//         z_i >= 0 for i in nonneg
struct LmiProblem {
    int num_vars = 0;
    RealVector objective;
    std::vector<ComplexMatrix> f;  // size num_vars + 1; f[0] is the constant block
    RealMatrix eq_lhs;             // may have zero rows
    RealVector eq_rhs;
    std::vector<int> nonneg;
    RealVector initial_point;      // optional strictly feasible hint (empty = run phase-I)

    void validate() const {
        if (num_vars < 1) throw std::invalid_argument("LmiProblem: no variables");
        if (objective.size() != num_vars)
            throw std::invalid_argument("LmiProblem: objective size mismatch");
        if (static_cast<int>(f.size()) != num_vars + 1)
            throw std::invalid_argument("LmiProblem: need num_vars + 1 coefficient matrices");
        const Eigen::Index n = f[0].rows();
        for (const auto& fi : f)
            if (fi.rows() != n || fi.cols() != n || !is_hermitian(fi))
                throw std::invalid_argument("LmiProblem: coefficients must be Hermitian of equal size");
        if (eq_lhs.rows() > 0 && eq_lhs.cols() != num_vars)
            throw std::invalid_argument("LmiProblem: equality system shape mismatch");
        if (eq_lhs.rows() != eq_rhs.size())
            throw std::invalid_argument("LmiProblem: equality rhs size mismatch");
        for (int i : nonneg)
            if (i < 0 || i >= num_vars)
                throw std::invalid_argument("LmiProblem: nonneg index out of range");
    }
};

struct LmiOptions {
    int max_newton_iters = 600;
    double t_init = 1.0;
    double mu_init = 10.0;  // outer path multiplier, adapted between centerings
    bool verbose = false;
    std::ostream* trace = nullptr;
};

struct LmiSolution {
    RealVector variables;
    double objective = 0.0;
    int barrier_iterations = 0;
    double min_eigenvalue = 0.0;       // of the complex LMI block at the solution
    double equality_residual = 0.0;    // inf-norm of eq_lhs z - eq_rhs
    double stationarity_residual = 0.0;
    double certified_gap = 0.0;        // barrier bound nu / t at exit
};

namespace detail {

// The interior-point iteration runs in extended precision: the barrier
// Hessian condition number grows like the squared inverse of the distance
// to the boundary and exceeds what double can represent long before the
// target gap is reached. On x86 this buys roughly 3.5 extra digits.
using Work = long double;
using WorkMatrix = Eigen::Matrix<Work, Eigen::Dynamic, Eigen::Dynamic>;
using WorkVector = Eigen::Matrix<Work, Eigen::Dynamic, 1>;

// Real-embedded problem data in working precision.
struct EmbeddedLmi {
    int p = 0;
    WorkVector c;
    std::vector<WorkMatrix> coeff;  // size p + 1
    WorkMatrix A;
    WorkVector b;
    std::vector<char> is_nonneg;

    WorkMatrix lmi_at(const WorkVector& z) const {
        WorkMatrix m = coeff[0];
        for (int i = 0; i < p; ++i) m.noalias() += z[i] * coeff[i + 1];
        return m;
    }

    // Same equilibrated test the derivative evaluation uses, so the
    // feasibility predicate and the Newton machinery agree near the boundary.
    bool strictly_feasible_cone(const WorkVector& z) const {
        for (int i = 0; i < p; ++i)
            if (is_nonneg[i] && !(z[i] > 0.0)) return false;
        const WorkMatrix f = lmi_at(z);
        const Eigen::Index m = f.rows();
        WorkVector d(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!(f(i, i) > 0.0)) return false;
            d[i] = 1.0L / std::sqrt(f(i, i));
        }
        Eigen::LLT<WorkMatrix> llt(WorkMatrix(d.asDiagonal() * f * d.asDiagonal()));
        return llt.info() == Eigen::Success;
    }

    int nonneg_count() const {
        int k = 0;
        for (char c0 : is_nonneg) k += c0 != 0;
        return k;
    }
};

struct CenterState {
    WorkVector z;
    WorkVector w;  // equality multipliers
    int newton_steps = 0;
    Work exit_decrement_sq = 0.0;  // Newton decrement^2 at the accepted exit point
};

// Barrier value; +inf outside the domain.
inline Work barrier_value(const EmbeddedLmi& e, const WorkVector& z, Work t) {
    for (int i = 0; i < e.p; ++i)
        if (e.is_nonneg[i] && !(z[i] > 0.0)) return std::numeric_limits<Work>::infinity();
    Eigen::LLT<WorkMatrix> llt(e.lmi_at(z));
    if (llt.info() != Eigen::Success) return std::numeric_limits<Work>::infinity();
    Work logdet = 0.0;
    for (Eigen::Index i = 0; i < llt.matrixL().rows(); ++i)
        logdet += 2.0L * std::log(llt.matrixL()(i, i));
    Work val = -t * e.c.dot(z) - logdet;
    for (int i = 0; i < e.p; ++i)
        if (e.is_nonneg[i]) val -= std::log(z[i]);
    return val;
}

// Gradient and Hessian of the barrier-augmented objective at z.
// grad_i = -t c_i - tr(F^-1 F_i) - [i nonneg]/z_i
// hess_ij = tr(F^-1 F_i F^-1 F_j) + [i=j nonneg]/z_i^2
// The traces are invariant under the congruence F -> D F D, so they are
// computed on a diagonally equilibrated copy, which keeps the Cholesky
// accurate when the block mixes scales across many orders of magnitude.
inline bool barrier_derivatives(const EmbeddedLmi& e, const WorkVector& z, Work t,
                                WorkVector& grad, WorkMatrix& hess) {
    const WorkMatrix f = e.lmi_at(z);
    const Eigen::Index m = f.rows();
    WorkVector d(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(f(i, i) > 0.0)) return false;
        d[i] = 1.0L / std::sqrt(f(i, i));
    }
    const WorkMatrix f_scaled = d.asDiagonal() * f * d.asDiagonal();
    Eigen::LLT<WorkMatrix> llt(f_scaled);
    if (llt.info() != Eigen::Success) return false;

    // U_i = L^-1 (D F_i D) L^-T are symmetric; tr(F^-1 F_i) = tr(U_i) and
    // tr(F^-1 F_i F^-1 F_j) = <U_i, U_j>_F, so the Hessian is one Gram matrix.
    WorkMatrix u_flat(m * m, e.p);
    grad = -t * e.c;
    for (int i = 0; i < e.p; ++i) {
        const WorkMatrix fi_scaled = d.asDiagonal() * e.coeff[i + 1] * d.asDiagonal();
        WorkMatrix u = llt.matrixL().solve(fi_scaled);
        u = llt.matrixL().solve(u.transpose()).eval();
        grad[i] -= u.trace();
        u_flat.col(i) = Eigen::Map<const WorkVector>(u.data(), m * m);
    }
    hess.noalias() = u_flat.transpose() * u_flat;
    for (int i = 0; i < e.p; ++i) {
        if (e.is_nonneg[i]) {
            grad[i] -= 1.0L / z[i];
            hess(i, i) += 1.0L / (z[i] * z[i]);
        }
    }
    return true;
}

// Solves with a Jacobi-equilibrated Hessian.
struct HessianSolver {
    Eigen::LLT<WorkMatrix> llt;
    WorkVector scale;

    bool compute(const WorkMatrix& hess) {
        const int p = static_cast<int>(hess.rows());
        scale.resize(p);
        for (int i = 0; i < p; ++i)
            scale[i] = hess(i, i) > 0.0 ? 1.0L / std::sqrt(hess(i, i)) : 1.0L;
        WorkMatrix h = scale.asDiagonal() * hess * scale.asDiagonal();
        llt.compute(h);
        if (llt.info() != Eigen::Success) {
            h.diagonal().array() += 1e-16L;
            llt.compute(h);
        }
        return llt.info() == Eigen::Success;
    }

    WorkVector solve(const WorkVector& rhs) const {
        return scale.asDiagonal() * WorkVector(llt.solve(scale.asDiagonal() * rhs));
    }
    WorkMatrix solve(const WorkMatrix& rhs) const {
        return scale.asDiagonal() * WorkMatrix(llt.solve(scale.asDiagonal() * rhs));
    }
};

// Block elimination of [H A^T; A 0][dz; w+] = [-grad; -(Az-b)]:
//   (A H^-1 A^T) w+ = (Az-b) - A H^-1 grad,  dz = -H^-1 (grad + A^T w+).
inline bool newton_direction(const EmbeddedLmi& e, const WorkMatrix& hess,
                             const WorkVector& grad, const WorkVector& z,
                             WorkVector& dz, WorkVector& w_new) {
    HessianSolver hs;
    if (!hs.compute(hess)) return false;
    if (e.A.rows() == 0) {
        dz = hs.solve(WorkVector(-grad));
        w_new.resize(0);
        return true;
    }
    const WorkVector r_pri = e.A * z - e.b;
    const WorkMatrix hinv_at = hs.solve(WorkMatrix(e.A.transpose()));
    const WorkVector hinv_g = hs.solve(grad);
    const WorkMatrix schur = e.A * hinv_at;
    Eigen::LDLT<WorkMatrix> sl(schur);
    w_new = sl.solve(r_pri - e.A * hinv_g);
    dz = -hs.solve(WorkVector(grad + e.A.transpose() * w_new));
    return true;
}

inline Work residual_norm(const EmbeddedLmi& e, const WorkVector& z, const WorkVector& w,
                          Work t) {
    WorkVector g(e.p);
    {
        const WorkMatrix f = e.lmi_at(z);
        const Eigen::Index m = f.rows();
        WorkVector d(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!(f(i, i) > 0.0)) return std::numeric_limits<Work>::infinity();
            d[i] = 1.0L / std::sqrt(f(i, i));
        }
        Eigen::LLT<WorkMatrix> llt(WorkMatrix(d.asDiagonal() * f * d.asDiagonal()));
        if (llt.info() != Eigen::Success) return std::numeric_limits<Work>::infinity();
        g = -t * e.c;
        for (int i = 0; i < e.p; ++i) {
            const WorkMatrix fi = d.asDiagonal() * e.coeff[i + 1] * d.asDiagonal();
            WorkMatrix u = llt.matrixL().solve(fi);
            u = llt.matrixL().solve(u.transpose()).eval();
            g[i] -= u.trace();
            if (e.is_nonneg[i]) g[i] -= 1.0L / z[i];
        }
    }
    Work r = 0.0;
    if (e.A.rows() > 0) {
        r += (g + e.A.transpose() * w).squaredNorm();
        r += (e.A * z - e.b).squaredNorm();
    } else {
        r += g.squaredNorm();
    }
    return std::sqrt(r);
}

// Center at fixed t. Armijo on the barrier value while the equalities hold,
// residual-norm backtracking otherwise. Once the predicted decrease falls
// below what the function value can resolve, the raw (damped) Newton step
// is taken directly: decrease is guaranteed for a self-concordant barrier
// even when it is not measurable.
inline bool center(const EmbeddedLmi& e, Work t, CenterState& state, int max_steps,
                   int& steps_used, std::ostream* trace, Work tol_decrement) {
    const Work eq_scale = e.b.size() > 0 ? 1.0L + e.b.cwiseAbs().maxCoeff() : 1.0L;
    Work best_decrement = std::numeric_limits<Work>::infinity();
    int plateau_count = 0;

    // Block elimination re-injects equality drift of order eps*cond(H) per
    // step; project it out so the centering stays on the manifold.
    Eigen::LDLT<WorkMatrix> aat;
    if (e.A.rows() > 0) aat.compute(e.A * e.A.transpose());
    const auto project_equalities = [&](WorkVector& z) {
        if (e.A.rows() == 0) return;
        const WorkVector r = e.A * z - e.b;
        if (!(r.cwiseAbs().maxCoeff() > 0.0)) return;
        WorkVector corrected = z - e.A.transpose() * aat.solve(r);
        for (int i = 0; i < e.p; ++i)
            if (e.is_nonneg[i] && !(corrected[i] > 0.0)) return;  // keep drift instead
        if (e.strictly_feasible_cone(corrected)) z = std::move(corrected);
    };

    CenterState best = state;
    const auto fall_back_to_best = [&](int it) {
        if (!(best_decrement <= 1e-3L)) return false;
        best.newton_steps = state.newton_steps;
        state = best;
        steps_used = it;
        return true;
    };
    for (int it = 0; it < max_steps; ++it) {
        WorkVector grad;
        WorkMatrix hess;
        if (!barrier_derivatives(e, state.z, t, grad, hess)) return fall_back_to_best(it);
        WorkVector dz, w_new;
        if (!newton_direction(e, hess, grad, state.z, dz, w_new))
            return fall_back_to_best(it);

        const bool primal_feasible =
            e.A.rows() == 0 ||
            (e.A * state.z - e.b).cwiseAbs().maxCoeff() <= 1e-14L * eq_scale;
        const Work decrement_sq = dz.dot(hess * dz);

        if (primal_feasible && decrement_sq <= tol_decrement) {
            state.w = w_new;
            steps_used = it;
            return true;
        }
        // Numerical floor: the decrement can bottom out above the threshold
        // or jump when the direction degenerates; keep the best iterate and
        // certify from it (a plateau decrement <= 1e-3 is immaterial next
        // to nu/t).
        if (decrement_sq < 0.5L * best_decrement) {
            best_decrement = decrement_sq;
            best.z = state.z;
            best.w = w_new;
            plateau_count = 0;
        } else if (primal_feasible &&
                   (++plateau_count >= 4 ||
                    (decrement_sq > 4.0L * best_decrement && best_decrement < 0.0625L))) {
            best.newton_steps = state.newton_steps;
            state = best;
            steps_used = it;
            return best_decrement <= 1e-3L;
        }

        // Keep nonnegative variables strictly inside the cone.
        Work alpha = 1.0;
        for (int i = 0; i < e.p; ++i)
            if (e.is_nonneg[i] && dz[i] < 0.0)
                alpha = std::min(alpha, -0.99L * state.z[i] / dz[i]);

        Work step = alpha;
        bool accepted = false;
        if (primal_feasible) {
            const Work lambda_newton = std::sqrt(std::max(decrement_sq, Work(0)));
            const Work f0 = barrier_value(e, state.z, t);
            const bool unmeasurable =
                0.5L * decrement_sq <= 1e-16L * (1.0L + std::abs(f0));
            if (lambda_newton <= 0.25L || unmeasurable) {
                step = std::min(alpha, Work(1));
                if (lambda_newton > 0.25L)
                    step = std::min(step, 1.0L / (1.0L + lambda_newton));
                for (int ls = 0; ls < 60 && step > 0.0L; ++ls) {
                    WorkVector zn = state.z + step * dz;
                    if (e.strictly_feasible_cone(zn)) {
                        state.z = std::move(zn);
                        state.w = w_new;
                        accepted = true;
                        break;
                    }
                    step *= 0.5L;
                }
            } else {
                const Work slope = grad.dot(dz);
                for (int ls = 0; ls < 24; ++ls) {
                    WorkVector zn = state.z + step * dz;
                    const Work fn = barrier_value(e, zn, t);
                    if (fn <= f0 + 0.25L * step * slope) {
                        state.z = std::move(zn);
                        state.w = w_new;
                        accepted = true;
                        break;
                    }
                    step *= 0.5L;
                }
                if (!accepted) {
                    // Damped self-concordant step.
                    step = std::min(alpha, 1.0L / (1.0L + lambda_newton));
                    for (int ls = 0; ls < 60 && step > 0.0L; ++ls) {
                        WorkVector zn = state.z + step * dz;
                        if (e.strictly_feasible_cone(zn)) {
                            state.z = std::move(zn);
                            state.w = w_new;
                            accepted = true;
                            break;
                        }
                        step *= 0.5L;
                    }
                }
            }
        } else {
            const WorkVector dw = state.w.size() == w_new.size()
                                      ? WorkVector(w_new - state.w)
                                      : w_new;
            const Work r0 = residual_norm(e, state.z, state.w, t);
            for (int ls = 0; ls < 40 && step > 1e-14L; ++ls) {
                WorkVector zn = state.z + step * dz;
                WorkVector wn = state.w.size() == w_new.size()
                                    ? WorkVector(state.w + step * dw)
                                    : w_new;
                if (e.strictly_feasible_cone(zn) &&
                    residual_norm(e, zn, wn, t) <= (1.0L - 0.25L * step) * r0) {
                    state.z = std::move(zn);
                    state.w = std::move(wn);
                    accepted = true;
                    break;
                }
                step *= 0.5L;
            }
        }
        if (accepted) project_equalities(state.z);
        state.newton_steps++;
        if (trace)
            (*trace) << "lmi: t=" << static_cast<double>(t)
                     << " newton=" << state.newton_steps
                     << " decrement2=" << static_cast<double>(decrement_sq)
                     << " step=" << static_cast<double>(step) << "\n";
        if (!accepted) {
            steps_used = it + 1;
            return decrement_sq <= 1e-8L;
        }
    }
    steps_used = max_steps;
    return false;
}

struct PathResult {
    CenterState state;
    Work t_final = 0.0;
    bool converged = false;
};

// Long-step path following; early_stop allows phase-I to quit as soon as
// strict feasibility is proven.
template <typename EarlyStop>
inline PathResult follow_path(const EmbeddedLmi& e, const WorkVector& z0, Work tol,
                              const LmiOptions& opts, EarlyStop early_stop) {
    const Work nu =
        static_cast<Work>(e.coeff[0].rows()) + static_cast<Work>(e.nonneg_count());
    CenterState state;
    state.z = z0;
    state.w = WorkVector::Zero(e.A.rows());

    Work t = opts.t_init;
    Work mu = opts.mu_init;
    PathResult out;
    while (state.newton_steps < opts.max_newton_iters) {
        int used = 0;
        // Loose centering along the path (lambda <= 0.05 inflates the gap
        // certificate by under two percent); a tight polish runs at the end.
        const bool last_stage = nu / t <= tol;
        const Work tol_decrement = last_stage ? 1e-10L : 2.5e-3L;
        if (!center(e, t, state, opts.max_newton_iters - state.newton_steps, used,
                    opts.trace, tol_decrement)) {
            out.state = state;
            out.t_final = t;
            out.converged = false;
            return out;
        }
        if (early_stop(state.z)) {
            out.state = state;
            out.t_final = t;
            out.converged = true;
            return out;
        }
        if (last_stage) {
            out.state = state;
            out.t_final = t;
            out.converged = true;
            return out;
        }
        // Adapt the path multiplier to the observed centering cost; never
        // push t far beyond the value the target gap requires.
        if (used <= 4)
            mu = std::min(mu * 1.5L, Work(50));
        else if (used > 12)
            mu = std::max(mu * 0.5L, Work(2));
        t = std::min(t * mu, Work(1.05) * nu / tol);
    }
    out.state = state;
    out.t_final = t;
    out.converged = false;
    return out;
}

inline EmbeddedLmi embed_problem(const LmiProblem& problem) {
    EmbeddedLmi e;
    e.p = problem.num_vars;
    e.c = problem.objective.cast<Work>();
    e.coeff.reserve(problem.f.size());
    for (const auto& fi : problem.f) e.coeff.push_back(real_embed(fi).cast<Work>());
    e.A = problem.eq_lhs.cast<Work>();
    e.b = problem.eq_rhs.cast<Work>();
    e.is_nonneg.assign(e.p, 0);
    for (int i : problem.nonneg) e.is_nonneg[i] = 1;
    return e;
}

// Phase-I: maximize -s subject to F(z) + s I >= 0. Any point with s < 0
// is strictly feasible for the original LMI.
inline WorkVector phase_one(const EmbeddedLmi& e, const LmiOptions& opts) {
    EmbeddedLmi aug;
    aug.p = e.p + 1;
    aug.c = WorkVector::Zero(aug.p);
    aug.c[e.p] = -1.0;
    aug.coeff = e.coeff;
    aug.coeff.push_back(WorkMatrix::Identity(e.coeff[0].rows(), e.coeff[0].cols()));
    aug.A.resize(e.A.rows(), aug.p);
    if (e.A.rows() > 0) {
        aug.A.leftCols(e.p) = e.A;
        aug.A.col(e.p).setZero();
    }
    aug.b = e.b;
    aug.is_nonneg = e.is_nonneg;
    aug.is_nonneg.push_back(0);

    WorkVector z0 = WorkVector::Zero(aug.p);
    for (int i = 0; i < e.p; ++i)
        if (e.is_nonneg[i]) z0[i] = 1.0;
    WorkMatrix f0 = e.lmi_at(z0.head(e.p));
    Eigen::SelfAdjointEigenSolver<WorkMatrix> es(f0);
    const Work scale = 1.0L + f0.cwiseAbs().maxCoeff();
    z0[e.p] = std::max(Work(0), -es.eigenvalues().minCoeff()) + 0.1L * scale;

    const Work margin = 1e-9L * scale;
    PathResult res = follow_path(aug, z0, 1e-8L * scale, opts,
                                 [&](const WorkVector& z) { return z[e.p] < -margin; });
    if (res.state.z[e.p] < -margin) return res.state.z.head(e.p);
    if (!res.converged)
        throw NonConvergenceError("solve_lmi: phase-I did not converge",
                                  static_cast<double>(res.state.z[e.p]));

    // Certify: the most violated direction at the best point found.
    WorkMatrix f = e.lmi_at(res.state.z.head(e.p));
    Eigen::SelfAdjointEigenSolver<WorkMatrix> esf(f);
    WorkVector dir = esf.eigenvectors().col(0);
    std::vector<double> cert;
    cert.reserve(dir.size());
    for (Eigen::Index i = 0; i < dir.size(); ++i)
        cert.push_back(static_cast<double>(dir[i]));
    throw InfeasibleProblemError("solve_lmi: no strictly feasible point found (phase-I)",
                                 static_cast<double>(res.state.z[e.p]), cert);
}

}  // namespace detail

inline LmiSolution solve_lmi(const LmiProblem& problem, double tol,
                             const LmiOptions& opts = {}) {
    problem.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("solve_lmi: tol must be positive");
    detail::EmbeddedLmi e = detail::embed_problem(problem);

    detail::WorkVector z0;
    if (problem.initial_point.size() > 0) {
        if (problem.initial_point.size() != problem.num_vars)
            throw std::invalid_argument("solve_lmi: initial point size mismatch");
        z0 = problem.initial_point.cast<detail::Work>();
        if (!e.strictly_feasible_cone(z0))
            throw std::invalid_argument("solve_lmi: initial point is not strictly feasible");
    } else {
        z0 = detail::phase_one(e, opts);
    }

    // Run to half the requested gap so the certified bound dominates the
    // residual centering error.
    detail::PathResult res = detail::follow_path(
        e, z0, 0.5L * static_cast<detail::Work>(tol), opts,
        [](const detail::WorkVector&) { return false; });

    LmiSolution sol;
    sol.variables = res.state.z.cast<double>();
    sol.objective = problem.objective.dot(sol.variables);
    sol.barrier_iterations = res.state.newton_steps;
    const double nu = static_cast<double>(e.coeff[0].rows()) +
                      static_cast<double>(e.nonneg_count());
    sol.certified_gap = nu / static_cast<double>(res.t_final);

    ComplexMatrix f = problem.f[0];
    for (int i = 0; i < problem.num_vars; ++i) f += sol.variables[i] * problem.f[i + 1];
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(f);
    sol.min_eigenvalue = es.eigenvalues().minCoeff();

    sol.equality_residual =
        e.A.rows() > 0
            ? static_cast<double>((e.A * res.state.z - e.b).cwiseAbs().maxCoeff())
            : 0.0;
    sol.stationarity_residual = static_cast<double>(
        detail::residual_norm(e, res.state.z, res.state.w, res.t_final) / res.t_final);

    if (!res.converged) {
        std::vector<double> best(sol.variables.data(),
                                 sol.variables.data() + sol.variables.size());
        throw NonConvergenceError("solve_lmi: Newton iteration budget exhausted",
                                  sol.certified_gap, best);
    }
    return sol;
}

}  // namespace irses
