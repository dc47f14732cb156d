#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <complex>
#include <sstream>

#include "irses/lmi.hpp"
#include "irses/rng.hpp"

using namespace irses;
using Catch::Approx;

namespace {

ComplexMatrix cscalar(double v) {
    ComplexMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

ComplexMatrix cdiag(std::initializer_list<double> values) {
    const int n = static_cast<int>(values.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    int i = 0;
    for (double v : values) m(i, i) = v, ++i;
    return m;
}

// max c^T z over { z >= 0 : d_j + sum_i z_i g_ij >= 0 } by enumerating all
// vertices (pairs of active constraints, including the axes). p = 2 only.
double lp_vertex_oracle(const RealVector& c, const RealVector& d, const RealMatrix& g) {
    const int rows = static_cast<int>(d.size());
    std::vector<Eigen::Vector2d> candidates;
    std::vector<Eigen::Vector3d> lines;  // a x + b y + e = 0 boundaries
    for (int j = 0; j < rows; ++j) lines.push_back({g(j, 0), g(j, 1), d[j]});
    lines.push_back({1, 0, 0});
    lines.push_back({0, 1, 0});
    for (std::size_t a = 0; a < lines.size(); ++a) {
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
            Eigen::Matrix2d m;
            m << lines[a][0], lines[a][1], lines[b][0], lines[b][1];
            if (std::abs(m.determinant()) < 1e-12) continue;
            const Eigen::Vector2d rhs(-lines[a][2], -lines[b][2]);
            candidates.push_back(m.colPivHouseholderQr().solve(rhs));
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : candidates) {
        if (z[0] < -1e-9 || z[1] < -1e-9) continue;
        bool ok = true;
        for (int j = 0; j < rows; ++j)
            ok = ok && d[j] + g(j, 0) * z[0] + g(j, 1) * z[1] >= -1e-9;
        if (ok) best = std::max(best, c[0] * z[0] + c[1] * z[1]);
    }
    return best;
}

}  // namespace

TEST_CASE("real_embed structure") {
    const RealMatrix e = real_embed(cscalar(2.0));
    REQUIRE(e.rows() == 2);
    CHECK(e(0, 0) == 2.0);
    CHECK(e(1, 1) == 2.0);
    CHECK(e(0, 1) == 0.0);

    ComplexMatrix pauli(2, 2);
    pauli << std::complex<double>(0, 0), std::complex<double>(0, 1),
        std::complex<double>(0, -1), std::complex<double>(0, 0);
    const RealMatrix ep = real_embed(pauli);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(ep);
    REQUIRE(es.eigenvalues().size() == 4);
    CHECK(es.eigenvalues()[0] == Approx(-1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()[1] == Approx(-1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()[2] == Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()[3] == Approx(1.0).epsilon(1e-12));

    // Linearity.
    ComplexMatrix h1(2, 2), h2(2, 2);
    h1 << 1.0, std::complex<double>(0.5, -0.25), std::complex<double>(0.5, 0.25), 2.0;
    h2 << -0.3, std::complex<double>(0, 1.5), std::complex<double>(0, -1.5), 0.7;
    CHECK((real_embed(h1 + h2) - (real_embed(h1) + real_embed(h2))).norm() < 1e-14);

    ComplexMatrix bad(2, 2);
    bad << 1.0, 2.0, 3.0, 4.0;
    CHECK_THROWS_AS(real_embed(bad), std::invalid_argument);
}

TEST_CASE("solve_lmi scalar and diagonal bounds") {
    LmiProblem scalar;
    scalar.num_vars = 1;
    scalar.objective = RealVector::Constant(1, 1.0);
    scalar.f = {cscalar(1.0), cscalar(-1.0)};  // 1 - q >= 0
    const LmiSolution s = solve_lmi(scalar, 1e-8);
    CHECK(s.objective == Approx(1.0).margin(1e-6));
    CHECK(s.min_eigenvalue >= -1e-8);

    LmiProblem diag;
    diag.num_vars = 1;
    diag.objective = RealVector::Constant(1, 1.0);
    diag.f = {cdiag({3.0, 5.0}), cdiag({-1.0, -1.0})};
    const LmiSolution d = solve_lmi(diag, 1e-8);
    CHECK(d.objective == Approx(3.0).margin(1e-6));
}

TEST_CASE("solve_lmi reaches the smallest eigenvalue of 2x2 blocks") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = 4 * rng.uniform01() - 2;
        const double b = 4 * rng.uniform01() - 2;
        const double c = 4 * rng.uniform01() - 2;
        ComplexMatrix m(2, 2);
        m << a, b, b, c;
        LmiProblem prob;
        prob.num_vars = 1;
        prob.objective = RealVector::Constant(1, 1.0);
        prob.f = {m, cdiag({-1.0, -1.0})};
        const double lambda_min = 0.5 * ((a + c) - std::hypot(a - c, 2 * b));
        const LmiSolution s = solve_lmi(prob, 1e-9);
        REQUIRE(s.objective == Approx(lambda_min).margin(1e-6));
    }
}

TEST_CASE("solve_lmi agrees with LP vertex enumeration on diagonal problems") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        const int rows = 3 + static_cast<int>(rng.next() % 3);
        RealVector c(2), d(rows);
        RealMatrix g(rows, 2);
        c << 0.2 + rng.uniform01(), 0.2 + rng.uniform01();
        for (int j = 0; j < rows; ++j) {
            d[j] = 1.0 + 2.0 * rng.uniform01();
            g(j, 0) = -0.1 - 2.0 * rng.uniform01();
            g(j, 1) = -0.1 - 2.0 * rng.uniform01();
        }
        LmiProblem prob;
        prob.num_vars = 2;
        prob.objective = c;
        ComplexMatrix f0 = ComplexMatrix::Zero(rows, rows);
        ComplexMatrix f1 = ComplexMatrix::Zero(rows, rows);
        ComplexMatrix f2 = ComplexMatrix::Zero(rows, rows);
        for (int j = 0; j < rows; ++j) {
            f0(j, j) = d[j];
            f1(j, j) = g(j, 0);
            f2(j, j) = g(j, 1);
        }
        prob.f = {f0, f1, f2};
        prob.nonneg = {0, 1};
        const double want = lp_vertex_oracle(c, d, g);
        const LmiSolution s = solve_lmi(prob, 1e-9);
        REQUIRE(s.objective == Approx(want).margin(1e-6));
    }
}

TEST_CASE("solve_lmi handles equality constraints") {
    // max z0 + z1 subject to z0 + z1 <= 4 (diagonal), z0 - z1 = 1, z >= 0.
    LmiProblem prob;
    prob.num_vars = 2;
    prob.objective = RealVector::Ones(2);
    prob.f = {cscalar(4.0), cscalar(-1.0), cscalar(-1.0)};
    prob.eq_lhs = RealMatrix(1, 2);
    prob.eq_lhs << 1.0, -1.0;
    prob.eq_rhs = RealVector::Constant(1, 1.0);
    prob.nonneg = {0, 1};
    const LmiSolution s = solve_lmi(prob, 1e-9);
    CHECK(s.objective == Approx(4.0).margin(1e-6));
    CHECK(s.variables[0] == Approx(2.5).margin(1e-5));
    CHECK(s.variables[1] == Approx(1.5).margin(1e-5));
    CHECK(s.equality_residual <= 1e-8);
}

TEST_CASE("solve_lmi detects infeasibility with a certificate") {
    // Needs q <= -1 and q >= 1 simultaneously.
    LmiProblem prob;
    prob.num_vars = 1;
    prob.objective = RealVector::Constant(1, 1.0);
    ComplexMatrix f0 = cdiag({-1.0, -1.0});
    ComplexMatrix f1 = cdiag({-1.0, 1.0});
    prob.f = {f0, f1};
    try {
        solve_lmi(prob, 1e-8);
        FAIL("expected infeasibility");
    } catch (const InfeasibleProblemError& e) {
        CHECK(e.infeasibility > 0.1);
        CHECK_FALSE(e.certificate.empty());
    }
}

TEST_CASE("solve_lmi respects residual invariants post-hoc") {
    LmiProblem prob;
    prob.num_vars = 2;
    prob.objective = RealVector::Ones(2);
    ComplexMatrix f0(2, 2), f1(2, 2), f2(2, 2);
    f0 << 5.0, std::complex<double>(0.2, 0.1), std::complex<double>(0.2, -0.1), 4.0;
    f1 << -1.0, std::complex<double>(0.1, 0.05), std::complex<double>(0.1, -0.05), 0.0;
    f2 << 0.0, 0.0, 0.0, -1.0;
    prob.f = {f0, f1, f2};
    prob.nonneg = {0, 1};
    const LmiSolution s = solve_lmi(prob, 1e-8);

    ComplexMatrix at = f0 + s.variables[0] * f1 + s.variables[1] * f2;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(at);
    const double scale = at.cwiseAbs().maxCoeff();
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * scale);
    CHECK(es.eigenvalues().minCoeff() == Approx(s.min_eigenvalue).margin(1e-10));
}

TEST_CASE("tightening the tolerance does not lose certified objective") {
    LmiProblem prob;
    prob.num_vars = 1;
    prob.objective = RealVector::Constant(1, 1.0);
    prob.f = {cdiag({2.0, 7.0}), cdiag({-1.0, -1.0})};
    const double loose = solve_lmi(prob, 1e-4).objective;
    const double tight = solve_lmi(prob, 1e-9).objective;
    CHECK(tight >= loose - 1e-4);
}

TEST_CASE("solve_lmi is deterministic and traces when asked") {
    LmiProblem prob;
    prob.num_vars = 1;
    prob.objective = RealVector::Constant(1, 1.0);
    prob.f = {cdiag({3.0, 5.0}), cdiag({-1.0, -1.0})};
    const LmiSolution a = solve_lmi(prob, 1e-8);
    const LmiSolution b = solve_lmi(prob, 1e-8);
    CHECK(a.variables[0] == b.variables[0]);
    CHECK(a.barrier_iterations == b.barrier_iterations);

    std::ostringstream trace;
    LmiOptions opts;
    opts.trace = &trace;
    (void)solve_lmi(prob, 1e-8, opts);
    CHECK_FALSE(trace.str().empty());
}
