#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "irses/geometry.hpp"

namespace irses {

// Isotropic complex target RCS: tau = (4*pi*S^2/lambda^2) * exp(j*xi).
struct TargetRcs {
    double magnitude = 0.0;
    double phase = 0.0;
    std::complex<double> value;
    double surface_area = 0.0;
};

inline TargetRcs make_target_rcs(double surface_area, double lambda, double xi = 0.0) {
    if (!(surface_area >= 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("make_target_rcs: need surface_area >= 0 and lambda > 0");
    TargetRcs rcs;
    rcs.surface_area = surface_area;
    rcs.magnitude = 4.0 * std::numbers::pi * surface_area * surface_area / (lambda * lambda);
    rcs.phase = xi;
    rcs.value = std::polar(rcs.magnitude, xi);
    return rcs;
}

enum class SamplingMode { UniformGrid, Custom };

// Discretization of an angular window into K = k_x * k_y deviation pairs,
// x-major: point index k = i_x * k_y + i_y.
struct SamplingPlan {
    int k_x = 1;
    int k_y = 1;
    std::vector<SpatialFrequencyPair> points;
    SamplingMode mode = SamplingMode::UniformGrid;

    int size() const { return static_cast<int>(points.size()); }
};

inline SamplingPlan make_custom_plan(std::vector<SpatialFrequencyPair> points) {
    if (points.empty()) throw std::invalid_argument("make_custom_plan: no points");
    SamplingPlan plan;
    plan.k_x = static_cast<int>(points.size());
    plan.k_y = 1;
    plan.points = std::move(points);
    plan.mode = SamplingMode::Custom;
    return plan;
}

// Per-element reflection coefficients; amplitudes constrained to the unit disk.
struct ReflectionVector {
    ComplexVector theta;

    bool feasible(double tol = 1e-9) const {
        for (Eigen::Index n = 0; n < theta.size(); ++n)
            if (std::abs(theta[n]) > 1.0 + tol) return false;
        return true;
    }
};

namespace detail {

inline std::vector<double> axis_samples(double lo, double hi, int count) {
    const double width = hi - lo;
    if (count == 1) return {lo + width / 2.0};
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo + static_cast<double>(i) * width / (count - 1);
    return out;
}

}  // namespace detail

// Uniform tensor grid over the window; endpoints included whenever a
// dimension has at least two samples, a single sample sits at the midpoint.
inline SamplingPlan sample_window(const AngularWindow& window, int k_x, int k_y) {
    if (k_x < 1 || k_y < 1)
        throw std::invalid_argument("sample_window: counts must be >= 1");
    if (k_x >= 2 && window.phi_width() == 0.0)
        throw std::invalid_argument("sample_window: k_x >= 2 on a zero-width phi dimension");
    if (k_y >= 2 && window.omega_width() == 0.0)
        throw std::invalid_argument("sample_window: k_y >= 2 on a zero-width omega dimension");

    const auto xs = detail::axis_samples(window.phi_min, window.phi_max, k_x);
    const auto ys = detail::axis_samples(window.omega_min, window.omega_max, k_y);
    SamplingPlan plan;
    plan.k_x = k_x;
    plan.k_y = k_y;
    plan.mode = SamplingMode::UniformGrid;
    plan.points.reserve(static_cast<std::size_t>(k_x) * k_y);
    for (double x : xs)
        for (double y : ys) plan.points.push_back({x, y});
    return plan;
}

// Steering vector u_k of a sampled deviation pair. Deviations may exceed 1
// in magnitude; with d_e <= 1 the phases stay well-defined.
inline ComplexVector steering_of_sample(const SpatialFrequencyPair& point,
                                        const ArrayGeometry& geom) {
    return upa_response(point, geom);
}

// Complex reflection gain R = u(point)^T theta + tau.
inline std::complex<double> reflection_gain(const ReflectionVector& theta,
                                            const SpatialFrequencyPair& point,
                                            const TargetRcs& tau_s,
                                            const ArrayGeometry& geom) {
    if (theta.theta.size() != geom.elements())
        throw std::invalid_argument("reflection_gain: theta length does not match geometry");
    const ComplexVector u = upa_response(point, geom);
    std::complex<double> acc = 0.0;
    for (Eigen::Index n = 0; n < u.size(); ++n) acc += u[n] * theta.theta[n];
    return acc + tau_s.value;
}

struct WindowMax {
    double eta_cont = 0.0;
    SpatialFrequencyPair argmax;
};

namespace detail {

inline double gain_sq(const ReflectionVector& theta, double phi, double omega,
                      const TargetRcs& tau_s, const ArrayGeometry& geom) {
    return std::norm(reflection_gain(theta, {phi, omega}, tau_s, geom));
}

// Golden-section maximization of a unimodal-ish 1-D slice; deterministic.
template <typename F>
inline std::pair<double, double> golden_max(F f, double a, double b, int iters = 60) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-14; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = (a + b) / 2.0;
    return {xm, f(xm)};
}

}  // namespace detail

// Maximum of |R|^2 over the window: dense tensor grid (grid_density points
// per unit spatial frequency, endpoints included) followed by coordinate-wise
// golden-section refinement around the grid argmax. Ties resolve to the
// lexicographically smallest (phi, omega).
inline WindowMax window_max_gain(const ReflectionVector& theta,
                                 const AngularWindow& window,
                                 const TargetRcs& tau_s, const ArrayGeometry& geom,
                                 double grid_density = 2000.0) {
    if (grid_density < 100.0)
        throw std::invalid_argument("window_max_gain: grid_density must be >= 100");

    const auto axis_count = [&](double width) {
        if (width <= 0.0) return 1;
        return std::max(2, static_cast<int>(std::ceil(width * grid_density)) + 1);
    };
    const int n_phi = axis_count(window.phi_width());
    const int n_omega = axis_count(window.omega_width());
    const auto xs = detail::axis_samples(window.phi_min, window.phi_max, n_phi);
    const auto ys = detail::axis_samples(window.omega_min, window.omega_max, n_omega);

    double best = -1.0;
    int bi = 0, bj = 0;
    for (int i = 0; i < n_phi; ++i) {
        for (int j = 0; j < n_omega; ++j) {
            const double g = detail::gain_sq(theta, xs[i], ys[j], tau_s, geom);
            if (g > best) {
                best = g;
                bi = i;
                bj = j;
            }
        }
    }

    double phi = xs[bi], omega = ys[bj];
    const double hx = n_phi > 1 ? xs[1] - xs[0] : 0.0;
    const double hy = n_omega > 1 ? ys[1] - ys[0] : 0.0;
    for (int round = 0; round < 3; ++round) {
        if (hx > 0.0) {
            const double a = std::max(window.phi_min, phi - hx);
            const double b = std::min(window.phi_max, phi + hx);
            auto [x, fx] = detail::golden_max(
                [&](double t) { return detail::gain_sq(theta, t, omega, tau_s, geom); }, a, b);
            if (fx > best) {
                best = fx;
                phi = x;
            }
        }
        if (hy > 0.0) {
            const double a = std::max(window.omega_min, omega - hy);
            const double b = std::min(window.omega_max, omega + hy);
            auto [y, fy] = detail::golden_max(
                [&](double t) { return detail::gain_sq(theta, phi, t, tau_s, geom); }, a, b);
            if (fy > best) {
                best = fy;
                omega = y;
            }
        }
    }
    return {best, {phi, omega}};
}

}  // namespace irses
