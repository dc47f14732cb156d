#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "irses/errors.hpp"

namespace irses {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Uniform planar reflecting array, x-major element order:
// element n = m_x * n_y + m_y (0-based) sits at grid position (m_x, m_y).
struct ArrayGeometry {
    int n_x = 1;
    int n_y = 1;
    double delta_e = 0.075;  // element spacing [m]
    double lambda = 0.15;    // wavelength [m]

    ArrayGeometry() = default;
    ArrayGeometry(int n_x, int n_y, double delta_e, double lambda)
        : n_x(n_x), n_y(n_y), delta_e(delta_e), lambda(lambda) {
        if (n_x < 1 || n_y < 1)
            throw std::invalid_argument("ArrayGeometry: element counts must be >= 1");
        if (!(delta_e > 0.0) || !(lambda > 0.0))
            throw std::invalid_argument("ArrayGeometry: delta_e and lambda must be positive");
        if (delta_e > lambda / 2.0 + 1e-15)
            throw std::invalid_argument("ArrayGeometry: spacing must not exceed lambda/2");
    }

    int elements() const { return n_x * n_y; }
    // Normalized spacing; in (0, 1] for sub-half-wavelength arrays.
    double d_e() const { return 2.0 * delta_e / lambda; }
};

// x/y direction-cosine pair. Single-link values live in the unit disk;
// transmit-minus-receive deviations live in [-2,2]^2.
struct SpatialFrequencyPair {
    double phi = 0.0;
    double omega = 0.0;
};

// Axis-aligned rectangle at height z (the detection region).
struct RegionRect {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double z = 0.0;

    bool valid() const { return x_min <= x_max && y_min <= y_max; }
};

// Box of spatial-frequency deviations equivalent to a geographic region.
struct AngularWindow {
    double phi_min = 0.0, phi_max = 0.0;
    double omega_min = 0.0, omega_max = 0.0;

    bool contains(const SpatialFrequencyPair& p, double tol = 0.0) const {
        return p.phi >= phi_min - tol && p.phi <= phi_max + tol &&
               p.omega >= omega_min - tol && p.omega <= omega_max + tol;
    }
    double phi_width() const { return phi_max - phi_min; }
    double omega_width() const { return omega_max - omega_min; }
};

// e(phi, n) = [1, exp(-j*pi*phi), ..., exp(-j*pi*(n-1)*phi)]^T
inline ComplexVector ula_steering(double phi, int n) {
    if (n < 1) throw std::invalid_argument("ula_steering: n must be >= 1");
    ComplexVector v(n);
    for (int m = 0; m < n; ++m) {
        const double arg = -std::numbers::pi * static_cast<double>(m) * phi;
        v[m] = std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return v;
}

// Direction cosines of the link from q to w, for an array parallel to the
// x-y plane at q: phi = (w.x - q.x)/d, omega = (w.y - q.y)/d.
inline SpatialFrequencyPair direction_cosines(const Vec3& q, const Vec3& w) {
    const double d = distance(q, w);
    if (d <= 0.0)
        throw DegenerateGeometryError("direction_cosines: coincident points");
    return {(w.x - q.x) / d, (w.y - q.y) / d};
}

// UPA response at a spatial-frequency pair: e(d_e*phi, n_x) (x) e(d_e*omega, n_y),
// x-factor first so that entry m_x*n_y + m_y carries phase
// -pi*d_e*(m_x*phi + m_y*omega).
inline ComplexVector upa_response(const SpatialFrequencyPair& sf,
                                  const ArrayGeometry& geom) {
    const ComplexVector ex = ula_steering(geom.d_e() * sf.phi, geom.n_x);
    const ComplexVector ey = ula_steering(geom.d_e() * sf.omega, geom.n_y);
    ComplexVector out(geom.elements());
    for (int mx = 0; mx < geom.n_x; ++mx)
        for (int my = 0; my < geom.n_y; ++my) out[mx * geom.n_y + my] = ex[mx] * ey[my];
    return out;
}

// Extremes of the transmit-minus-receive spatial-frequency deviations over a
// rectangular region, evaluated on a tensor grid (corners always included).
// The two endpoints range over the same region, so the deviation extremes
// separate into (min - max) and (max - min) of the single-link cosines.
inline AngularWindow angular_window(const RegionRect& region, const Vec3& q,
                                    int grid_per_axis) {
    if (!region.valid()) throw std::invalid_argument("angular_window: malformed region");
    if (grid_per_axis < 2)
        throw std::invalid_argument("angular_window: grid_per_axis must be >= 2");
    if (!(q.z > region.z))
        throw DegenerateGeometryError("angular_window: target must be strictly above the region plane");

    double px_min = 1.0, px_max = -1.0, py_min = 1.0, py_max = -1.0;
    for (int i = 0; i < grid_per_axis; ++i) {
        const double tx = static_cast<double>(i) / (grid_per_axis - 1);
        const double x = region.x_min + tx * (region.x_max - region.x_min);
        for (int j = 0; j < grid_per_axis; ++j) {
            const double ty = static_cast<double>(j) / (grid_per_axis - 1);
            const double y = region.y_min + ty * (region.y_max - region.y_min);
            const SpatialFrequencyPair p = direction_cosines(q, {x, y, region.z});
            px_min = std::min(px_min, p.phi);
            px_max = std::max(px_max, p.phi);
            py_min = std::min(py_min, p.omega);
            py_max = std::max(py_max, p.omega);
        }
    }
    return {px_min - px_max, px_max - px_min, py_min - py_max, py_max - py_min};
}

}  // namespace irses
