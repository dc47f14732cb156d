#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace irses {

// Geometric preconditions violated (coincident points, target not above the
// region plane, ...).
class DegenerateGeometryError : public std::invalid_argument {
public:
    explicit DegenerateGeometryError(const std::string& what)
        : std::invalid_argument(what) {}
};

// A matrix that must be invertible for the requested operation is singular
// (or numerically indistinguishable from singular).
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what)
        : std::runtime_error(what) {}
};

// Raised by the LMI kernel when phase-I certifies that no strictly feasible
// point exists. `infeasibility` is the optimal phase-I slack (positive means
// every point violates the LMI by at least this much along `certificate`).
class InfeasibleProblemError : public std::runtime_error {
public:
    InfeasibleProblemError(const std::string& what, double infeasibility,
                           std::vector<double> certificate)
        : std::runtime_error(what),
          infeasibility(infeasibility),
          certificate(std::move(certificate)) {}

    double infeasibility;
    std::vector<double> certificate;  // eigvec of the most-violated direction
};

// Iteration limit reached before the requested tolerance was certified.
// Carries the best iterate found so callers can inspect or restart.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double achieved_gap,
                        std::vector<double> best_point = {})
        : std::runtime_error(what),
          achieved_gap(achieved_gap),
          best_point(std::move(best_point)) {}

    double achieved_gap;
    std::vector<double> best_point;
};

// Configuration file problems; carries the offending field for diagnostics.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string field, int line = 0)
        : std::runtime_error(what), field(std::move(field)), line(line) {}

    std::string field;
    int line;
};

}  // namespace irses
