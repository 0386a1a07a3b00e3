#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "isslab/errors.hpp"

namespace isslab {

/// Thomas algorithm for A x = rhs with A tridiagonal.
/// lower[i] multiplies x[i-1] (lower[0] unused), diag[i] multiplies x[i],
/// upper[i] multiplies x[i+1] (upper[n-1] unused). No pivoting; the
/// Crank-Nicolson matrices assembled here are strictly diagonally dominant.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
        throw DimensionError("solve_tridiagonal: inconsistent band sizes");
    }
    std::vector<double> c_star(n, 0.0);
    double pivot = diag[0];
    if (!(std::abs(pivot) > 0.0)) {
        throw SolverError("solve_tridiagonal: zero pivot at row 0");
    }
    c_star[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c_star[i - 1];
        if (!(std::abs(pivot) > 0.0)) {
            throw SolverError("solve_tridiagonal: zero pivot");
        }
        c_star[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c_star[i] * rhs[i + 1];
    }
    return rhs;
}

} // namespace isslab
