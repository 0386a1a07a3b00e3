#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "isslab/errors.hpp"

namespace isslab {

/// Uniform grid on [0,1] with n_cells intervals and n_cells+1 nodes.
/// Endpoints are exact; interior nodes are i/n_cells.
struct Grid {
    int n_cells = 0;
    double h = 0.0;
    std::vector<double> nodes;

    static std::shared_ptr<const Grid> uniform(int n_cells) {
        if (n_cells < 1) {
            throw DimensionError("Grid: n_cells must be >= 1");
        }
        auto g = std::make_shared<Grid>();
        g->n_cells = n_cells;
        g->h = 1.0 / static_cast<double>(n_cells);
        g->nodes.resize(static_cast<std::size_t>(n_cells) + 1);
        for (int i = 0; i <= n_cells; ++i) {
            g->nodes[static_cast<std::size_t>(i)] =
                static_cast<double>(i) / static_cast<double>(n_cells);
        }
        return g;
    }

    int n_nodes() const { return n_cells + 1; }
};

/// A field sampled at the nodes of a shared uniform grid.
struct GridFunction {
    std::shared_ptr<const Grid> grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(std::shared_ptr<const Grid> g, std::vector<double> v)
        : grid(std::move(g)), values(std::move(v)) {
        if (!grid || values.size() != static_cast<std::size_t>(grid->n_nodes())) {
            throw DimensionError("GridFunction: value count must equal node count");
        }
    }

    static GridFunction zeros(std::shared_ptr<const Grid> g) {
        std::vector<double> v(static_cast<std::size_t>(g->n_nodes()), 0.0);
        return GridFunction(std::move(g), std::move(v));
    }

    static GridFunction sample(std::shared_ptr<const Grid> g,
                               const std::function<double(double)>& f) {
        std::vector<double> v(static_cast<std::size_t>(g->n_nodes()));
        for (int i = 0; i < g->n_nodes(); ++i) {
            v[static_cast<std::size_t>(i)] = f(g->nodes[static_cast<std::size_t>(i)]);
        }
        return GridFunction(std::move(g), std::move(v));
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        return std::all_of(values.begin(), values.end(),
                           [](double v) { return std::isfinite(v); });
    }
};

/// Discrete L2 / H1 / max norms of a grid function.
struct NormTriple {
    double l2 = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
};

/// Composite trapezoid rule over the grid; exact for affine integrands.
inline double trapezoid_integral(const GridFunction& f) {
    const int n = f.size();
    const double h = f.grid->h;
    double acc = 0.5 * (f[0] + f[n - 1]);
    for (int i = 1; i < n - 1; ++i) acc += f[i];
    return acc * h;
}

inline double l2_norm(const GridFunction& f) {
    const int n = f.size();
    const double h = f.grid->h;
    double acc = 0.5 * (f[0] * f[0] + f[n - 1] * f[n - 1]);
    for (int i = 1; i < n - 1; ++i) acc += f[i] * f[i];
    return std::sqrt(acc * h);
}

/// Second-order first derivative: central differences at interior nodes,
/// one-sided three-point stencils at the two boundary nodes.
inline GridFunction central_derivative(const GridFunction& f) {
    const int n = f.size();
    if (n < 3) {
        throw DimensionError("central_derivative: need at least 3 nodes");
    }
    const double h = f.grid->h;
    std::vector<double> d(static_cast<std::size_t>(n));
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) {
        d[static_cast<std::size_t>(i)] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[static_cast<std::size_t>(n - 1)] =
        (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return GridFunction(f.grid, std::move(d));
}

/// l2 = sqrt(integral of f^2), linf = max |f_i|,
/// h1 = sqrt(l2^2 + ||f_x||^2) with f_x from central_derivative.
inline NormTriple norms(const GridFunction& f) {
    NormTriple t;
    t.l2 = l2_norm(f);
    t.linf = f.max_abs();
    const double dx_l2 = l2_norm(central_derivative(f));
    t.h1 = std::sqrt(t.l2 * t.l2 + dx_l2 * dx_l2);
    return t;
}

/// Pointwise linear combination a*f + b*g on a shared grid.
inline GridFunction axpby(double a, const GridFunction& f, double b, const GridFunction& g) {
    if (f.size() != g.size()) {
        throw DimensionError("axpby: operands on different grids");
    }
    GridFunction out = f;
    for (int i = 0; i < f.size(); ++i) out[i] = a * f[i] + b * g[i];
    return out;
}

} // namespace isslab
