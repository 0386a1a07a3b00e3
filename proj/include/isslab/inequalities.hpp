#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "isslab/errors.hpp"
#include "isslab/grid.hpp"
#include "isslab/signals.hpp"

namespace isslab {

/// Result of one inequality evaluation on discrete data.
struct IneqCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// ||f||^2 <= (1/2) ||f_x||^2 on [0,1], valid when f vanishes somewhere;
/// the caller names the node where f is (numerically) zero.
inline IneqCheck check_poincare(const GridFunction& f, int zero_node) {
    if (zero_node < 0 || zero_node >= f.size()) {
        throw DimensionError("check_poincare: zero_node out of range");
    }
    if (std::abs(f[zero_node]) > 1e-10) {
        throw ValidationError("check_poincare: f must vanish at the named node");
    }
    IneqCheck c;
    const double l2 = l2_norm(f);
    const double dx = l2_norm(central_derivative(f));
    c.lhs = l2 * l2;
    c.rhs = 0.5 * dx * dx;
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-6);
    return c;
}

/// f(c)^2 <= 2 ||f||^2 + ||f_x||^2 on [0,1], any node c.
inline IneqCheck check_sobolev_point(const GridFunction& f, int c_index) {
    if (c_index < 0 || c_index >= f.size()) {
        throw DimensionError("check_sobolev_point: c_index out of range");
    }
    IneqCheck c;
    const double l2 = l2_norm(f);
    const double dx = l2_norm(central_derivative(f));
    c.lhs = f[c_index] * f[c_index];
    c.rhs = 2.0 * l2 * l2 + dx * dx;
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-6);
    return c;
}

/// (int |f|^p)^{1/p} <= (2 ||f||^2 + ||f_x||^2)^{1/2} on [0,1], p >= 1.
inline IneqCheck check_sobolev_lp(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw ValidationError("check_sobolev_lp: p must be >= 1");
    IneqCheck c;
    GridFunction fp = f;
    for (int i = 0; i < f.size(); ++i) fp[i] = std::pow(std::abs(f[i]), p);
    c.lhs = std::pow(trapezoid_integral(fp), 1.0 / p);
    const double l2 = l2_norm(f);
    const double dx = l2_norm(central_derivative(f));
    c.rhs = std::sqrt(2.0 * l2 * l2 + dx * dx);
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-6);
    return c;
}

/// a b <= a^2/(2 eps) + eps b^2 / 2 for a, b >= 0, eps > 0.
inline bool check_young(double a, double b, double epsilon) {
    if (a < 0.0 || b < 0.0 || !(epsilon > 0.0)) {
        throw ValidationError("check_young: need a,b >= 0 and epsilon > 0");
    }
    return a * b <= (a * a / (2.0 * epsilon) + epsilon * b * b / 2.0) * (1.0 + 1e-12);
}

/// Integral bound for y' <= g y + h:
/// y(t) <= y(0) e^{G(t)} + int_0^t h(s) e^{G(t)-G(s)} ds, G = int g.
/// All integrals by the trapezoid rule on the sample times.
struct GronwallCheck {
    std::vector<double> observed;
    std::vector<double> bound;
    bool holds = false;
    double max_excess = 0.0;
};

inline GronwallCheck check_gronwall(const std::vector<double>& y, const std::vector<double>& g,
                                    const std::vector<double>& h,
                                    const std::vector<double>& times) {
    const std::size_t n = times.size();
    if (y.size() != n || g.size() != n || h.size() != n || n < 2) {
        throw DimensionError("check_gronwall: series must share >= 2 sample times");
    }
    GronwallCheck out;
    out.observed = y;
    out.bound.resize(n);
    double big_g = 0.0;     // cumulative integral of g
    double weighted = 0.0;  // cumulative integral of h e^{-G}
    out.bound[0] = y[0];
    double prev_h_term = h[0]; // h e^{-G} at the previous sample, G(0)=0
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = times[i] - times[i - 1];
        if (!(dt > 0.0)) throw ValidationError("check_gronwall: times must increase");
        big_g += 0.5 * dt * (g[i - 1] + g[i]);
        const double h_term = h[i] * std::exp(-big_g);
        weighted += 0.5 * dt * (prev_h_term + h_term);
        prev_h_term = h_term;
        out.bound[i] = std::exp(big_g) * (y[0] + weighted);
    }
    out.max_excess = 0.0;
    out.holds = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double allowed = out.bound[i] * (1.0 + 1e-3) + 1e-12;
        out.max_excess = std::max(out.max_excess, y[i] - out.bound[i]);
        if (y[i] > allowed) out.holds = false;
    }
    return out;
}

/// Random sum of at most max_modes sine modes with coefficients in [-1,1];
/// vanishes at both endpoints. Keeps its coefficients so callers can
/// re-sample at finer resolution.
struct RandomSmoothFunction {
    std::vector<double> coefficients; // coefficient of sin((k+1) pi x)

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < coefficients.size(); ++k) {
            acc += coefficients[k] * std::sin(static_cast<double>(k + 1) * M_PI * x);
        }
        return acc;
    }

    SpaceProfile profile() const {
        auto copy = *this;
        return SpaceProfile::from_function([copy](double x) { return copy(x); });
    }

    GridFunction sample(std::shared_ptr<const Grid> g) const {
        return GridFunction::sample(std::move(g), [this](double x) { return (*this)(x); });
    }
};

inline RandomSmoothFunction random_smooth_function(std::mt19937& rng, int max_modes = 5) {
    std::uniform_int_distribution<int> modes_dist(1, max_modes);
    std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);
    RandomSmoothFunction f;
    const int modes = modes_dist(rng);
    f.coefficients.resize(static_cast<std::size_t>(modes));
    for (auto& c : f.coefficients) c = coeff_dist(rng);
    return f;
}

/// Outcome of the randomized inequality battery.
struct BatteryResult {
    int trials = 0;
    int poincare_failures = 0;
    int sobolev_point_failures = 0;
    int sobolev_lp_failures = 0;
    int young_failures = 0;
    int gronwall_failures = 0;
    int refined_rechecks = 0;

    int total_failures() const {
        return poincare_failures + sobolev_point_failures + sobolev_lp_failures +
               young_failures + gronwall_failures;
    }
};

/// Randomized proof-toolbox battery. A failing discrete check is retried
/// once at 4x resolution before it counts as a failure, to separate
/// quadrature artifacts from genuine violations.
inline BatteryResult run_inequality_battery(unsigned seed, int trials, int n_cells = 256) {
    BatteryResult res;
    res.trials = trials;
    std::mt19937 rng(seed);
    auto grid = Grid::uniform(n_cells);
    auto fine_grid = Grid::uniform(4 * n_cells);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> p_values = {1.0, 2.0, 4.0, 10.0};

    for (int trial = 0; trial < trials; ++trial) {
        const RandomSmoothFunction f = random_smooth_function(rng);
        const GridFunction coarse = f.sample(grid);

        auto recheck = [&](auto&& check) {
            ++res.refined_rechecks;
            return check(f.sample(fine_grid)).holds;
        };

        if (!check_poincare(coarse, 0).holds &&
            !recheck([](const GridFunction& g) { return check_poincare(g, 0); })) {
            ++res.poincare_failures;
        }

        const int c_index = static_cast<int>(unit(rng) * n_cells);
        if (!check_sobolev_point(coarse, c_index).holds &&
            !recheck([&](const GridFunction& g) {
                return check_sobolev_point(g, 4 * c_index);
            })) {
            ++res.sobolev_point_failures;
        }

        for (double p : p_values) {
            if (!check_sobolev_lp(coarse, p).holds &&
                !recheck([&](const GridFunction& g) { return check_sobolev_lp(g, p); })) {
                ++res.sobolev_lp_failures;
            }
        }

        const double a = 3.0 * unit(rng);
        const double b = 3.0 * unit(rng);
        const double eps = 0.1 + 2.0 * unit(rng);
        if (!check_young(a, b, eps)) ++res.young_failures;

        // Gronwall: random smooth g, nonnegative h; y integrated from
        // y' = g y + h (the equality case) with a half-step midpoint rule.
        {
            const RandomSmoothFunction g_modes = random_smooth_function(rng, 3);
            const RandomSmoothFunction h_modes = random_smooth_function(rng, 3);
            const double t_end = 2.0;
            const int steps = 2000;
            const double dt = t_end / steps;
            std::vector<double> times(steps + 1), yv(steps + 1), gv(steps + 1), hv(steps + 1);
            auto g_of = [&](double t) { return g_modes(t / t_end); };
            auto h_of = [&](double t) { return std::abs(h_modes(t / t_end)); };
            yv[0] = unit(rng);
            times[0] = 0.0;
            gv[0] = g_of(0.0);
            hv[0] = h_of(0.0);
            for (int k = 1; k <= steps; ++k) {
                const double t_prev = dt * (k - 1);
                const double t_mid = t_prev + 0.5 * dt;
                const double y_mid =
                    yv[k - 1] + 0.5 * dt * (g_of(t_prev) * yv[k - 1] + h_of(t_prev));
                yv[k] = yv[k - 1] + dt * (g_of(t_mid) * y_mid + h_of(t_mid));
                times[k] = dt * k;
                gv[k] = g_of(times[k]);
                hv[k] = h_of(times[k]);
            }
            if (!check_gronwall(yv, gv, hv, times).holds) ++res.gronwall_failures;
        }
    }
    return res;
}

} // namespace isslab
