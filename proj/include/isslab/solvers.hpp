#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isslab/errors.hpp"
#include "isslab/grid.hpp"
#include "isslab/scenario.hpp"
#include "isslab/signals.hpp"
#include "isslab/tridiagonal.hpp"

namespace isslab {

/// Any |u| beyond this is treated as blow-up.
inline constexpr double kBlowUpGuard = 1e6;

/// Time-indexed record of a run: norms and running disturbance statistics
/// at every step, raw snapshots at the configured stride.
struct TrajectoryRecord {
    PlantKind plant = PlantKind::transport;
    std::string role = "original"; ///< original | subsystem_w | subsystem_v | target_w
    std::shared_ptr<const Grid> grid;
    double dt = 0.0;

    std::vector<double> times;
    std::vector<NormTriple> norm_series;
    std::vector<RunningStats> stats_series;

    std::vector<int> snapshot_steps;
    std::vector<double> snapshot_times;
    std::vector<GridFunction> snapshots;

    GridFunction final_state;

    int n_steps() const { return static_cast<int>(times.size()) - 1; }
    const RunningStats& final_stats() const { return stats_series.back(); }

    bool has_full_snapshots() const { return snapshots.size() == times.size(); }

    /// Running maximum of the max-norm up to each recorded time.
    std::vector<double> running_linf() const {
        std::vector<double> out(norm_series.size());
        double m = 0.0;
        for (std::size_t i = 0; i < norm_series.size(); ++i) {
            m = std::max(m, norm_series[i].linf);
            out[i] = m;
        }
        return out;
    }
};

namespace detail {

/// One Crank-Nicolson step of u_t = mu u_xx - m u_x - r(x) u + f + extra,
/// with Dirichlet values injected at both ends. `extra` is an optional
/// per-node explicit term (already at the correct time centering).
inline GridFunction cn_step(const GridFunction& state, double mu, double m,
                            const std::vector<double>& reaction, double left_next,
                            double right_next, const GridFunction& f_now,
                            const GridFunction& f_next, const std::vector<double>& extra,
                            double dt) {
    const int nn = state.size();
    const int ni = nn - 2; // interior unknowns
    const double h = state.grid->h;
    const double cw = mu / (h * h) + m / (2.0 * h);
    const double ce = mu / (h * h) - m / (2.0 * h);
    const double half_dt = 0.5 * dt;

    std::vector<double> lower(static_cast<std::size_t>(ni));
    std::vector<double> diag(static_cast<std::size_t>(ni));
    std::vector<double> upper(static_cast<std::size_t>(ni));
    std::vector<double> rhs(static_cast<std::size_t>(ni));

    for (int i = 1; i <= ni; ++i) {
        const double cd = 2.0 * mu / (h * h) + reaction[static_cast<std::size_t>(i)];
        const std::size_t r = static_cast<std::size_t>(i - 1);
        lower[r] = -half_dt * cw;
        diag[r] = 1.0 + half_dt * cd;
        upper[r] = -half_dt * ce;
        double b = state[i] +
                   half_dt * (cw * state[i - 1] - cd * state[i] + ce * state[i + 1]) +
                   half_dt * (f_now[i] + f_next[i]);
        if (!extra.empty()) b += dt * extra[static_cast<std::size_t>(i)];
        if (i == 1) b += half_dt * cw * left_next;
        if (i == ni) b += half_dt * ce * right_next;
        rhs[r] = b;
    }

    auto interior = solve_tridiagonal(lower, diag, upper, std::move(rhs));

    std::vector<double> out(static_cast<std::size_t>(nn));
    out[0] = left_next;
    for (int i = 1; i <= ni; ++i) out[static_cast<std::size_t>(i)] = interior[static_cast<std::size_t>(i - 1)];
    out[static_cast<std::size_t>(nn - 1)] = right_next;

    GridFunction next(state.grid, std::move(out));
    for (double v : next.values) {
        if (!std::isfinite(v) || std::abs(v) > kBlowUpGuard) {
            throw BlowUpError("solution left the finite range (|u| > 1e6 or NaN)",
                              std::nan(""));
        }
    }
    return next;
}

/// Central difference of the conservative Burgers flux nu*(u^2/2 + w u)
/// at interior nodes; index 0 and n are unused.
inline std::vector<double> burgers_flux_divergence(const GridFunction& u,
                                                   const GridFunction* w, double nu) {
    const int nn = u.size();
    const double h = u.grid->h;
    std::vector<double> out(static_cast<std::size_t>(nn), 0.0);
    auto flux = [&](int i) {
        double q = 0.5 * u[i] * u[i];
        if (w) q += (*w)[i] * u[i];
        return q;
    };
    for (int i = 1; i < nn - 1; ++i) {
        out[static_cast<std::size_t>(i)] = nu * (flux(i + 1) - flux(i - 1)) / (2.0 * h);
    }
    return out;
}

inline void check_burgers_cfl(const GridFunction& u, double nu, double dt, double extra_speed) {
    const double speed = std::max(nu * (u.max_abs() + extra_speed), 1e-12);
    if (dt > u.grid->h / speed) {
        throw StepSizeError("convection step-size guard violated: reduce dt below h / (nu max|u|)",
                            std::nan(""));
    }
}

} // namespace detail

/// One Crank-Nicolson step of the linear transport plant
/// u_t - mu u_xx + m u_x + n u = f with end values (0, d).
inline GridFunction step_transport(const GridFunction& state, const TransportParams& params,
                                   double d_now, double d_next, const GridFunction& f_now,
                                   const GridFunction& f_next, double dt) {
    (void)d_now; // the explicit stencil reads it from state[n]
    if (!(dt > 0.0)) throw ValidationError("step_transport: dt must be > 0");
    std::vector<double> reaction(static_cast<std::size_t>(state.size()), params.n);
    return detail::cn_step(state, params.mu, params.m, reaction, 0.0, d_next, f_now, f_next,
                           {}, dt);
}

/// As step_transport with spatially varying zero-order coefficient a(x)
/// (and optional constant advection m) folded into the implicit operator.
inline GridFunction step_reaction(const GridFunction& state, const ReactionParams& params,
                                  double d_now, double d_next, const GridFunction& f_now,
                                  const GridFunction& f_next, double dt) {
    (void)d_now;
    if (!(dt > 0.0)) throw ValidationError("step_reaction: dt must be > 0");
    std::vector<double> reaction(static_cast<std::size_t>(state.size()));
    for (int i = 0; i < state.size(); ++i) {
        reaction[static_cast<std::size_t>(i)] = params.a(state.grid->nodes[static_cast<std::size_t>(i)]);
    }
    return detail::cn_step(state, params.mu, params.m, reaction, 0.0, d_next, f_now, f_next,
                           {}, dt);
}

/// One IMEX step of Burgers' equation u_t - mu u_xx + nu u u_x = f:
/// diffusion Crank-Nicolson, convection explicit in conservative form
/// nu (u^2/2)_x with a midpoint re-evaluation for second order.
inline GridFunction step_burgers(const GridFunction& state, const BurgersParams& params,
                                 double d_now, double d_next, const GridFunction& f_now,
                                 const GridFunction& f_next, double dt) {
    (void)d_now;
    if (!(dt > 0.0)) throw ValidationError("step_burgers: dt must be > 0");
    detail::check_burgers_cfl(state, params.nu, dt, 0.0);
    const std::vector<double> zero_reaction(static_cast<std::size_t>(state.size()), 0.0);

    auto conv_now = detail::burgers_flux_divergence(state, nullptr, params.nu);
    for (double& v : conv_now) v = -v;
    GridFunction predictor = detail::cn_step(state, params.mu, 0.0, zero_reaction, 0.0,
                                             d_next, f_now, f_next, conv_now, dt);

    GridFunction mid = axpby(0.5, state, 0.5, predictor);
    auto conv_mid = detail::burgers_flux_divergence(mid, nullptr, params.nu);
    for (double& v : conv_mid) v = -v;
    return detail::cn_step(state, params.mu, 0.0, zero_reaction, 0.0, d_next, f_now, f_next,
                           conv_mid, dt);
}

/// One IMEX step of the coupled companion system
/// v_t - mu v_xx + nu (v v_x + (w v)_x) = f with v(0)=v(1)=0, where w is a
/// known trajectory sampled at the same times.
inline GridFunction step_burgers_coupled(const GridFunction& state, const BurgersParams& params,
                                         const GridFunction& w_now, const GridFunction& w_next,
                                         const GridFunction& f_now, const GridFunction& f_next,
                                         double dt) {
    if (!(dt > 0.0)) throw ValidationError("step_burgers_coupled: dt must be > 0");
    detail::check_burgers_cfl(state, params.nu, dt, w_now.max_abs());
    const std::vector<double> zero_reaction(static_cast<std::size_t>(state.size()), 0.0);

    auto conv_now = detail::burgers_flux_divergence(state, &w_now, params.nu);
    for (double& v : conv_now) v = -v;
    GridFunction predictor = detail::cn_step(state, params.mu, 0.0, zero_reaction, 0.0, 0.0,
                                             f_now, f_next, conv_now, dt);

    GridFunction v_mid = axpby(0.5, state, 0.5, predictor);
    GridFunction w_mid = axpby(0.5, w_now, 0.5, w_next);
    auto conv_mid = detail::burgers_flux_divergence(v_mid, &w_mid, params.nu);
    for (double& v : conv_mid) v = -v;
    return detail::cn_step(state, params.mu, 0.0, zero_reaction, 0.0, 0.0, f_now, f_next,
                           conv_mid, dt);
}

namespace detail {

inline void record_initial(TrajectoryRecord& rec, const GridFunction& u0, double d0,
                           const GridFunction& f0, double dt) {
    rec.times.push_back(0.0);
    rec.norm_series.push_back(norms(u0));
    RunningStats stats;
    stats = update_stats(stats, d0, f0, dt);
    rec.stats_series.push_back(stats);
    rec.snapshot_steps.push_back(0);
    rec.snapshot_times.push_back(0.0);
    rec.snapshots.push_back(u0);
}

inline void record_step(TrajectoryRecord& rec, const GridFunction& u, int k, double t,
                        double d_value, const GridFunction& f_snapshot, double dt,
                        int stride, int last_step) {
    rec.times.push_back(t);
    rec.norm_series.push_back(norms(u));
    rec.stats_series.push_back(update_stats(rec.stats_series.back(), d_value, f_snapshot, dt));
    if (k % stride == 0 || k == last_step) {
        rec.snapshot_steps.push_back(k);
        rec.snapshot_times.push_back(t);
        rec.snapshots.push_back(u);
    }
}

template <typename StepFn>
inline TrajectoryRecord run_time_loop(const Scenario& s, StepFn&& step) {
    auto grid = Grid::uniform(s.disc.n_cells);
    GridFunction u = s.u0.sample(grid);
    u[0] = 0.0;
    u[u.size() - 1] = s.d(0.0);

    TrajectoryRecord rec;
    rec.plant = s.plant;
    rec.grid = grid;
    rec.dt = s.disc.dt;

    const double dt = s.disc.dt;
    const int last = static_cast<int>(std::llround(s.disc.t_final / dt));
    if (last < 1) throw ValidationError("simulate: t_final shorter than one step");

    GridFunction f_now = s.f.sample(grid, 0.0);
    record_initial(rec, u, s.d(0.0), f_now, dt);

    for (int k = 1; k <= last; ++k) {
        const double t_prev = dt * static_cast<double>(k - 1);
        const double t = dt * static_cast<double>(k);
        const double d_now = s.d(t_prev);
        const double d_next = s.d(t);
        GridFunction f_next = s.f.sample(grid, t);
        try {
            u = step(u, d_now, d_next, f_now, f_next, dt);
        } catch (const BlowUpError& e) {
            throw BlowUpError(std::string(e.what()) + " at t = " + std::to_string(t), t);
        } catch (const StepSizeError& e) {
            throw StepSizeError(std::string(e.what()) + " at t = " + std::to_string(t), t);
        }
        detail::record_step(rec, u, k, t, d_next, f_next, dt, s.disc.snapshot_stride, last);
        f_now = std::move(f_next);
    }
    rec.final_state = u;
    return rec;
}

} // namespace detail

/// Run the scenario's plant from t=0 to t_final. Deterministic for fixed
/// inputs; step failures are rethrown with the failing time attached.
inline TrajectoryRecord simulate(const Scenario& s) {
    s.validate_or_throw();
    switch (s.plant) {
    case PlantKind::transport:
        return detail::run_time_loop(s, [&](const GridFunction& u, double d0, double d1,
                                            const GridFunction& f0, const GridFunction& f1,
                                            double dt) {
            return step_transport(u, s.transport, d0, d1, f0, f1, dt);
        });
    case PlantKind::burgers:
        return detail::run_time_loop(s, [&](const GridFunction& u, double d0, double d1,
                                            const GridFunction& f0, const GridFunction& f1,
                                            double dt) {
            return step_burgers(u, s.burgers, d0, d1, f0, f1, dt);
        });
    case PlantKind::reaction:
        return detail::run_time_loop(s, [&](const GridFunction& u, double d0, double d1,
                                            const GridFunction& f0, const GridFunction& f1,
                                            double dt) {
            return step_reaction(u, s.reaction, d0, d1, f0, f1, dt);
        });
    case PlantKind::closed_loop:
        throw ValidationError("simulate: closed_loop scenarios run through the backstepping loop");
    }
    throw ValidationError("simulate: unknown plant");
}

/// Run the coupled companion system of a Burgers splitting. `companion`
/// must carry snapshots at every step (stride 1) on the same grid and dt.
inline TrajectoryRecord simulate_burgers_coupled(const Scenario& s,
                                                 const TrajectoryRecord& companion) {
    s.validate_or_throw();
    if (s.plant != PlantKind::burgers) {
        throw ValidationError("simulate_burgers_coupled: plant must be burgers");
    }
    if (!companion.has_full_snapshots()) {
        throw DimensionError("simulate_burgers_coupled: companion needs snapshots at stride 1");
    }
    if (companion.grid->n_cells != s.disc.n_cells ||
        std::abs(companion.dt - s.disc.dt) > 1e-15 * s.disc.dt) {
        throw DimensionError("simulate_burgers_coupled: discretization mismatch with companion");
    }
    const int last = static_cast<int>(std::llround(s.disc.t_final / s.disc.dt));
    if (last + 1 > static_cast<int>(companion.snapshots.size())) {
        throw DimensionError("simulate_burgers_coupled: companion trajectory too short");
    }
    int k = 0;
    auto rec = detail::run_time_loop(s, [&](const GridFunction& v, double, double,
                                            const GridFunction& f0, const GridFunction& f1,
                                            double dt) {
        const GridFunction& w_now = companion.snapshots[static_cast<std::size_t>(k)];
        const GridFunction& w_next = companion.snapshots[static_cast<std::size_t>(k + 1)];
        ++k;
        return step_burgers_coupled(v, s.burgers, w_now, w_next, f0, f1, dt);
    });
    rec.role = "subsystem_w";
    return rec;
}

} // namespace isslab
