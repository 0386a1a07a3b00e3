#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isslab/envelopes.hpp"
#include "isslab/errors.hpp"
#include "isslab/grid.hpp"
#include "isslab/scenario.hpp"
#include "isslab/signals.hpp"
#include "isslab/solvers.hpp"
#include "isslab/transforms.hpp"

namespace isslab {

/// Triangular kernel k(x,y) (or its inverse l) sampled on the grid nodes
/// of {0 <= y <= x <= 1}. Row i holds y_0..y_i.
struct VolterraKernel {
    enum class Direction { forward, inverse };

    int n_cells = 0;
    double mu = 1.0;
    double target_n = 0.0;
    Direction direction = Direction::forward;
    std::shared_ptr<const Grid> grid;
    std::vector<double> tri;

    static std::size_t tri_size(int n_cells) {
        return static_cast<std::size_t>(n_cells + 1) * static_cast<std::size_t>(n_cells + 2) / 2;
    }

    double at(int i, int j) const {
        return tri[static_cast<std::size_t>(i) * static_cast<std::size_t>(i + 1) / 2 +
                   static_cast<std::size_t>(j)];
    }
    double& at(int i, int j) {
        return tri[static_cast<std::size_t>(i) * static_cast<std::size_t>(i + 1) / 2 +
                   static_cast<std::size_t>(j)];
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : tri) m = std::max(m, std::abs(v));
        return m;
    }

    double max_abs_diagonal() const {
        double m = 0.0;
        for (int i = 0; i <= n_cells; ++i) m = std::max(m, std::abs(at(i, i)));
        return m;
    }
};

namespace detail {

/// Characteristic-variable lattice for the kernel equation
/// mu (k_xx - k_yy) = (n - a(y)) k on the triangle, with k(x,0) = 0 and
/// diagonal trace k(x,x) = -(1/(2 mu)) int_0^x (n - a). In xi = x+y,
/// eta = x-y the equation becomes 4 G_xi_eta = c((xi-eta)/2) G with
/// c(y) = (n - a(y))/mu, and integrating along characteristics yields
///
///   G(xi,eta) = -(1/(4 mu)) int_eta^xi (n - a(tau/2)) dtau
///               + (1/4) int_eta^xi int_0^eta c((tau-s)/2) G(tau,s) ds dtau.
///
/// The lattice spacing h matches the (x,y) grid, so every triangle node
/// (x_i, y_j) maps exactly to the lattice node (i+j, i-j).
struct KernelLattice {
    int n = 0;        // cells per side of the (x,y) triangle
    double h = 0.0;   // lattice spacing in xi and eta
    int np = 0;       // xi nodes: 2n+1
    int nq = 0;       // eta nodes: n+1

    bool valid(int p, int q) const { return q <= p && p + q <= 2 * n; }
};

/// Cumulative integral out[k] = int over the first k intervals, spacing h.
/// Composite Simpson with three-point rules at odd positions; falls back
/// to the trapezoid only on a lone interval. Fourth-order on smooth data.
inline void cumulative_integral(const double* f, int count, double h, double* out) {
    out[0] = 0.0;
    if (count < 2) return;
    if (count == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return;
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (int k = 2; k < count; ++k) {
        if (k % 2 == 0) {
            out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        } else {
            out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
        }
    }
}

} // namespace detail

/// Solve the forward kernel by successive approximation in characteristic
/// variables, iterating until successive iterates differ by < 1e-10 in
/// max norm (at most 200 sweeps).
inline VolterraKernel solve_kernel(const ReactionParams& plant, double target_n, int n_cells) {
    if (!(plant.mu > 0.0)) throw ValidationError("solve_kernel: mu must be positive");
    if (target_n < 0.0) throw ValidationError("solve_kernel: target_n must be >= 0");
    if (n_cells < 2) throw DimensionError("solve_kernel: n_cells must be >= 2");

    detail::KernelLattice lat;
    lat.n = n_cells;
    lat.h = 1.0 / static_cast<double>(n_cells);
    lat.np = 2 * n_cells + 1;
    lat.nq = n_cells + 1;
    const double mu = plant.mu;

    auto idx = [&](int p, int q) {
        return static_cast<std::size_t>(p) * static_cast<std::size_t>(lat.nq) +
               static_cast<std::size_t>(q);
    };

    // c(y) = (n - a(y))/mu at half-grid points y = r h / 2, r = 0..2n.
    std::vector<double> c_half(static_cast<std::size_t>(lat.np));
    for (int r = 0; r < lat.np; ++r) {
        const double y = 0.5 * lat.h * static_cast<double>(r);
        c_half[static_cast<std::size_t>(r)] = (target_n - plant.a(y)) / mu;
    }

    // Cumulative integral of (n - a(tau/2)) over the xi lattice.
    std::vector<double> mu_c(static_cast<std::size_t>(lat.np));
    for (int r = 0; r < lat.np; ++r) mu_c[static_cast<std::size_t>(r)] = mu * c_half[static_cast<std::size_t>(r)];
    std::vector<double> cum(static_cast<std::size_t>(lat.np), 0.0);
    detail::cumulative_integral(mu_c.data(), lat.np, lat.h, cum.data());

    std::vector<double> trace_term(static_cast<std::size_t>(lat.np) *
                                   static_cast<std::size_t>(lat.nq));
    for (int p = 0; p < lat.np; ++p) {
        for (int q = 0; q < lat.nq; ++q) {
            trace_term[idx(p, q)] =
                lat.valid(p, q)
                    ? -(cum[static_cast<std::size_t>(p)] - cum[static_cast<std::size_t>(q)]) /
                          (4.0 * mu)
                    : 0.0;
        }
    }

    std::vector<double> g = trace_term;
    std::vector<double> fsrc(g.size(), 0.0);
    std::vector<double> row_cum(g.size(), 0.0);
    std::vector<double> g_next(g.size(), 0.0);
    std::vector<double> column(static_cast<std::size_t>(lat.np), 0.0);
    std::vector<double> column_cum(static_cast<std::size_t>(lat.np), 0.0);

    double diff = std::numeric_limits<double>::infinity();
    const int max_sweeps = 200;
    int sweep = 0;
    for (; sweep < max_sweeps && diff > 1e-10; ++sweep) {
        // source c((tau - s)/2) G(tau, s) on the valid lattice
        for (int p = 0; p < lat.np; ++p) {
            for (int q = 0; q < lat.nq; ++q) {
                fsrc[idx(p, q)] =
                    lat.valid(p, q) ? c_half[static_cast<std::size_t>(p - q)] * g[idx(p, q)] : 0.0;
            }
        }
        // inner integral over s in [0, eta_q] along each row tau = xi_p;
        // the cumulative rule only ever reads valid nodes (s <= Q_p)
        for (int p = 0; p < lat.np; ++p) {
            const int q_max = std::min(p, 2 * lat.n - p);
            detail::cumulative_integral(&fsrc[idx(p, 0)], q_max + 1, lat.h, &row_cum[idx(p, 0)]);
        }
        // outer integral over tau in [eta_q, xi_p]: one clean cumulative
        // pass per column, restarted at tau = eta_q (no boundary crossing;
        // each column segment has an even interval count)
        for (int q = 0; q < lat.nq; ++q) {
            const int lo = q;
            const int hi = 2 * lat.n - q;
            for (int p = lo; p <= hi; ++p) column[static_cast<std::size_t>(p - lo)] = row_cum[idx(p, q)];
            detail::cumulative_integral(column.data(), hi - lo + 1, lat.h, column_cum.data());
            for (int p = lo; p <= hi; ++p) {
                g_next[idx(p, q)] =
                    trace_term[idx(p, q)] + 0.25 * column_cum[static_cast<std::size_t>(p - lo)];
            }
        }
        diff = 0.0;
        for (int p = 0; p < lat.np; ++p) {
            for (int q = 0; q < lat.nq; ++q) {
                if (!lat.valid(p, q)) {
                    g_next[idx(p, q)] = 0.0;
                    continue;
                }
                diff = std::max(diff, std::abs(g_next[idx(p, q)] - g[idx(p, q)]));
            }
        }
        std::swap(g, g_next);
    }
    if (diff > 1e-10) {
        throw ConvergenceError("solve_kernel: successive approximation stalled, residual = " +
                                   std::to_string(diff),
                               diff);
    }

    VolterraKernel k;
    k.n_cells = n_cells;
    k.mu = mu;
    k.target_n = target_n;
    k.direction = VolterraKernel::Direction::forward;
    k.grid = Grid::uniform(n_cells);
    k.tri.resize(VolterraKernel::tri_size(n_cells));
    for (int i = 0; i <= n_cells; ++i) {
        for (int j = 0; j <= i; ++j) {
            k.at(i, j) = g[idx(i + j, i - j)];
        }
    }
    return k;
}

/// Inverse kernel from the reciprocity equation
/// l(x,y) = k(x,y) + int_y^x k(x,s) l(s,y) ds, by successive approximation.
inline VolterraKernel invert_kernel(const VolterraKernel& k) {
    if (k.direction != VolterraKernel::Direction::forward) {
        throw ValidationError("invert_kernel: expected a forward kernel");
    }
    const int n = k.n_cells;
    const double h = k.grid->h;
    VolterraKernel l = k;
    l.direction = VolterraKernel::Direction::inverse;

    std::vector<double> next(l.tri.size());
    double diff = std::numeric_limits<double>::infinity();
    const int max_sweeps = 200;
    for (int sweep = 0; sweep < max_sweeps && diff > 1e-10; ++sweep) {
        diff = 0.0;
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double integral = 0.0;
                for (int s = j; s <= i; ++s) {
                    const double w = (s == j || s == i) ? 0.5 : 1.0;
                    integral += w * k.at(i, s) * l.at(s, j);
                }
                integral *= h;
                const double value = k.at(i, j) + integral;
                const std::size_t t = static_cast<std::size_t>(i) *
                                          static_cast<std::size_t>(i + 1) / 2 +
                                      static_cast<std::size_t>(j);
                diff = std::max(diff, std::abs(value - l.tri[t]));
                next[t] = value;
            }
        }
        l.tri.swap(next);
    }
    if (diff > 1e-10) {
        throw ConvergenceError("invert_kernel: successive approximation stalled, residual = " +
                                   std::to_string(diff),
                               diff);
    }
    return l;
}

namespace detail {

inline GridFunction resample_linear(const GridFunction& f, const std::shared_ptr<const Grid>& g) {
    if (f.grid->n_cells == g->n_cells) return f;
    GridFunction out = GridFunction::zeros(g);
    const int n_src = f.grid->n_cells;
    for (int i = 0; i < g->n_nodes(); ++i) {
        const double x = g->nodes[static_cast<std::size_t>(i)];
        double pos = x * n_src;
        int j = std::min(static_cast<int>(pos), n_src - 1);
        const double a = pos - j;
        out[i] = (1.0 - a) * f[j] + a * f[j + 1];
    }
    return out;
}

} // namespace detail

/// w(x_i) = u(x_i) - int_0^{x_i} k(x_i, y) u(y) dy  (forward kernel).
inline GridFunction transform_to_target(const VolterraKernel& k, const GridFunction& u_in) {
    const GridFunction u = detail::resample_linear(u_in, k.grid);
    const double h = k.grid->h;
    GridFunction w = u;
    for (int i = 1; i <= k.n_cells; ++i) {
        double integral = 0.0;
        for (int j = 0; j <= i; ++j) {
            const double wt = (j == 0 || j == i) ? 0.5 : 1.0;
            integral += wt * k.at(i, j) * u[j];
        }
        w[i] = u[i] - h * integral;
    }
    return w;
}

/// u(x_i) = w(x_i) + int_0^{x_i} l(x_i, y) w(y) dy  (inverse kernel).
inline GridFunction transform_from_target(const VolterraKernel& l, const GridFunction& w_in) {
    const GridFunction w = detail::resample_linear(w_in, l.grid);
    const double h = l.grid->h;
    GridFunction u = w;
    for (int i = 1; i <= l.n_cells; ++i) {
        double integral = 0.0;
        for (int j = 0; j <= i; ++j) {
            const double wt = (j == 0 || j == i) ? 0.5 : 1.0;
            integral += wt * l.at(i, j) * w[j];
        }
        u[i] = w[i] + h * integral;
    }
    return u;
}

/// Boundary feedback with actuator disturbance:
/// U(t) = d(t) + int_0^1 k(1,y) u(y,t) dy.
inline double control_law(const VolterraKernel& k, const GridFunction& state, double d_now) {
    const GridFunction u = detail::resample_linear(state, k.grid);
    const double h = k.grid->h;
    const int n = k.n_cells;
    double integral = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double wt = (j == 0 || j == n) ? 0.5 : 1.0;
        integral += wt * k.at(n, j) * u[j];
    }
    return d_now + h * integral;
}

/// Advection-shifted feedback:
/// U(t) = e^{-m/(2 mu)} ( d(t) + int_0^1 k(1,y) e^{m y/(2 mu)} u(y,t) dy ).
inline double control_law_shifted(const VolterraKernel& k, const GridFunction& state,
                                  double d_now, double m, double mu) {
    const GridFunction u = detail::resample_linear(state, k.grid);
    const double h = k.grid->h;
    const int n = k.n_cells;
    double integral = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double wt = (j == 0 || j == n) ? 0.5 : 1.0;
        const double y = k.grid->nodes[static_cast<std::size_t>(j)];
        integral += wt * k.at(n, j) * std::exp(m * y / (2.0 * mu)) * u[j];
    }
    return std::exp(-m / (2.0 * mu)) * (d_now + h * integral);
}

/// Closed-loop setup: plant + kernel pair + disturbances + initial data.
struct ClosedLoopScenario {
    ReactionParams plant;
    VolterraKernel kernel; ///< forward kernel, built from the same a, mu, target n
    BoundarySignal actuator_disturbance;
    FieldSignal in_domain;
    InitialCondition u0 = SpaceProfile::zero();
    Discretization disc;

    void validate_or_throw() const {
        if (!(plant.mu > 0.0)) throw ValidationError("closed loop: mu must be positive");
        if (std::abs(kernel.mu - plant.mu) > 1e-12 * plant.mu) {
            throw ValidationError("closed loop: kernel and plant disagree on mu");
        }
        if (kernel.n_cells != disc.n_cells) {
            throw ValidationError("closed loop: kernel resolution must match n_cells");
        }
        if (!(disc.dt > 0.0)) throw ValidationError("closed loop: dt must be positive");
        if (std::abs(u0(0.0)) > 1e-12) {
            throw ValidationError("closed loop: u0(0) must vanish");
        }
    }
};

struct ClosedLoopTrajectories {
    TrajectoryRecord u; ///< plant state under feedback
    TrajectoryRecord w; ///< transformed state, a target-plant trajectory
};

/// Step the plant with the feedback evaluated at the right boundary each
/// step (predictor-corrector for the new-time boundary value), recording
/// both the state u and the transformed state w. The w record carries the
/// actuator disturbance as its boundary term and the transformed
/// in-domain disturbance.
inline ClosedLoopTrajectories run_closed_loop(const ClosedLoopScenario& cls, double t_final,
                                              double dt) {
    cls.validate_or_throw();
    if (!(t_final > 0.0)) throw ValidationError("run_closed_loop: t_final must be positive");

    const bool shifted = cls.plant.m != 0.0;
    auto grid = Grid::uniform(cls.disc.n_cells);
    const double mu = cls.plant.mu;
    const double m = cls.plant.m;

    // v = e^{-m x/(2 mu)} u is the advection-free companion; its boundary
    // feedback pulls back to U = e^{m/(2 mu)} (d + int k(1,y) e^{-m y/(2 mu)} u),
    // which is the shifted control law evaluated with the mirrored
    // advection parameter.
    ExpTransform to_shifted{m, mu, ExpTransform::Direction::inverse};

    auto eval_control = [&](const GridFunction& state, double t) {
        const double d_val = cls.actuator_disturbance(t);
        if (!shifted) return control_law(cls.kernel, state, d_val);
        return control_law_shifted(cls.kernel, state, d_val, -m, mu);
    };

    auto target_state = [&](const GridFunction& state) {
        if (!shifted) return transform_to_target(cls.kernel, state);
        return transform_to_target(cls.kernel, exp_transform(state, to_shifted));
    };

    GridFunction u = cls.u0.sample(grid);
    u[0] = 0.0;

    ClosedLoopTrajectories out;
    out.u.plant = PlantKind::reaction;
    out.u.role = "original";
    out.u.grid = grid;
    out.u.dt = dt;
    out.w.plant = PlantKind::transport;
    out.w.role = "target_w";
    out.w.grid = grid;
    out.w.dt = dt;

    GridFunction f_now = cls.in_domain.sample(grid, 0.0);
    GridFunction fw_now = target_state(f_now);
    detail::record_initial(out.u, u, cls.actuator_disturbance(0.0), f_now, dt);
    detail::record_initial(out.w, target_state(u), cls.actuator_disturbance(0.0), fw_now, dt);

    const int last = static_cast<int>(std::llround(t_final / dt));
    if (last < 1) throw ValidationError("run_closed_loop: t_final shorter than one step");

    for (int k = 1; k <= last; ++k) {
        const double t_prev = dt * static_cast<double>(k - 1);
        const double t = dt * static_cast<double>(k);
        GridFunction f_next = cls.in_domain.sample(grid, t);
        const double u_now_boundary = eval_control(u, t_prev);
        GridFunction predictor;
        GridFunction next;
        try {
            predictor =
                step_reaction(u, cls.plant, u_now_boundary, u_now_boundary, f_now, f_next, dt);
            const double u_next_boundary = eval_control(predictor, t);
            next = step_reaction(u, cls.plant, u_now_boundary, u_next_boundary, f_now, f_next, dt);
        } catch (const BlowUpError& e) {
            throw BlowUpError(std::string(e.what()) + " at t = " + std::to_string(t), t);
        }
        u = std::move(next);
        const double d_val = cls.actuator_disturbance(t);
        GridFunction fw_next = target_state(f_next);
        detail::record_step(out.u, u, k, t, d_val, f_next, dt, cls.disc.snapshot_stride, last);
        detail::record_step(out.w, target_state(u), k, t, d_val, fw_next, dt,
                            cls.disc.snapshot_stride, last);
        f_now = std::move(f_next);
    }
    out.u.final_state = u;
    out.w.final_state = target_state(u);
    return out;
}

/// Composite closed-loop verdict: the target-state envelope, the lifted
/// plant-state envelope with the constant from the solved kernels, and the
/// initial-norm bound ||w0||_H1 <= C ||u0||_H1 with C from max|k(x,x)|.
struct ClosedLoopVerdict {
    EnvelopeVerdict w_verdict;
    EnvelopeVerdict u_verdict;
    bool w0_norm_bound_ok = false;
    double w0_norm_constant = 0.0; ///< 1 + 2 max|k(x,x)|
    double lift_constant = 0.0;    ///< 1 + max|l|
};

inline ClosedLoopVerdict verify_closed_loop_iss(const TrajectoryRecord& u_traj,
                                                const TrajectoryRecord& w_traj,
                                                const VolterraKernel& kernel,
                                                const VolterraKernel& inverse, double p = 4.0,
                                                double tol_rel = 0.05, double tol_abs = 1e-6) {
    if (w_traj.times.size() != u_traj.times.size()) {
        throw DimensionError("verify_closed_loop_iss: trajectories disagree on times");
    }
    ClosedLoopVerdict out;
    out.w0_norm_constant = 1.0 + 2.0 * kernel.max_abs_diagonal();
    out.lift_constant = 1.0 + inverse.max_abs();

    EnvelopeParams w_prm;
    w_prm.mu = kernel.mu;
    w_prm.m = 0.0;
    w_prm.n = kernel.target_n;
    w_prm.p = p;
    w_prm.epsilon = kernel.mu; // unused by the max-gain envelope
    w_prm.u0_norms = w_traj.norm_series.front();
    out.w_verdict = verify(w_traj, TheoremId::T6i, w_prm, tol_rel, tol_abs);
    out.w_verdict.theorem_id = "CLw";

    const NormTriple u0n = u_traj.norm_series.front();
    out.w0_norm_bound_ok = w_prm.u0_norms.h1 <= out.w0_norm_constant * u0n.h1 * (1.0 + 1e-9);

    EnvelopeVerdict uv;
    uv.theorem_id = "CLu";
    uv.tol_rel = tol_rel;
    uv.tol_abs = tol_abs;
    uv.times = u_traj.times;
    const double rate = kernel.target_n + 2.0 * kernel.mu;
    const double gain = degiorgi_gain(p);
    uv.envelope_values.resize(u_traj.times.size());
    uv.observed_values.resize(u_traj.times.size());
    for (std::size_t i = 0; i < u_traj.times.size(); ++i) {
        const double t = u_traj.times[i];
        const RunningStats& st = w_traj.stats_series[i];
        uv.envelope_values[i] =
            out.lift_constant *
            (std::sqrt(2.0) * out.w0_norm_constant * u0n.h1 * std::exp(-rate * t) + st.sup_d +
             gain / kernel.mu * st.sup_f);
        uv.observed_values[i] = u_traj.norm_series[i].linf;
    }
    detail::finish_verdict(uv);
    out.u_verdict = std::move(uv);
    return out;
}

} // namespace isslab
