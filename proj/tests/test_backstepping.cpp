#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "isslab/backstepping.hpp"
#include "isslab/inequalities.hpp"

using namespace isslab;
using Catch::Approx;

namespace {

/// Closed-form kernel for a constant coefficient gap lambda = (n - a)/mu:
/// k(x,y) = -lambda y G(lambda (x^2 - y^2)) with
/// G(w) = sum_j w^j / (2^{2j+1} j! (j+1)!), the power series behind the
/// first-order modified Bessel profile I1(z)/z with z^2 = w.
double bessel_kernel(double lambda, double x, double y) {
    const double w = lambda * (x * x - y * y);
    double term = 0.5; // j = 0
    double sum = term;
    for (int j = 1; j < 60; ++j) {
        term *= w / (4.0 * j * (j + 1));
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return -lambda * y * sum;
}

double fitted_decay_rate(const TrajectoryRecord& rec, double t_lo, double t_hi) {
    auto value_at = [&](double t) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < rec.times.size(); ++i) {
            if (std::abs(rec.times[i] - t) < std::abs(rec.times[best] - t)) best = i;
        }
        return std::make_pair(rec.times[best], rec.norm_series[best].linf);
    };
    auto [ta, va] = value_at(t_lo);
    auto [tb, vb] = value_at(t_hi);
    return -(std::log(vb) - std::log(va)) / (tb - ta);
}

} // namespace

TEST_CASE("plant already at the target: kernel vanishes identically") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(1.5);
    auto k = solve_kernel(plant, 1.5, 64);
    REQUIRE(k.max_abs() == 0.0);
}

TEST_CASE("constant gap: diagonal trace is -lambda x / 2") {
    ReactionParams plant;
    plant.mu = 2.0;
    plant.a = SpaceProfile::constant(-1.0);
    const double target_n = 3.0;
    const double lambda = (target_n - (-1.0)) / 2.0; // = 2
    auto k = solve_kernel(plant, target_n, 64);
    for (int i = 0; i <= k.n_cells; ++i) {
        const double x = k.grid->nodes[static_cast<std::size_t>(i)];
        REQUIRE(k.at(i, i) == Approx(-lambda * x / 2.0).margin(1e-10));
    }
}

TEST_CASE("constant gap: successive approximation matches the series solution") {
    // lambda = 1: mu = 1, a = -0.5, target 0.5
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-0.5);
    auto k = solve_kernel(plant, 0.5, 128);
    double dev = 0.0;
    for (int i = 0; i <= k.n_cells; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double x = k.grid->nodes[static_cast<std::size_t>(i)];
            const double y = k.grid->nodes[static_cast<std::size_t>(j)];
            dev = std::max(dev, std::abs(k.at(i, j) - bessel_kernel(1.0, x, y)));
        }
    }
    INFO("max deviation from series solution: " << dev);
    REQUIRE(dev <= 1e-8);
}

TEST_CASE("kernel satisfies its hyperbolic equation to finite-difference accuracy") {
    auto residual_max = [](const VolterraKernel& k, const SpaceProfile& a) {
        const double h = k.grid->h;
        double worst = 0.0;
        for (int i = 2; i < k.n_cells; ++i) {
            for (int j = 1; j <= i - 2; ++j) {
                const double kxx = (k.at(i + 1, j) - 2.0 * k.at(i, j) + k.at(i - 1, j)) / (h * h);
                const double kyy = (k.at(i, j + 1) - 2.0 * k.at(i, j) + k.at(i, j - 1)) / (h * h);
                const double y = k.grid->nodes[static_cast<std::size_t>(j)];
                const double res = k.mu * (kxx - kyy) - (k.target_n - a(y)) * k.at(i, j);
                worst = std::max(worst, std::abs(res));
            }
        }
        return worst;
    };

    SECTION("unit gap at n_cells = 256") {
        ReactionParams plant;
        plant.mu = 1.0;
        plant.a = SpaceProfile::constant(-0.5);
        auto k = solve_kernel(plant, 0.5, 256);
        REQUIRE(residual_max(k, plant.a) <= 1e-6);
    }
    SECTION("destabilizing constant coefficient at n_cells = 512") {
        ReactionParams plant;
        plant.mu = 1.0;
        plant.a = SpaceProfile::constant(-1.0);
        auto k = solve_kernel(plant, 1.0, 512);
        REQUIRE(residual_max(k, plant.a) <= 1e-6);
    }
    SECTION("spatially varying coefficient at n_cells = 512") {
        ReactionParams plant;
        plant.mu = 1.0;
        plant.a = SpaceProfile::polynomial({-0.5, -0.25}); // -0.5 - 0.25 x
        auto k = solve_kernel(plant, 0.5, 512);
        REQUIRE(residual_max(k, plant.a) <= 1e-6);
        // trace against the exact integral of (n - a)
        for (int i = 0; i <= k.n_cells; ++i) {
            const double x = k.grid->nodes[static_cast<std::size_t>(i)];
            const double exact = -(x + 0.25 * x * x / 2.0) / 2.0;
            REQUIRE(k.at(i, i) == Approx(exact).margin(1e-6));
        }
    }
}

TEST_CASE("zero kernel inverts to the zero kernel") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(0.7);
    auto k = solve_kernel(plant, 0.7, 32);
    auto l = invert_kernel(k);
    REQUIRE(l.max_abs() == 0.0);
    REQUIRE(l.direction == VolterraKernel::Direction::inverse);
}

TEST_CASE("transform pair round trip on random smooth functions") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-1.0);
    auto k = solve_kernel(plant, 1.0, 256);
    auto l = invert_kernel(k);
    REQUIRE(l.max_abs() > 0.0);

    std::mt19937 rng(77);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_smooth_function(rng).sample(k.grid);
        auto back = transform_from_target(l, transform_to_target(k, f));
        for (int i = 0; i < f.size(); ++i) {
            worst = std::max(worst, std::abs(back[i] - f[i]));
        }
    }
    INFO("worst round-trip deviation: " << worst);
    REQUIRE(worst <= 1e-6);
}

TEST_CASE("feedback value: degenerate and quadrature-checked cases") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-0.5);
    auto k = solve_kernel(plant, 0.5, 128);

    auto zero_state = GridFunction::zeros(k.grid);
    REQUIRE(control_law(k, zero_state, 0.0) == 0.0);
    REQUIRE(control_law(k, zero_state, 0.37) == Approx(0.37));

    // mismatched resolutions resample the state onto the kernel grid
    auto coarse = GridFunction::sample(Grid::uniform(64),
                                       [](double y) { return std::sin(M_PI * y); });
    auto matched = GridFunction::sample(k.grid, [](double y) { return std::sin(M_PI * y); });
    REQUIRE(control_law(k, coarse, 0.0) == Approx(control_law(k, matched, 0.0)).margin(2e-4));

    ReactionParams flat;
    flat.mu = 1.0;
    flat.a = SpaceProfile::constant(0.5);
    auto k0 = solve_kernel(flat, 0.5, 128);
    auto state = GridFunction::sample(k.grid, [](double x) { return x * x; });
    REQUIRE(control_law(k0, state, 0.21) == Approx(0.21).margin(1e-15));

    // independent high-resolution quadrature of the series kernel against
    // the solved-kernel trapezoid value; the state has flat ends so both
    // quadratures are in their high-order regime
    auto smooth = GridFunction::sample(
        k.grid, [](double y) { return y * y * (1.0 - y) * (1.0 - y); });
    const double got = control_law(k, smooth, 0.0);
    const int fine = 1 << 14;
    double simpson = 0.0;
    for (int j = 0; j <= fine; ++j) {
        const double y = static_cast<double>(j) / fine;
        const double w = (j == 0 || j == fine) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        simpson += w * bessel_kernel(1.0, 1.0, y) * y * y * (1.0 - y) * (1.0 - y);
    }
    simpson /= 3.0 * fine;
    REQUIRE(got == Approx(simpson).margin(1e-8));
}

TEST_CASE("advection-shifted feedback") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-0.5);
    auto k = solve_kernel(plant, 0.5, 64);

    auto state = GridFunction::sample(k.grid, [](double x) { return std::sin(M_PI * x); });
    REQUIRE(control_law_shifted(k, state, 0.4, 0.0, 1.0) ==
            Approx(control_law(k, state, 0.4)).margin(1e-14));

    auto zero_state = GridFunction::zeros(k.grid);
    REQUIRE(control_law_shifted(k, zero_state, 1.0, 2.0, 1.0) ==
            Approx(std::exp(-1.0)).margin(1e-14));
}

TEST_CASE("closed loop: zero data stays at rest") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-1.0);
    ClosedLoopScenario cls;
    cls.plant = plant;
    cls.kernel = solve_kernel(plant, 1.0, 64);
    cls.disc.n_cells = 64;
    cls.disc.dt = 1e-3;
    auto out = run_closed_loop(cls, 0.2, 1e-3);
    for (const auto& nm : out.u.norm_series) REQUIRE(nm.linf == 0.0);
    for (const auto& nm : out.w.norm_series) REQUIRE(nm.linf == 0.0);
}

TEST_CASE("zero kernel closed loop reproduces the open-loop plant") {
    // plant already at the target: feedback degenerates to U = d
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(1.0);
    ClosedLoopScenario cls;
    cls.plant = plant;
    cls.kernel = solve_kernel(plant, 1.0, 80);
    cls.actuator_disturbance = BoundarySignal::sinusoid(0.2, 2.0);
    cls.u0 = SpaceProfile::sine_mode(0.5, 1);
    cls.disc.n_cells = 80;
    cls.disc.dt = 1e-3;
    auto out = run_closed_loop(cls, 0.5, 1e-3);

    Scenario open;
    open.plant = PlantKind::transport;
    open.transport = TransportParams{1.0, 0.0, 1.0};
    open.u0 = cls.u0;
    open.d = cls.actuator_disturbance;
    open.disc.n_cells = 80;
    open.disc.dt = 1e-3;
    open.disc.t_final = 0.5;
    auto ref = simulate(open);

    double dev = 0.0;
    for (int i = 0; i < out.u.final_state.size(); ++i) {
        dev = std::max(dev, std::abs(out.u.final_state[i] - ref.final_state[i]));
    }
    REQUIRE(dev <= 1e-12);
}

TEST_CASE("stabilized loop: decay rate and target-system fidelity") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-1.0);
    const double target_n = 1.0;
    const int cells = 128;
    ClosedLoopScenario cls;
    cls.plant = plant;
    cls.kernel = solve_kernel(plant, target_n, cells);
    cls.u0 = SpaceProfile::sine_mode(1.0, 1);
    cls.disc.n_cells = cells;
    cls.disc.dt = 1e-3;
    cls.disc.snapshot_stride = 1;
    auto out = run_closed_loop(cls, 1.0, 1e-3);

    // fitted decay of max|u| clears 90% of the guaranteed rate n + 2 mu
    const double rate = fitted_decay_rate(out.u, 0.1, 0.6);
    INFO("fitted closed-loop decay rate: " << rate);
    REQUIRE(rate >= 0.9 * (target_n + 2.0 * plant.mu));

    // the recorded transformed state satisfies the target dynamics:
    // residual of w_t - mu w_xx + n w = 0 within 10x the scheme truncation
    // measured on the exact first target mode at the same resolution.
    // The initial feedback jump at the (x,t) = (1,0) corner is a data
    // artifact, not a fidelity defect, so measurement starts after a
    // settle window.
    const double h = out.w.grid->h;
    const double dt = out.w.dt;
    const int settle = 200;
    const int upto = 400;
    auto d2 = [&](const GridFunction& f, int i) {
        return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
    };
    double worst = 0.0;
    for (std::size_t s = settle; s + 1 < std::min<std::size_t>(out.w.snapshots.size(), upto);
         ++s) {
        const auto& prev = out.w.snapshots[s - 1];
        const auto& cur = out.w.snapshots[s];
        const auto& next = out.w.snapshots[s + 1];
        for (int i = 1; i < cur.size() - 1; ++i) {
            const double res =
                (next[i] - prev[i]) / (2.0 * dt) - plant.mu * d2(cur, i) + target_n * cur[i];
            worst = std::max(worst, std::abs(res));
        }
    }
    // reference truncation: same stencil on the exact target mode over the
    // same time window
    const double mode_rate = plant.mu * M_PI * M_PI + target_n;
    double ref_trunc = 0.0;
    auto g = out.w.grid;
    for (int s = settle; s < upto; ++s) {
        const double t = dt * s;
        for (int i = 1; i < g->n_nodes() - 1; ++i) {
            const double x = g->nodes[static_cast<std::size_t>(i)];
            const double w_exact = std::sin(M_PI * x);
            const double dt_term = w_exact * std::exp(-mode_rate * t) *
                                   (std::exp(-mode_rate * dt) - std::exp(mode_rate * dt)) /
                                   (2.0 * dt);
            const double xx_term =
                std::exp(-mode_rate * t) *
                (std::sin(M_PI * (x + h)) - 2.0 * std::sin(M_PI * x) + std::sin(M_PI * (x - h))) /
                (h * h);
            const double res = dt_term - plant.mu * xx_term +
                               target_n * w_exact * std::exp(-mode_rate * t);
            ref_trunc = std::max(ref_trunc, std::abs(res));
        }
    }
    INFO("target residual " << worst << " vs reference truncation " << ref_trunc);
    REQUIRE(worst <= 10.0 * ref_trunc);
}

TEST_CASE("disturbed loop satisfies the lifted estimates") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-1.0);
    const double target_n = 1.0;
    const int cells = 128;
    ClosedLoopScenario cls;
    cls.plant = plant;
    cls.kernel = solve_kernel(plant, target_n, cells);
    cls.actuator_disturbance = BoundarySignal::sinusoid(0.05, 1.0);
    cls.u0 = SpaceProfile::sine_mode(0.5, 1);
    cls.disc.n_cells = cells;
    cls.disc.dt = 1e-3;
    cls.disc.snapshot_stride = 10;
    auto out = run_closed_loop(cls, 3.0, 1e-3);

    auto inverse = invert_kernel(cls.kernel);
    auto verdict = verify_closed_loop_iss(out.u, out.w, cls.kernel, inverse, 4.0, 0.05);
    REQUIRE(verdict.w_verdict.pass);
    REQUIRE(verdict.u_verdict.pass);
    REQUIRE(verdict.w0_norm_bound_ok);
    REQUIRE(verdict.lift_constant >= 1.0);

    // late-time level settles below the disturbance gain C sup|d|
    double late_max = 0.0;
    for (std::size_t i = 0; i < out.u.times.size(); ++i) {
        if (out.u.times[i] >= 2.0) late_max = std::max(late_max, out.u.norm_series[i].linf);
    }
    REQUIRE(late_max <= verdict.lift_constant * 0.05 * 1.05 + 1e-6);
}

TEST_CASE("shifted loop stabilizes the advection plant through its companion") {
    // plant u_t - mu u_xx + m u_x + n_plant u = 0; the advection-free
    // companion v = e^{-m x/(2 mu)} u has constant reaction
    // m^2/(4 mu) + n_plant, and the kernel is designed for that companion
    const double mu = 1.0;
    const double m = 1.0;
    const double n_plant = -2.0;
    const double companion_n = m * m / (4.0 * mu) + n_plant; // -1.75
    const double target_n = 3.0;
    const int cells = 100;

    ReactionParams plant;
    plant.mu = mu;
    plant.m = m;
    plant.a = SpaceProfile::constant(n_plant);

    ReactionParams companion;
    companion.mu = mu;
    companion.a = SpaceProfile::constant(companion_n);

    ClosedLoopScenario cls;
    cls.plant = plant;
    cls.kernel = solve_kernel(companion, target_n, cells);
    cls.u0 = SpaceProfile::sine_mode(1.0, 1);
    cls.disc.n_cells = cells;
    cls.disc.dt = 5e-4;
    cls.disc.snapshot_stride = 10;
    auto out = run_closed_loop(cls, 1.0, 5e-4);

    const double rate = fitted_decay_rate(out.u, 0.1, 0.6);
    INFO("fitted shifted-loop decay rate: " << rate);
    REQUIRE(rate >= 0.9 * (target_n + 2.0 * mu));

    // the recorded transformed state is pinned to (0, d) = (0, 0); the
    // right end lags by the one-step feedback correction, so it is checked
    // relative to the state magnitude. The t = 0 snapshot carries the
    // unavoidable initial-data/feedback mismatch and is exempt.
    for (std::size_t s = 1; s < out.w.snapshots.size(); ++s) {
        const auto& snap = out.w.snapshots[s];
        REQUIRE(std::abs(snap[0]) <= 1e-9);
        REQUIRE(std::abs(snap[snap.size() - 1]) <= 1e-3 * snap.max_abs() + 1e-12);
    }
}

TEST_CASE("closed-loop scenario validation") {
    ReactionParams plant;
    plant.mu = 1.0;
    plant.a = SpaceProfile::constant(-1.0);
    ClosedLoopScenario cls;
    cls.plant = plant;
    cls.kernel = solve_kernel(plant, 1.0, 32);
    cls.disc.n_cells = 64; // mismatch with the kernel resolution
    REQUIRE_THROWS_AS(run_closed_loop(cls, 1.0, 1e-3), ValidationError);
}
