// Acceptance suite: every release criterion as one pass/fail line.
// Usage: acceptance <path-to-cli-binary>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "isslab/backstepping.hpp"
#include "isslab/degiorgi.hpp"
#include "isslab/inequalities.hpp"
#include "isslab/runner.hpp"
#include "isslab/transforms.hpp"

using namespace isslab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& label, bool pass, const std::string& detail = "") {
    std::printf("criterion %2d  %-4s  %s%s%s\n", index, pass ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double l2_error_vs(const GridFunction& u, const std::function<double(double)>& exact) {
    auto diff = u;
    for (int i = 0; i < u.size(); ++i) {
        diff[i] = u[i] - exact(u.grid->nodes[static_cast<std::size_t>(i)]);
    }
    return l2_norm(diff);
}

// ---------------------------------------------------------------- C1
bool convergence_orders(std::string& detail) {
    const double mu = 1.0;
    const double m = 0.5;
    const double n = 0.3;
    double terr[3];
    double berr[3];
    int idx = 0;
    for (int cells : {50, 100, 200}) {
        Scenario s;
        s.plant = PlantKind::transport;
        s.transport = TransportParams{mu, m, n};
        s.disc.n_cells = cells;
        s.disc.dt = 1.0 / cells;
        s.disc.t_final = 1.0;
        s.u0 = SpaceProfile::from_function([](double x) { return std::sin(M_PI * x); });
        s.f = FieldSignal::from_function([=](double x, double t) {
            const double e = std::exp(-t);
            return e * ((-1.0 + mu * M_PI * M_PI + n) * std::sin(M_PI * x) +
                        m * M_PI * std::cos(M_PI * x));
        });
        const double et = std::exp(-1.0);
        terr[idx] = l2_error_vs(simulate(s).final_state,
                                [&](double x) { return et * std::sin(M_PI * x); });

        Scenario b;
        b.plant = PlantKind::burgers;
        b.burgers = BurgersParams{1.0, 1.0};
        b.disc.n_cells = cells;
        b.disc.dt = 1.0 / cells;
        b.disc.t_final = 1.0;
        b.u0 = SpaceProfile::from_function([](double x) { return x * (1.0 - x); });
        b.f = FieldSignal::from_function([](double x, double t) {
            const double e = std::exp(-t);
            return -e * x * (1.0 - x) + 2.0 * e + e * e * x * (1.0 - x) * (1.0 - 2.0 * x);
        });
        berr[idx] = l2_error_vs(simulate(b).final_state,
                                [&](double x) { return et * x * (1.0 - x); });
        ++idx;
    }
    const double t_order = std::log2(terr[0] / terr[2]) / 2.0;
    const double b_order = std::log2(berr[0] / berr[2]) / 2.0;
    std::ostringstream os;
    os << "transport order " << t_order << ", convection order " << b_order;
    detail = os.str();
    return t_order >= 1.8 && b_order >= 1.5;
}

// ---------------------------------------------------------------- C2
bool superposition_battery(std::string& detail) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        Scenario s;
        s.plant = PlantKind::transport;
        s.transport = TransportParams{0.5 + 1.5 * u01(rng), 4.0 * u01(rng) - 2.0,
                                      2.5 * u01(rng) - 0.5};
        const int modes = 1 + static_cast<int>(3.0 * u01(rng));
        std::vector<double> coeffs;
        for (int k = 0; k < modes; ++k) coeffs.push_back(2.0 * u01(rng) - 1.0);
        s.u0 = SpaceProfile::from_function([coeffs](double x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                acc += coeffs[k] * std::sin((k + 1) * M_PI * x);
            }
            return acc;
        });
        s.d = BoundarySignal::sinusoid(0.6 * u01(rng) - 0.3, 0.5 + 2.5 * u01(rng));
        s.f = FieldSignal::separable(SpaceProfile::sine_mode(0.5 * u01(rng), 1 + trial % 3),
                                     BoundarySignal::sinusoid(1.0, 0.5 + 2.0 * u01(rng)));
        s.disc.n_cells = 100;
        s.disc.dt = 1e-3;
        s.disc.t_final = 1.0;
        s.disc.snapshot_stride = 100;
        auto original = simulate(s);
        auto parts = simulate_split(s);
        worst = std::max(worst, verify_superposition(original, parts.w, parts.v));
    }
    std::ostringstream os;
    os << "worst node-wise deviation " << worst;
    detail = os.str();
    return worst <= 1e-9;
}

// ---------------------------------------------------------------- C3 + C4 transport sweep
struct SweepOutcome {
    bool full_plant_ok = true;
    bool subsystems_ok = true;
    double worst_excess_full = -1.0;
    double worst_excess_sub = -1.0;
};

SweepOutcome transport_sweep() {
    SweepOutcome out;
    for (double m : {-2.0, 0.0, 2.0}) {
        for (double n : {0.0, 1.0, 2.0}) {
            for (double amp : {0.0, 0.1, 0.5}) {
                Scenario s;
                s.plant = PlantKind::transport;
                s.transport = TransportParams{1.0, m, n};
                s.u0 = SpaceProfile::sine_mode(1.0, 1);
                s.d = BoundarySignal::sinusoid(amp, 2.0);
                s.f = FieldSignal::separable(SpaceProfile::sine_mode(amp, 2),
                                             BoundarySignal::sinusoid(1.0, 3.0));
                s.disc.n_cells = 200;
                s.disc.dt = 1e-3;
                s.disc.t_final = 5.0;
                s.disc.snapshot_stride = 50;
                s.verification.p = 4.0;
                if (!s.transport.stability_margin_ok()) continue;

                auto rec = simulate(s);
                HypothesisContext ctx;
                ctx.sup_d_signal = s.d.sup_all_time();
                ctx.sup_f_signal = s.f.sup_all_time();

                EnvelopeParams prm = envelope_params_for(s, TheoremId::T6i,
                                                         rec.norm_series.front());
                auto v6i = verify(rec, TheoremId::T6i, prm, 0.02, 1e-6, ctx);
                prm.epsilon = default_epsilon(s, TheoremId::T6ii);
                auto v6ii = verify(rec, TheoremId::T6ii, prm, 0.02, 1e-6, ctx);
                out.full_plant_ok = out.full_plant_ok && v6i.pass && v6ii.pass;
                out.worst_excess_full = std::max({out.worst_excess_full,
                                                  v6i.max_excess_over_allowance,
                                                  v6ii.max_excess_over_allowance});

                auto parts = simulate_split(s);
                EnvelopeParams wprm = envelope_params_for(s, TheoremId::T7,
                                                          parts.w.norm_series.front());
                auto v7 = verify(parts.w, TheoremId::T7, wprm, 0.02, 1e-6, ctx);
                auto v7x = verify(parts.w, TheoremId::T7x, wprm, 0.02, 1e-6, ctx);
                auto v8 = verify(parts.w, TheoremId::T8, wprm, 0.02, 1e-6, ctx);
                EnvelopeParams vprm = envelope_params_for(s, TheoremId::T9,
                                                          parts.v.norm_series.front());
                auto v9 = verify(parts.v, TheoremId::T9, vprm, 0.02, 1e-6, ctx);
                out.subsystems_ok =
                    out.subsystems_ok && v7.pass && v7x.pass && v8.pass && v9.pass;
                out.worst_excess_sub = std::max(
                    {out.worst_excess_sub, v7.max_excess_over_allowance,
                     v7x.max_excess_over_allowance, v8.max_excess_over_allowance,
                     v9.max_excess_over_allowance});
            }
        }
    }
    return out;
}

bool burgers_subsystem_sweep(std::string& detail) {
    bool ok = true;
    double worst = -1.0;
    for (double amp : {0.1, 0.2}) { // = {0.2, 0.4} * (mu/nu)
        for (double famp : {0.0, 0.02}) {
            Scenario s;
            s.plant = PlantKind::burgers;
            s.burgers = BurgersParams{1.0, 2.0};
            s.u0 = SpaceProfile::sine_mode(0.3, 1);
            s.d = BoundarySignal::sinusoid(amp, 2.0);
            s.f = FieldSignal::separable(SpaceProfile::sine_mode(famp, 1),
                                         BoundarySignal::sinusoid(1.0, 3.0));
            s.disc.n_cells = 200;
            s.disc.dt = 1e-3;
            s.disc.t_final = 5.0;
            s.disc.snapshot_stride = 50;

            HypothesisContext ctx;
            ctx.sup_d_signal = s.d.sup_all_time();
            ctx.sup_f_signal = s.f.sup_all_time();

            // arrangement with f on the homogeneous part: T12 and T13
            auto parts_i = simulate_split(s, FPlacement::homogeneous_subsystem);
            EnvelopeParams p12 = envelope_params_for(s, TheoremId::T12,
                                                     parts_i.v.norm_series.front());
            auto v12 = verify(parts_i.v, TheoremId::T12, p12, 0.02, 1e-6, ctx);
            EnvelopeParams p13 = envelope_params_for(s, TheoremId::T13,
                                                     parts_i.w.norm_series.front());
            auto v13 = verify(parts_i.w, TheoremId::T13, p13, 0.02, 1e-6, ctx);

            // arrangement with f on the boundary part: T15 and T16
            auto parts_ii = simulate_split(s, FPlacement::boundary_subsystem);
            EnvelopeParams p15 = envelope_params_for(s, TheoremId::T15,
                                                     parts_ii.v.norm_series.front());
            auto v15 = verify(parts_ii.v, TheoremId::T15, p15, 0.02, 1e-6, ctx);
            EnvelopeParams p16 = envelope_params_for(s, TheoremId::T16,
                                                     parts_ii.w.norm_series.front());
            auto v16 = verify(parts_ii.w, TheoremId::T16, p16, 0.02, 1e-6, ctx);

            for (const auto& v : {v12, v13, v15, v16}) {
                ok = ok && v.hypothesis_met && v.pass;
                worst = std::max(worst, v.max_excess_over_allowance);
            }
        }
    }
    std::ostringstream os;
    os << "worst allowance excess " << worst;
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- C5
bool degiorgi_conclusion(std::string& detail) {
    if (degiorgi_gain(4.0) != 8.0) {
        detail = "gain constant at p=4 is not exactly 8";
        return false;
    }
    bool ok = true;
    std::ostringstream os;
    for (auto [m, n] : std::vector<std::pair<double, double>>{{-1.0, 0.5}, {0.0, 0.0}, {2.0, 1.0}}) {
        Scenario s;
        s.plant = PlantKind::transport;
        s.transport = TransportParams{1.0, m, n};
        s.u0 = SpaceProfile::sine_mode(0.5, 1);
        s.d = BoundarySignal::sinusoid(0.1, 2.0);
        s.f = FieldSignal::separable(SpaceProfile::sine_mode(0.05, 1),
                                     BoundarySignal::sinusoid(1.0, 3.0));
        s.disc.n_cells = 200;
        s.disc.dt = 1e-3;
        s.disc.t_final = 2.0;
        s.verification.p = 4.0;

        auto analysis = degiorgi_analyze(s);
        const bool vanish_up = analysis.phi_at_gain_upper <= analysis.scan_upper.cell + 1e-15;
        const bool vanish_low = analysis.phi_at_gain_lower <= analysis.scan_lower.cell + 1e-15;

        auto parts = simulate_split(s);
        EnvelopeParams prm = envelope_params_for(s, TheoremId::T9,
                                                 parts.v.norm_series.front());
        HypothesisContext ctx;
        ctx.sup_d_signal = s.d.sup_all_time();
        ctx.sup_f_signal = s.f.sup_all_time();
        auto v9 = verify(parts.v, TheoremId::T9, prm, 0.02, 1e-6, ctx);

        ok = ok && vanish_up && vanish_low && v9.hypothesis_met && v9.pass;
        os << "[m=" << m << " phi_gain=" << analysis.phi_at_gain_upper << "]";
    }
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- C6
bool iteration_arithmetic(std::string& detail) {
    if (iteration_jump(2.0, 2.0, 1.0, 1.0) != 4.0) {
        detail = "reference jump is not exactly 4";
        return false;
    }
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = 0.5 + 3.0 * u01(rng);
        const double beta = 1.001 + 3.0 * u01(rng);
        const double M = 5.0 * u01(rng);
        const double phi0 = 1e-3 + u01(rng);
        const long double ref =
            static_cast<long double>(M) *
            std::exp((static_cast<long double>(beta) / (beta - 1.0L)) * std::log(2.0L) +
                     ((static_cast<long double>(beta) - 1.0L) / alpha) *
                         std::log(static_cast<long double>(phi0)));
        const double got = iteration_jump(alpha, beta, M, phi0);
        if (ref != 0.0L) {
            worst_rel = std::max(worst_rel,
                                 std::abs(static_cast<double>((got - ref) / ref)));
        }
    }
    std::ostringstream os;
    os << "worst relative deviation " << worst_rel;
    detail = os.str();
    return worst_rel <= 1e-12;
}

// ---------------------------------------------------------------- C7
bool burgers_hypothesis_boundary(std::string& detail) {
    auto make = [](double amp) {
        Scenario s;
        s.plant = PlantKind::burgers;
        s.burgers = BurgersParams{1.0, 2.0};
        s.u0 = SpaceProfile::sine_mode(0.2, 1);
        s.d = BoundarySignal::sinusoid(amp, 2.0);
        s.disc.n_cells = 200;
        s.disc.dt = 1e-3;
        s.disc.t_final = 5.0;
        s.verification.theorems = {"T11i"};
        return s;
    };
    RunOptions quiet;
    quiet.out_dir.clear();

    auto inside = run(make(0.45), quiet);
    const bool inside_ok = inside.verdicts.size() == 1 && inside.verdicts[0].hypothesis_met &&
                           inside.verdicts[0].pass;

    auto outside = run(make(0.6), quiet);
    const bool outside_flagged =
        outside.verdicts.size() == 1 && !outside.verdicts[0].hypothesis_met &&
        !outside.any_claimed_failure();

    detail = std::string("inside ") + (inside_ok ? "pass" : "FAIL") + ", outside " +
             (outside_flagged ? "flagged hypothesis-not-met" : "NOT flagged");
    return inside_ok && outside_flagged;
}

// ---------------------------------------------------------------- C8
bool backstepping_suite(std::string& detail) {
    std::ostringstream os;
    bool ok = true;

    // (a) series-solution agreement at n_cells = 128
    auto series_kernel = [](double lambda, double x, double y) {
        const double w = lambda * (x * x - y * y);
        double term = 0.5;
        double sum = term;
        for (int j = 1; j < 60; ++j) {
            term *= w / (4.0 * j * (j + 1));
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return -lambda * y * sum;
    };
    ReactionParams unit_gap;
    unit_gap.mu = 1.0;
    unit_gap.a = SpaceProfile::constant(-0.5);
    auto k_unit = solve_kernel(unit_gap, 0.5, 128);
    double bessel_dev = 0.0;
    for (int i = 0; i <= k_unit.n_cells; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double x = k_unit.grid->nodes[static_cast<std::size_t>(i)];
            const double y = k_unit.grid->nodes[static_cast<std::size_t>(j)];
            bessel_dev = std::max(bessel_dev,
                                  std::abs(k_unit.at(i, j) - series_kernel(1.0, x, y)));
        }
    }
    ok = ok && bessel_dev <= 1e-8;
    os << "series dev " << bessel_dev;

    // (b) round trip through the kernel pair
    ReactionParams anti;
    anti.mu = 1.0;
    anti.a = SpaceProfile::constant(-1.0);
    auto k = solve_kernel(anti, 1.0, 256);
    auto l = invert_kernel(k);
    std::mt19937 rng(7);
    double round_dev = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_smooth_function(rng).sample(k.grid);
        auto back = transform_from_target(l, transform_to_target(k, f));
        for (int i = 0; i < f.size(); ++i) {
            round_dev = std::max(round_dev, std::abs(back[i] - f[i]));
        }
    }
    ok = ok && round_dev <= 1e-6;
    os << ", round trip " << round_dev;

    // (c) stabilized decay rate
    const int cells = 128;
    auto k_loop = solve_kernel(anti, 1.0, cells);
    ClosedLoopScenario cls;
    cls.plant = anti;
    cls.kernel = k_loop;
    cls.u0 = SpaceProfile::sine_mode(1.0, 1);
    cls.disc.n_cells = cells;
    cls.disc.dt = 1e-3;
    cls.disc.snapshot_stride = 10;
    auto out = run_closed_loop(cls, 1.0, 1e-3);
    auto nearest = [&](double t) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < out.u.times.size(); ++i) {
            if (std::abs(out.u.times[i] - t) < std::abs(out.u.times[best] - t)) best = i;
        }
        return best;
    };
    const std::size_t i0 = nearest(0.1);
    const std::size_t i1 = nearest(0.6);
    const double rate = -(std::log(out.u.norm_series[i1].linf) -
                          std::log(out.u.norm_series[i0].linf)) /
                        (out.u.times[i1] - out.u.times[i0]);
    ok = ok && rate >= 0.9 * 3.0;
    os << ", decay rate " << rate;

    // (d) disturbed loop against the lifted estimate, 5% tolerance
    ClosedLoopScenario dist = cls;
    dist.actuator_disturbance = BoundarySignal::sinusoid(0.05, 1.0);
    dist.u0 = SpaceProfile::sine_mode(0.5, 1);
    auto loop = run_closed_loop(dist, 3.0, 1e-3);
    auto l_loop = invert_kernel(k_loop);
    auto verdict = verify_closed_loop_iss(loop.u, loop.w, k_loop, l_loop, 4.0, 0.05);
    ok = ok && verdict.w_verdict.pass && verdict.u_verdict.pass && verdict.w0_norm_bound_ok;
    os << ", lifted estimate " << (verdict.u_verdict.pass ? "pass" : "FAIL");

    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- C9
bool inequality_battery(std::string& detail) {
    const auto res = run_inequality_battery(424242, 1000);
    std::ostringstream os;
    os << res.trials << " trials, " << res.total_failures() << " failures, "
       << res.refined_rechecks << " rechecks";
    detail = os.str();
    return res.total_failures() == 0;
}

// ---------------------------------------------------------------- C10
int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool determinism_and_exit_codes(const std::string& cli, std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "isslab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    {
        std::ofstream cfg(dir / "scn.ini");
        cfg << "[scenario]\nname = det\nplant = transport\n\n[transport]\nmu = 1\nn = 1\n\n"
               "[u0]\nkind = sine_mode\namplitude = 1\nmode = 1\n\n"
               "[d]\nkind = sinusoid\namplitude = 0.2\nfrequency = 2\n\n"
               "[discretization]\nn_cells = 100\ndt = 1e-3\nt_final = 1\n\n"
               "[verification]\ntheorems = T6i\n";
    }
    bool ok = true;
    std::ostringstream os;

    const int r1 = run_cli(cli, "verify --config " + (dir / "scn.ini").string() + " --out " +
                                    (dir / "a").string());
    const int r2 = run_cli(cli, "verify --config " + (dir / "scn.ini").string() + " --out " +
                                    (dir / "b").string());
    const bool identical = r1 == 0 && r2 == 0 &&
                           slurp(dir / "a" / "det_trajectory.csv") ==
                               slurp(dir / "b" / "det_trajectory.csv") &&
                           !slurp(dir / "a" / "det_trajectory.csv").empty();
    ok = ok && identical;
    os << "byte-identical " << (identical ? "yes" : "NO");

    {
        std::ofstream cfg(dir / "bad.ini");
        cfg << "[scenario]\nplant = transport\n\n[transport]\nmu = -1\n";
    }
    const int code2 = run_cli(cli, "verify --config " + (dir / "bad.ini").string());
    ok = ok && code2 == 2;
    os << ", config-error code " << code2;

    {
        std::ofstream cfg(dir / "cfl.ini");
        cfg << "[scenario]\nplant = burgers\n\n[burgers]\nmu = 1\nnu = 5\n\n"
               "[u0]\nkind = sine_mode\namplitude = 1\nmode = 1\n\n"
               "[discretization]\nn_cells = 50\ndt = 0.05\nt_final = 1\n";
    }
    const int code3 = run_cli(cli, "simulate --config " + (dir / "cfl.ini").string());
    ok = ok && code3 == 3;
    os << ", solver-error code " << code3;

    {
        std::ofstream cfg(dir / "fail.ini");
        cfg << "[scenario]\nplant = burgers\n\n[burgers]\nmu = 1\nnu = 1\n\n"
               "[u0]\nkind = sine_mode\namplitude = 1\nmode = 1\n\n"
               "[discretization]\nn_cells = 50\ndt = 1e-3\nt_final = 0.5\n\n"
               "[verification]\ntheorems = T12\nsubsystem_mode = original\n";
    }
    const int code4 = run_cli(cli, "verify --config " + (dir / "fail.ini").string());
    ok = ok && code4 == 4;
    os << ", verdict-failure code " << code4;

    detail = os.str();
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <cli-binary>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const auto t0 = std::chrono::steady_clock::now();

    std::string detail;

    detail.clear();
    report(1, "manufactured-solution convergence", convergence_orders(detail), detail);

    detail.clear();
    report(2, "split superposition", superposition_battery(detail), detail);

    auto sweep = transport_sweep();
    {
        std::ostringstream os;
        os << "worst allowance excess " << sweep.worst_excess_full;
        report(3, "full-plant envelope soundness sweep", sweep.full_plant_ok, os.str());
    }
    {
        std::ostringstream os;
        os << "worst allowance excess " << sweep.worst_excess_sub;
        std::string burgers_detail;
        const bool burgers_ok = burgers_subsystem_sweep(burgers_detail);
        report(4, "subsystem envelopes (transport sweep + convection sweep)",
               sweep.subsystems_ok && burgers_ok, os.str() + "; " + burgers_detail);
    }

    detail.clear();
    report(5, "level-set vanishing at the certified level", degiorgi_conclusion(detail), detail);

    detail.clear();
    report(6, "iteration-jump arithmetic", iteration_arithmetic(detail), detail);

    detail.clear();
    report(7, "convection smallness-hypothesis boundary", burgers_hypothesis_boundary(detail),
           detail);

    detail.clear();
    report(8, "boundary-feedback suite", backstepping_suite(detail), detail);

    detail.clear();
    report(9, "randomized inequality battery", inequality_battery(detail), detail);

    detail.clear();
    report(10, "determinism and exit codes", determinism_and_exit_codes(cli, detail), detail);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
