#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "isslab/backstepping.hpp"
#include "isslab/config.hpp"
#include "isslab/degiorgi.hpp"
#include "isslab/envelopes.hpp"
#include "isslab/errors.hpp"
#include "isslab/scenario.hpp"
#include "isslab/solvers.hpp"
#include "isslab/transforms.hpp"

namespace isslab {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

/// Midpoint of the admissible epsilon interval for estimates that take one.
inline double default_epsilon(const Scenario& s, TheoremId id) {
    switch (id) {
    case TheoremId::T6ii: {
        EnvelopeParams prm;
        prm.mu = s.transport.mu;
        prm.m = s.transport.m;
        prm.n = s.transport.n;
        return 0.5 * prm.transport_epsilon_upper();
    }
    case TheoremId::T11i:
    case TheoremId::T13:
        return 0.5 * s.burgers.mu;
    default:
        return 0.5 * s.mu();
    }
}

inline EnvelopeParams envelope_params_for(const Scenario& s, TheoremId id,
                                          const NormTriple& u0_norms) {
    EnvelopeParams prm;
    prm.p = s.verification.p;
    prm.u0_norms = u0_norms;
    if (theorem_plant(id) == PlantKind::transport) {
        prm.mu = s.transport.mu;
        prm.m = s.transport.m;
        prm.n = s.transport.n;
    } else {
        prm.mu = s.burgers.mu;
        prm.nu = s.burgers.nu;
    }
    prm.epsilon = s.verification.epsilon.value_or(default_epsilon(s, id));
    return prm;
}

/// Level-set analysis of the boundary-driven transport subsystem in its
/// advection-free frame, upper and lower sides.
struct DeGiorgiAnalysis {
    LevelSetScan scan_upper;
    LevelSetScan scan_lower;
    IterationWitness witness_upper;
    IterationWitness witness_lower;
    IterationReport report_upper;
    IterationReport report_lower;
    double observed_max = 0.0;     ///< max of the weighted subsystem state
    double observed_min = 0.0;     ///< min of the weighted subsystem state
    double gain_level_upper = 0.0; ///< k0 + (1/mu) 2^{(5p-8)/(2p-4)} sup|f~|
    double gain_level_lower = 0.0;
    double phi_at_gain_upper = 0.0;
    double phi_at_gain_lower = 0.0;
};

/// Simulate the boundary-driven subsystem of a transport scenario at full
/// snapshot resolution, weight it into the advection-free frame, and run
/// the level-set iteration checks on both signs.
inline DeGiorgiAnalysis degiorgi_analyze(const Scenario& s) {
    if (s.plant != PlantKind::transport) {
        throw ValidationError("degiorgi_analyze: transport scenarios only");
    }
    SplitPair pair = split(s, FPlacement::boundary_subsystem);
    Scenario v_scn = pair.subsystem_v;
    v_scn.disc.snapshot_stride = 1;
    TrajectoryRecord v_rec = simulate(v_scn);

    const double mu = s.transport.mu;
    const double m = s.transport.m;
    const double p = s.verification.p;
    // multiplying by e^{-m x/(2 mu)} removes the advection term and shifts
    // the reaction coefficient to m^2/(4 mu) + n
    const ExpTransform weight{m, mu, ExpTransform::Direction::inverse};
    const double boundary_weight = std::exp(-m / (2.0 * mu)); // weight at x = 1

    // weighted snapshots and disturbance extremes
    TrajectoryRecord tilde = v_rec;
    for (auto& snap : tilde.snapshots) snap = exp_transform(snap, weight);

    double sup_d_signed = -std::numeric_limits<double>::infinity();
    double inf_d_signed = std::numeric_limits<double>::infinity();
    double sup_f_tilde = 0.0;
    for (std::size_t i = 0; i < v_rec.times.size(); ++i) {
        const double t = v_rec.times[i];
        const double dtil = boundary_weight * s.d(t);
        sup_d_signed = std::max(sup_d_signed, dtil);
        inf_d_signed = std::min(inf_d_signed, dtil);
        const GridFunction ftil = exp_transform(s.f.sample(v_rec.grid, t), weight);
        sup_f_tilde = std::max(sup_f_tilde, ftil.max_abs());
    }

    DeGiorgiAnalysis out;
    double obs_max = -std::numeric_limits<double>::infinity();
    double obs_min = std::numeric_limits<double>::infinity();
    for (const auto& snap : tilde.snapshots) {
        for (double v : snap.values) {
            obs_max = std::max(obs_max, v);
            obs_min = std::min(obs_min, v);
        }
    }
    out.observed_max = obs_max;
    out.observed_min = obs_min;

    const double gain_jump = degiorgi_gain(p) / mu * sup_f_tilde;
    const double lemma_span = 2.0 * gain_jump; // = 2^{b/(b-1)} M with phi(k0) <= 1

    // upper side
    {
        const double k0 = std::max(sup_d_signed, 0.0);
        const auto levels = default_levels(k0, 1.5 * std::max(lemma_span, 1e-12));
        out.scan_upper = scan_levels(tilde, levels);
        out.witness_upper =
            subsystem_witness(mu, p, sup_d_signed, sup_f_tilde, out.scan_upper.phi.front());
        out.report_upper = check_iteration_lemma(out.scan_upper, out.witness_upper);
        out.gain_level_upper = k0 + gain_jump;
        out.phi_at_gain_upper = out.scan_upper.phi_at_level_nearest(out.gain_level_upper);
    }
    // lower side: scan -v~ whose boundary data is -d~
    {
        TrajectoryRecord mirrored = tilde;
        for (auto& snap : mirrored.snapshots)
            for (auto& v : snap.values) v = -v;
        const double k0 = std::max(-inf_d_signed, 0.0);
        const auto levels = default_levels(k0, 1.5 * std::max(lemma_span, 1e-12));
        out.scan_lower = scan_levels(mirrored, levels);
        out.witness_lower =
            subsystem_witness(mu, p, -inf_d_signed, sup_f_tilde, out.scan_lower.phi.front());
        out.report_lower = check_iteration_lemma(out.scan_lower, out.witness_lower);
        out.gain_level_lower = k0 + gain_jump;
        out.phi_at_gain_lower = out.scan_lower.phi_at_level_nearest(out.gain_level_lower);
    }
    return out;
}

struct RunOptions {
    std::string out_dir;                        ///< empty: no files written
    std::vector<std::string> theorem_override;  ///< replaces the scenario's list
    int jobs = 1;
};

/// Everything one run produced: verdicts, flags, trajectories, file paths.
struct RunReport {
    std::string scenario_name;
    std::vector<EnvelopeVerdict> verdicts;
    std::vector<std::string> verdict_trajectories; ///< parallel to verdicts
    std::vector<std::string> hypothesis_flags;
    std::optional<DeGiorgiAnalysis> degiorgi;
    std::optional<ClosedLoopVerdict> closed_loop;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;

    bool any_claimed_failure() const {
        for (const auto& v : verdicts) {
            if (v.hypothesis_met && !v.pass) return true;
        }
        if (closed_loop) {
            if ((closed_loop->w_verdict.hypothesis_met && !closed_loop->w_verdict.pass) ||
                (closed_loop->u_verdict.hypothesis_met && !closed_loop->u_verdict.pass) ||
                !closed_loop->w0_norm_bound_ok) {
                return true;
            }
        }
        return false;
    }
};

namespace detail {

struct NamedTrajectory {
    std::string label;
    TrajectoryRecord traj;
    std::vector<const EnvelopeVerdict*> verdicts;
};

inline void write_trajectory_csv(const std::string& path, const TrajectoryRecord& traj,
                                 const std::vector<const EnvelopeVerdict*>& verdicts) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw ValidationError("cannot write " + path);
    out << "t,l2,h1,linf,sup_d,sup_f,int_f_l2sq";
    for (const auto* v : verdicts) out << ",envelope_" << v->theorem_id;
    out << "\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << csv_number(traj.times[i]) << ',' << csv_number(traj.norm_series[i].l2) << ','
            << csv_number(traj.norm_series[i].h1) << ',' << csv_number(traj.norm_series[i].linf)
            << ',' << csv_number(traj.stats_series[i].sup_d) << ','
            << csv_number(traj.stats_series[i].sup_f) << ','
            << csv_number(traj.stats_series[i].int_f_l2sq);
        for (const auto* v : verdicts) out << ',' << csv_number(v->envelope_values[i]);
        out << "\n";
    }
}

inline void write_scan_csv(const std::string& path, const LevelSetScan& scan) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw ValidationError("cannot write " + path);
    out << "level,phi,ik_max\n";
    for (std::size_t i = 0; i < scan.levels.size(); ++i) {
        out << csv_number(scan.levels[i]) << ',' << csv_number(scan.phi[i]) << ','
            << csv_number(scan.ik_max[i]) << "\n";
    }
}

inline void write_kernel_csv(const std::string& path, const VolterraKernel& k) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw ValidationError("cannot write " + path);
    out << "x,y,value\n";
    for (int i = 0; i <= k.n_cells; ++i) {
        for (int j = 0; j <= i; ++j) {
            out << csv_number(k.grid->nodes[static_cast<std::size_t>(i)]) << ','
                << csv_number(k.grid->nodes[static_cast<std::size_t>(j)]) << ','
                << csv_number(k.at(i, j)) << "\n";
        }
    }
}

inline std::string verdict_line(const EnvelopeVerdict& v, const std::string& traj_label) {
    std::string line = "verdict " + v.theorem_id + " trajectory=" + traj_label;
    if (!v.hypothesis_met) {
        line += " status=hypothesis-not-met note=\"" + v.hypothesis_note + "\"";
        return line;
    }
    line += v.pass ? " status=pass" : " status=FAIL";
    line += " max_violation=" + csv_number(v.max_violation);
    line += " allowance_excess=" + csv_number(v.max_excess_over_allowance);
    return line;
}

} // namespace detail

/// Run one scenario end to end: simulate, split as the requested
/// estimates demand, evaluate envelopes, run the level-set analysis when
/// the boundary-subsystem max bound is requested, and write CSV/report
/// files when an output directory is given.
inline RunReport run(const Scenario& scenario, const RunOptions& options = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    Scenario s = scenario;
    if (!options.theorem_override.empty()) {
        s.verification.theorems = options.theorem_override;
    }
    s.validate_or_throw();

    RunReport report;
    report.scenario_name = s.name;

    // deque: growing it must not invalidate references handed out earlier
    std::deque<detail::NamedTrajectory> trajectories;
    auto find_or_add = [&](const std::string& label,
                           auto&& maker) -> detail::NamedTrajectory& {
        for (auto& t : trajectories) {
            if (t.label == label) return t;
        }
        trajectories.push_back(detail::NamedTrajectory{label, maker(), {}});
        return trajectories.back();
    };

    HypothesisContext ctx;
    ctx.sup_d_signal = s.d.sup_all_time();
    ctx.sup_f_signal = s.f.sup_all_time();

    if (s.plant == PlantKind::closed_loop) {
        VolterraKernel kernel = solve_kernel(s.reaction, s.target_n, s.disc.n_cells);
        VolterraKernel inverse = invert_kernel(kernel);
        ClosedLoopScenario cls;
        cls.plant = s.reaction;
        cls.kernel = kernel;
        cls.actuator_disturbance = s.d;
        cls.in_domain = s.f;
        cls.u0 = s.u0;
        cls.disc = s.disc;
        ClosedLoopTrajectories loop = run_closed_loop(cls, s.disc.t_final, s.disc.dt);
        report.closed_loop = verify_closed_loop_iss(loop.u, loop.w, kernel, inverse,
                                                    s.verification.p, s.verification.tol_rel,
                                                    s.verification.tol_abs);
        report.hypothesis_flags.push_back(
            "closed loop: ||w0||_H1 <= (1 + 2 max|k(x,x)|) ||u0||_H1: " +
            std::string(report.closed_loop->w0_norm_bound_ok ? "satisfied" : "violated"));
        trajectories.push_back(
            detail::NamedTrajectory{"closed_loop_u", std::move(loop.u), {}});
        trajectories.push_back(
            detail::NamedTrajectory{"target_w", std::move(loop.w), {}});
        trajectories[0].verdicts.push_back(&report.closed_loop->u_verdict);
        trajectories[1].verdicts.push_back(&report.closed_loop->w_verdict);
        if (!options.out_dir.empty()) {
            namespace fs = std::filesystem;
            fs::create_directories(options.out_dir);
            const std::string k_path = options.out_dir + "/" + s.name + "_kernel_k.csv";
            const std::string l_path = options.out_dir + "/" + s.name + "_kernel_l.csv";
            detail::write_kernel_csv(k_path, kernel);
            detail::write_kernel_csv(l_path, inverse);
            report.outputs.push_back(k_path);
            report.outputs.push_back(l_path);
        }
    } else {
        find_or_add("trajectory", [&] { return simulate(s); });

        auto transport_split = [&]() -> std::pair<detail::NamedTrajectory&,
                                                  detail::NamedTrajectory&> {
            auto& w = find_or_add("subsystem_w", [&] {
                SplitPair pair = split(s, FPlacement::boundary_subsystem);
                auto rec = simulate(pair.subsystem_w);
                rec.role = "subsystem_w";
                return rec;
            });
            auto& v = find_or_add("subsystem_v", [&] {
                SplitPair pair = split(s, FPlacement::boundary_subsystem);
                Scenario v_scn = pair.subsystem_v;
                v_scn.disc.snapshot_stride = 1;
                auto rec = simulate(v_scn);
                rec.role = "subsystem_v";
                return rec;
            });
            return {w, v};
        };

        // Burgers splits: the label encodes the placement of f.
        auto burgers_split = [&](FPlacement placement) -> std::pair<detail::NamedTrajectory&,
                                                                    detail::NamedTrajectory&> {
            const std::string suffix = (placement == FPlacement::boundary_subsystem)
                                           ? "_f_boundary"
                                           : "_f_homogeneous";
            SplitTrajectories trajs;
            bool computed = false;
            auto ensure = [&] {
                if (!computed) {
                    trajs = simulate_split(s, placement);
                    computed = true;
                }
            };
            auto& v = find_or_add("subsystem_v" + suffix, [&] {
                ensure();
                return trajs.v;
            });
            auto& w = find_or_add("subsystem_w" + suffix, [&] {
                ensure();
                return trajs.w;
            });
            return {w, v};
        };

        // each requested estimate is reported exactly once
        std::vector<std::string> requested;
        for (const auto& name : s.verification.theorems) {
            if (std::find(requested.begin(), requested.end(), name) == requested.end()) {
                requested.push_back(name);
            }
        }

        for (const auto& name : requested) {
            const auto id_opt = parse_theorem_id(name);
            if (!id_opt) throw ValidationError("unknown estimate id '" + name + "'");
            const TheoremId id = *id_opt;

            detail::NamedTrajectory* target = &trajectories.front();
            if (!s.verification.subsystems_on_original) {
                switch (id) {
                case TheoremId::T7:
                case TheoremId::T7x:
                case TheoremId::T8: {
                    target = &transport_split().first;
                    break;
                }
                case TheoremId::T9: {
                    target = &transport_split().second;
                    break;
                }
                case TheoremId::T12: {
                    target = &burgers_split(FPlacement::homogeneous_subsystem).second;
                    break;
                }
                case TheoremId::T13: {
                    target = &burgers_split(FPlacement::homogeneous_subsystem).first;
                    break;
                }
                case TheoremId::T15: {
                    target = &burgers_split(FPlacement::boundary_subsystem).second;
                    break;
                }
                case TheoremId::T16: {
                    target = &burgers_split(FPlacement::boundary_subsystem).first;
                    break;
                }
                default:
                    break;
                }
            }

            EnvelopeParams prm =
                envelope_params_for(s, id, target->traj.norm_series.front());
            report.verdicts.push_back(verify(target->traj, id, prm, s.verification.tol_rel,
                                             s.verification.tol_abs, ctx));
            report.verdict_trajectories.push_back(target->label);
            const EnvelopeVerdict& v = report.verdicts.back();
            if (!v.hypothesis_note.empty()) {
                report.hypothesis_flags.push_back(v.theorem_id + ": " + v.hypothesis_note);
            } else if (id == TheoremId::T11i || id == TheoremId::T13) {
                report.hypothesis_flags.push_back(v.theorem_id + ": max|d| < mu/nu: satisfied");
            } else if (id == TheoremId::T11ii || id == TheoremId::T16) {
                report.hypothesis_flags.push_back(v.theorem_id +
                                                  ": max|d| + gain max|f| < mu/nu: satisfied");
            }

            if (id == TheoremId::T9 && !s.verification.subsystems_on_original) {
                report.degiorgi = degiorgi_analyze(s);
            }
        }

        // verdict pointers resolve after the vector stops growing
        for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
            for (auto& t : trajectories) {
                if (t.label == report.verdict_trajectories[i]) {
                    t.verdicts.push_back(&report.verdicts[i]);
                }
            }
        }
    }

    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.out_dir);
        for (const auto& t : trajectories) {
            const std::string path = options.out_dir + "/" + s.name + "_" + t.label + ".csv";
            detail::write_trajectory_csv(path, t.traj, t.verdicts);
            report.outputs.push_back(path);
        }
        if (report.degiorgi) {
            const std::string up = options.out_dir + "/" + s.name + "_levelset_upper.csv";
            const std::string low = options.out_dir + "/" + s.name + "_levelset_lower.csv";
            detail::write_scan_csv(up, report.degiorgi->scan_upper);
            detail::write_scan_csv(low, report.degiorgi->scan_lower);
            report.outputs.push_back(up);
            report.outputs.push_back(low);
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    if (!options.out_dir.empty()) {
        const std::string path = options.out_dir + "/" + s.name + "_report.txt";
        std::ofstream out(path, std::ios::binary);
        if (!out.is_open()) throw ValidationError("cannot write " + path);
        out << "scenario=" << s.name << " plant=" << to_string(s.plant) << "\n";
        out << "n_cells=" << s.disc.n_cells << " dt=" << csv_number(s.disc.dt)
            << " t_final=" << csv_number(s.disc.t_final) << "\n";
        for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
            out << detail::verdict_line(report.verdicts[i], report.verdict_trajectories[i])
                << "\n";
        }
        if (report.closed_loop) {
            out << detail::verdict_line(report.closed_loop->w_verdict, "target_w") << "\n";
            out << detail::verdict_line(report.closed_loop->u_verdict, "closed_loop_u") << "\n";
            out << "closed_loop lift_constant=" << csv_number(report.closed_loop->lift_constant)
                << " w0_norm_constant=" << csv_number(report.closed_loop->w0_norm_constant)
                << "\n";
        }
        for (const auto& flag : report.hypothesis_flags) out << "flag " << flag << "\n";
        if (report.degiorgi) {
            const auto& dg = *report.degiorgi;
            out << "levelset upper: k0=" << csv_number(dg.witness_upper.k0)
                << " d_jump=" << csv_number(dg.witness_upper.d_jump)
                << " recursion=" << (dg.report_upper.hypothesis_holds ? "holds" : "VIOLATED")
                << " vanishing=" << (dg.report_upper.conclusion_holds ? "holds" : "VIOLATED")
                << " phi_at_gain_level=" << csv_number(dg.phi_at_gain_upper) << "\n";
            out << "levelset lower: k0=" << csv_number(dg.witness_lower.k0)
                << " d_jump=" << csv_number(dg.witness_lower.d_jump)
                << " recursion=" << (dg.report_lower.hypothesis_holds ? "holds" : "VIOLATED")
                << " vanishing=" << (dg.report_lower.conclusion_holds ? "holds" : "VIOLATED")
                << " phi_at_gain_level=" << csv_number(dg.phi_at_gain_lower) << "\n";
        }
        out << "wall_seconds=" << csv_number(report.wall_seconds) << "\n";
        for (const auto& o : report.outputs) out << "output " << o << "\n";
        report.outputs.push_back(path);
    }
    return report;
}

/// One cell of a parameter sweep.
struct SweepCell {
    int index = 0;
    std::vector<std::pair<std::string, std::string>> assignment; ///< section.key -> value
    RunReport report;
    std::string error; ///< nonempty when the cell failed
};

struct SweepResult {
    std::vector<SweepCell> cells;
    bool any_cell_error = false;
    bool any_claimed_failure = false;
};

/// Cartesian sweep over the configured axes; cells may run concurrently.
/// Outputs (when requested) are one trajectory/report set per cell plus a
/// summary CSV, all with deterministic content.
inline SweepResult run_sweep(const ConfigMap& base, const std::vector<SweepAxis>& axes,
                             const RunOptions& options) {
    if (axes.empty()) throw ValidationError("sweep: no [sweep] axes configured");
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();
    if (total == 0) throw ValidationError("sweep: empty axis");

    SweepResult result;
    result.cells.resize(total);
    for (std::size_t cell = 0; cell < total; ++cell) {
        std::size_t rest = cell;
        auto& c = result.cells[cell];
        c.index = static_cast<int>(cell);
        for (const auto& a : axes) {
            const std::size_t pick = rest % a.values.size();
            rest /= a.values.size();
            c.assignment.emplace_back(a.section + "." + a.key, a.values[pick]);
        }
    }

    std::mutex mtx;
    std::size_t next = 0;
    auto worker = [&] {
        for (;;) {
            std::size_t mine;
            {
                std::lock_guard<std::mutex> lock(mtx);
                if (next >= total) return;
                mine = next++;
            }
            auto& cell = result.cells[mine];
            try {
                ConfigMap cfg = base;
                for (const auto& [seckey, value] : cell.assignment) {
                    const auto dot = seckey.find('.');
                    cfg.set(seckey.substr(0, dot), seckey.substr(dot + 1), value);
                }
                Scenario s = scenario_from_config(cfg);
                s.name += "_cell" + std::to_string(cell.index);
                RunOptions cell_options = options;
                cell.report = run(s, cell_options);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };

    const int jobs = std::max(1, options.jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs) - 1);
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (const auto& cell : result.cells) {
        if (!cell.error.empty()) result.any_cell_error = true;
        if (cell.error.empty() && cell.report.any_claimed_failure()) {
            result.any_claimed_failure = true;
        }
    }

    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.out_dir);
        std::ofstream out(options.out_dir + "/sweep_summary.csv", std::ios::binary);
        if (!out.is_open()) throw ValidationError("cannot write sweep summary");
        out << "cell";
        for (const auto& a : axes) out << ',' << a.section << '.' << a.key;
        out << ",status,failed_estimates,hypothesis_flags\n";
        for (const auto& cell : result.cells) {
            out << cell.index;
            for (const auto& [_, value] : cell.assignment) out << ',' << value;
            if (!cell.error.empty()) {
                std::string flat = cell.error;
                for (auto& ch : flat) {
                    if (ch == '\n' || ch == ',') ch = ' ';
                }
                out << ",error,," << flat << "\n";
                continue;
            }
            std::string failed;
            for (const auto& v : cell.report.verdicts) {
                if (v.hypothesis_met && !v.pass) failed += v.theorem_id + " ";
            }
            std::string flags;
            for (const auto& f : cell.report.hypothesis_flags) flags += f + "; ";
            for (auto& ch : flags) {
                if (ch == ',') ch = ';';
            }
            out << (failed.empty() ? ",pass," : ",FAIL,") << failed << ',' << flags << "\n";
        }
    }
    return result;
}

} // namespace isslab
