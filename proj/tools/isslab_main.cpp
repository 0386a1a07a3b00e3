// Command-line harness: config-driven simulation, envelope verification,
// parameter sweeps, kernel export, and the randomized inequality battery.
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure
// (blow-up / step-size guard), 4 verdict failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isslab/config.hpp"
#include "isslab/inequalities.hpp"
#include "isslab/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerdict = 4;

void print_report(const isslab::RunReport& report) {
    std::cout << "scenario " << report.scenario_name << "\n";
    for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
        std::cout << "  "
                  << isslab::detail::verdict_line(report.verdicts[i],
                                                  report.verdict_trajectories[i])
                  << "\n";
    }
    if (report.closed_loop) {
        std::cout << "  "
                  << isslab::detail::verdict_line(report.closed_loop->w_verdict, "target_w")
                  << "\n";
        std::cout << "  "
                  << isslab::detail::verdict_line(report.closed_loop->u_verdict, "closed_loop_u")
                  << "\n";
    }
    for (const auto& flag : report.hypothesis_flags) {
        std::cout << "  flag " << flag << "\n";
    }
    if (report.degiorgi) {
        const auto& dg = *report.degiorgi;
        std::cout << "  levelset upper: recursion "
                  << (dg.report_upper.hypothesis_holds ? "holds" : "VIOLATED") << ", vanishing "
                  << (dg.report_upper.conclusion_holds ? "holds" : "VIOLATED")
                  << ", phi at gain level " << dg.phi_at_gain_upper << "\n";
        std::cout << "  levelset lower: recursion "
                  << (dg.report_lower.hypothesis_holds ? "holds" : "VIOLATED") << ", vanishing "
                  << (dg.report_lower.conclusion_holds ? "holds" : "VIOLATED")
                  << ", phi at gain level " << dg.phi_at_gain_lower << "\n";
    }
    for (const auto& path : report.outputs) {
        std::cout << "  wrote " << path << "\n";
    }
}

int run_single(const std::string& config_path, const isslab::RunOptions& options,
               bool verify_mode) {
    isslab::ParsedConfig cfg = isslab::parse_config(config_path);
    isslab::RunOptions opts = options;
    if (!verify_mode) {
        // plain simulation: drop every verification request
        opts.theorem_override.clear();
        cfg.scenario.verification.theorems.clear();
    }
    isslab::RunReport report = isslab::run(cfg.scenario, opts);
    print_report(report);
    if (verify_mode && report.any_claimed_failure()) return kExitVerdict;
    return kExitOk;
}

int run_sweep_cmd(const std::string& config_path, const isslab::RunOptions& options) {
    const isslab::ConfigMap base = isslab::read_config_file(config_path);
    (void)isslab::scenario_from_config(base); // validate the base cell up front
    const auto axes = isslab::sweep_axes_from_config(base);
    isslab::SweepResult result = isslab::run_sweep(base, axes, options);
    int failed = 0;
    int hypothesis_skipped = 0;
    for (const auto& cell : result.cells) {
        std::cout << "cell " << cell.index;
        for (const auto& [key, value] : cell.assignment) std::cout << " " << key << "=" << value;
        if (!cell.error.empty()) {
            std::cout << " error: " << cell.error << "\n";
            continue;
        }
        bool cell_failed = false;
        for (const auto& v : cell.report.verdicts) {
            if (!v.hypothesis_met) ++hypothesis_skipped;
            if (v.hypothesis_met && !v.pass) cell_failed = true;
        }
        std::cout << (cell_failed ? " FAIL" : " pass") << "\n";
        if (cell_failed) ++failed;
    }
    std::cout << result.cells.size() << " cells, " << failed << " failed, "
              << hypothesis_skipped << " hypothesis-not-met verdicts\n";
    if (result.any_cell_error) return kExitSolver;
    if (result.any_claimed_failure) return kExitVerdict;
    return kExitOk;
}

int run_kernel_cmd(const std::string& config_path, const isslab::RunOptions& options) {
    isslab::ParsedConfig cfg = isslab::parse_config(config_path);
    const isslab::Scenario& s = cfg.scenario;
    isslab::VolterraKernel k = isslab::solve_kernel(s.reaction, s.target_n, s.disc.n_cells);
    isslab::VolterraKernel l = isslab::invert_kernel(k);
    std::cout << "kernel solved: n_cells=" << k.n_cells << " target_n=" << k.target_n
              << " max|k|=" << k.max_abs() << " max|k(x,x)|=" << k.max_abs_diagonal()
              << " max|l|=" << l.max_abs() << "\n";
    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.out_dir);
        const std::string kp = options.out_dir + "/" + s.name + "_kernel_k.csv";
        const std::string lp = options.out_dir + "/" + s.name + "_kernel_l.csv";
        isslab::detail::write_kernel_csv(kp, k);
        isslab::detail::write_kernel_csv(lp, l);
        std::cout << "wrote " << kp << "\nwrote " << lp << "\n";
    }
    return kExitOk;
}

int run_lemmas_cmd(unsigned seed, int trials) {
    const isslab::BatteryResult res = isslab::run_inequality_battery(seed, trials);
    std::cout << "inequality battery: trials=" << res.trials << " seed=" << seed << "\n"
              << "  quadratic-mean bound failures:   " << res.poincare_failures << "\n"
              << "  pointwise embedding failures:    " << res.sobolev_point_failures << "\n"
              << "  Lp embedding failures:           " << res.sobolev_lp_failures << "\n"
              << "  product bound failures:          " << res.young_failures << "\n"
              << "  integral comparison failures:    " << res.gronwall_failures << "\n"
              << "  refined rechecks:                " << res.refined_rechecks << "\n";
    return res.total_failures() == 0 ? kExitOk : kExitVerdict;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D parabolic plant simulator with stability-envelope verification"};
    app.require_subcommand(1);

    std::string config_path;
    isslab::RunOptions options;
    options.out_dir = "out";
    std::string theorems_csv;
    unsigned seed = 1;
    int trials = 1000;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) {
            cmd->add_option("--config", config_path, "scenario configuration file")->required();
        }
        cmd->add_option("--out", options.out_dir, "output directory ('' disables files)");
        cmd->add_option("--jobs", options.jobs, "concurrent scenarios (sweep)");
        cmd->add_option("--theorems", theorems_csv, "comma-separated estimate ids override");
        cmd->add_option("--seed", seed, "seed for randomized batteries");
    };

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "run a scenario, write time series");
    add_common(cmd_simulate, true);
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "run a scenario and check the requested envelopes");
    add_common(cmd_verify, true);
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
    add_common(cmd_sweep, true);
    CLI::App* cmd_kernel = app.add_subcommand("kernel", "solve and export feedback kernels");
    add_common(cmd_kernel, true);
    CLI::App* cmd_lemmas =
        app.add_subcommand("check-lemmas", "randomized battery for the inequality toolbox");
    add_common(cmd_lemmas, false);
    cmd_lemmas->add_option("--trials", trials, "number of random functions");

    CLI11_PARSE(app, argc, argv);

    if (!theorems_csv.empty()) {
        options.theorem_override = isslab::detail::split_list(theorems_csv);
    }

    try {
        if (app.got_subcommand(cmd_simulate)) return run_single(config_path, options, false);
        if (app.got_subcommand(cmd_verify)) return run_single(config_path, options, true);
        if (app.got_subcommand(cmd_sweep)) return run_sweep_cmd(config_path, options);
        if (app.got_subcommand(cmd_kernel)) return run_kernel_cmd(config_path, options);
        if (app.got_subcommand(cmd_lemmas)) return run_lemmas_cmd(seed, trials);
    } catch (const isslab::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const isslab::DimensionError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const isslab::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
