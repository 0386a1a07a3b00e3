#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "isslab/envelopes.hpp"
#include "isslab/errors.hpp"
#include "isslab/grid.hpp"
#include "isslab/solvers.hpp"

namespace isslab {

/// Pointwise positive truncation max(f - k, 0).
inline GridFunction truncate_plus(const GridFunction& f, double k) {
    GridFunction out = f;
    for (int i = 0; i < f.size(); ++i) out[i] = std::max(f[i] - k, 0.0);
    return out;
}

/// Discrete measure of {x : f(x) > k}: each interior node above the level
/// contributes a full cell h, the two end nodes half a cell. Lies in [0,1]
/// and matches the true measure of smooth level sets to within one cell.
inline double level_set_measure(const GridFunction& f, double k) {
    const int n = f.size();
    const double h = f.grid->h;
    double measure = 0.0;
    for (int i = 0; i < n; ++i) {
        if (f[i] > k) {
            measure += (i == 0 || i == n - 1) ? 0.5 * h : h;
        }
    }
    return measure;
}

/// Level-set survey of a trajectory: per level k, the worst-over-time
/// measure phi_k of {x : u(x,s) > k} and the worst-over-time truncation
/// energy I_k = int (u-k)_+^2 dx.
struct LevelSetScan {
    std::vector<double> levels;
    std::vector<double> phi;
    std::vector<double> ik_max;
    double cell = 0.0; ///< grid spacing; the discrete rendering of measure zero

    double phi_at_level_nearest(double level, int* index_out = nullptr) const {
        int best = 0;
        double best_gap = std::abs(levels[0] - level);
        for (int i = 1; i < static_cast<int>(levels.size()); ++i) {
            const double gap = std::abs(levels[static_cast<std::size_t>(i)] - level);
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (index_out) *index_out = best;
        return phi[static_cast<std::size_t>(best)];
    }
};

inline LevelSetScan scan_levels(const TrajectoryRecord& traj, const std::vector<double>& levels) {
    if (traj.snapshots.empty()) {
        throw ValidationError("scan_levels: trajectory carries no snapshots");
    }
    if (levels.empty() || !std::is_sorted(levels.begin(), levels.end())) {
        throw ValidationError("scan_levels: levels must be a nonempty increasing vector");
    }
    LevelSetScan scan;
    scan.levels = levels;
    scan.cell = traj.grid->h;
    scan.phi.assign(levels.size(), 0.0);
    scan.ik_max.assign(levels.size(), 0.0);
    for (const GridFunction& snap : traj.snapshots) {
        for (std::size_t j = 0; j < levels.size(); ++j) {
            scan.phi[j] = std::max(scan.phi[j], level_set_measure(snap, levels[j]));
            const GridFunction trunc = truncate_plus(snap, levels[j]);
            double energy = 0.0;
            const double h = snap.grid->h;
            for (int i = 0; i < trunc.size(); ++i) {
                const double w = (i == 0 || i == trunc.size() - 1) ? 0.5 : 1.0;
                energy += w * trunc[i] * trunc[i];
            }
            scan.ik_max[j] = std::max(scan.ik_max[j], energy * h);
        }
    }
    return scan;
}

/// 64 levels on [k0, k0 + span], clustered toward the far end where the
/// measure is expected to die out.
inline std::vector<double> default_levels(double k0, double span, int count = 64) {
    if (!(span > 0.0)) {
        // degenerate case: a flat stack just above k0
        span = std::max(1e-12, std::abs(k0) * 1e-9 + 1e-12);
    }
    const double theta = 15.0;
    std::vector<double> levels(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(count - 1);
        levels[static_cast<std::size_t>(i)] =
            k0 + span * std::log1p(theta * s) / std::log1p(theta);
    }
    return levels;
}

/// Constants of the measure-decay recursion phi(h) <= (M/(h-k))^a phi(k)^b
/// together with the certified jump d beyond which the measure vanishes.
struct IterationWitness {
    double k0 = 0.0;
    double alpha = 2.0;
    double beta = 3.0;
    double M = 0.0;
    double phi_k0 = 1.0;
    double d_jump = 0.0; ///< 2^{b/(b-1)} M phi(k0)^{(b-1)/a}
};

inline double iteration_jump(double alpha, double beta, double M, double phi_k0) {
    if (!(alpha > 0.0)) throw ValidationError("iteration_jump: alpha must be > 0");
    if (!(beta > 1.0)) throw ValidationError("iteration_jump: beta must be > 1");
    if (M < 0.0) throw ValidationError("iteration_jump: M must be >= 0");
    if (phi_k0 < 0.0) throw ValidationError("iteration_jump: phi(k0) must be >= 0");
    return std::pow(2.0, beta / (beta - 1.0)) * M *
           std::pow(phi_k0, (beta - 1.0) / alpha);
}

inline IterationWitness make_witness(double k0, double alpha, double beta, double M,
                                     double phi_k0) {
    IterationWitness w;
    w.k0 = k0;
    w.alpha = alpha;
    w.beta = beta;
    w.M = M;
    w.phi_k0 = phi_k0;
    w.d_jump = iteration_jump(alpha, beta, M, phi_k0);
    return w;
}

/// Witness for the boundary-driven subsystem in its advection-free frame:
/// base level k0 = max{sup d~, 0}, alpha = 2, beta = 3 - 4/p and
/// M = (2/mu) sup|f~|, where d~ and f~ are the exponentially weighted
/// disturbances.
inline IterationWitness subsystem_witness(double mu, double p, double sup_d_tilde_signed,
                                          double sup_f_tilde_abs, double phi_k0) {
    if (!(p > 2.0)) throw ValidationError("subsystem_witness: p must be > 2");
    const double k0 = std::max(sup_d_tilde_signed, 0.0);
    return make_witness(k0, 2.0, 3.0 - 4.0 / p, 2.0 / mu * sup_f_tilde_abs, phi_k0);
}

/// Outcome of checking the measure-decay recursion on a sampled scan.
struct IterationReport {
    bool hypothesis_holds = false;
    double worst_hypothesis_ratio = 0.0; ///< max phi(h) / (slacked bound)
    bool conclusion_holds = false;
    double conclusion_level = 0.0;
    double phi_at_conclusion = 0.0;
    int conclusion_index = 0;
    int pairs_checked = 0;
};

/// Check (a) the recursion phi(h) <= (M/(h-k))^alpha phi(k)^beta on every
/// sampled level pair with h > k >= k0, with 5% multiplicative slack and a
/// one-cell absolute floor for discretization, and (b) that phi at the
/// level nearest k0 + d_jump is at most one grid cell.
inline IterationReport check_iteration_lemma(const LevelSetScan& scan,
                                             const IterationWitness& witness) {
    if (scan.levels.size() < 8) {
        throw ValidationError("check_iteration_lemma: too few levels; supply a finer stack");
    }
    const double lo = scan.levels.front();
    const double hi = scan.levels.back();
    const double tiny = 1e-12 * (1.0 + std::abs(witness.k0));
    if (lo > witness.k0 + tiny || hi + tiny < witness.k0 + witness.d_jump) {
        throw ValidationError("check_iteration_lemma: levels must cover [k0, k0 + d_jump]");
    }

    IterationReport rep;
    rep.hypothesis_holds = true;
    const std::size_t n = scan.levels.size();
    for (std::size_t a = 0; a < n; ++a) {
        const double k = scan.levels[a];
        if (k < witness.k0 - tiny) continue;
        for (std::size_t b = a + 1; b < n; ++b) {
            const double h = scan.levels[b];
            if (!(h > k)) continue;
            const double bound =
                std::pow(witness.M / (h - k), witness.alpha) *
                std::pow(scan.phi[a], witness.beta);
            const double allowed = 1.05 * bound + scan.cell;
            ++rep.pairs_checked;
            const double ratio = (allowed > 0.0) ? scan.phi[b] / allowed : 0.0;
            rep.worst_hypothesis_ratio = std::max(rep.worst_hypothesis_ratio, ratio);
            if (scan.phi[b] > allowed) rep.hypothesis_holds = false;
        }
    }

    rep.conclusion_level = witness.k0 + witness.d_jump;
    rep.phi_at_conclusion = scan.phi_at_level_nearest(rep.conclusion_level, &rep.conclusion_index);
    rep.conclusion_holds = rep.phi_at_conclusion <= scan.cell + 1e-15;
    return rep;
}

/// Certified discrete upper level: k0 + d_jump. The trajectory maximum is
/// expected not to exceed it (up to scheme error).
inline double linf_bound_from_scan(const IterationWitness& witness) {
    return witness.k0 + witness.d_jump;
}

} // namespace isslab
