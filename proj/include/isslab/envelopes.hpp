#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "isslab/errors.hpp"
#include "isslab/grid.hpp"
#include "isslab/signals.hpp"
#include "isslab/solvers.hpp"

namespace isslab {

/// 2^{(5p-8)/(2p-4)}: the max-norm disturbance gain produced by the
/// level-set iteration. Decreasing in p; its limit for p -> inf is 2^{5/2}.
inline double degiorgi_gain(double p) {
    if (!(p > 2.0)) throw ValidationError("degiorgi_gain: p must be > 2");
    return std::pow(2.0, (5.0 * p - 8.0) / (2.0 * p - 4.0));
}

/// Inputs shared by the envelope formulas: plant coefficients, the free
/// parameters p and epsilon, and the norms of the initial data.
struct EnvelopeParams {
    double mu = 1.0;
    double m = 0.0;
    double n = 0.0;
    double nu = 1.0;
    double p = 4.0;
    double epsilon = 1.0;
    NormTriple u0_norms;

    double advection_gain() const { return std::exp(std::abs(m) / mu); }
    double shifted_reaction() const { return m * m / (4.0 * mu) + n; }
    /// ||u0_x||^2 recovered from the discrete H1 norm.
    double u0_dx_l2sq() const {
        return std::max(0.0, u0_norms.h1 * u0_norms.h1 - u0_norms.l2 * u0_norms.l2);
    }
    /// Upper end of the admissible epsilon interval for the integral-gain
    /// transport estimate: m^2/(2 mu) + 2 n + 4 mu.
    double transport_epsilon_upper() const { return m * m / (2.0 * mu) + 2.0 * n + 4.0 * mu; }
};

/// Max-norm bound for the homogeneous-boundary subsystem:
/// e^{|m|/mu} sqrt(2 + m^2/(2 mu^2)) ||u0||_H1 e^{-(m^2/4mu + n + 2mu) t}.
inline double envelope_T8(const EnvelopeParams& prm, double t) {
    const double rate = prm.shifted_reaction() + 2.0 * prm.mu;
    const double prefactor = std::sqrt(2.0 + prm.m * prm.m / (2.0 * prm.mu * prm.mu));
    return prm.advection_gain() * prefactor * prm.u0_norms.h1 * std::exp(-rate * t);
}

/// Max-norm disturbance gain for the boundary-driven subsystem:
/// e^{|m|/mu} (sup|d| + (1/mu) 2^{(5p-8)/(2p-4)} sup|f|).
inline double envelope_T9(const EnvelopeParams& prm, const RunningStats& stats) {
    return prm.advection_gain() *
           (stats.sup_d + degiorgi_gain(prm.p) / prm.mu * stats.sup_f);
}

/// Max-norm bound for the full transport plant, transient plus gains.
/// Exactly the sum of envelope_T8 and envelope_T9.
inline double envelope_T6i(const EnvelopeParams& prm, const RunningStats& stats, double t) {
    return envelope_T8(prm, t) + envelope_T9(prm, stats);
}

/// Max-norm transport bound with the in-domain disturbance entering
/// through the time integral of ||f||^2; epsilon trades decay for gain.
inline double envelope_T6ii(const EnvelopeParams& prm, const RunningStats& stats, double t) {
    if (!(prm.epsilon > 0.0) || !(prm.epsilon < prm.transport_epsilon_upper())) {
        throw ValidationError("envelope_T6ii: epsilon must lie in (0, m^2/(2mu) + 2n + 4mu)");
    }
    const double rate = prm.shifted_reaction() + 2.0 * prm.mu - 0.5 * prm.epsilon;
    const double prefactor = std::sqrt(2.0 + prm.m * prm.m / (2.0 * prm.mu * prm.mu));
    const double gain = prm.advection_gain();
    return gain * prefactor * prm.u0_norms.h1 * std::exp(-rate * t) + gain * stats.sup_d +
           gain * std::sqrt(3.0 / prm.epsilon * stats.int_f_l2sq);
}

/// Squared-L2 and squared-derivative bounds for the homogeneous subsystem.
struct T7Bounds {
    double l2_sq = 0.0;
    double dx_l2_sq = 0.0;
};

inline T7Bounds envelope_T7(const EnvelopeParams& prm, double t) {
    const double decay = std::exp(-2.0 * (prm.shifted_reaction() + 2.0 * prm.mu) * t);
    const double gain = prm.advection_gain();
    T7Bounds b;
    b.l2_sq = gain * prm.u0_norms.l2 * prm.u0_norms.l2 * decay;
    b.dx_l2_sq = gain * gain *
                 (1.5 * prm.m * prm.m / (prm.mu * prm.mu) * prm.u0_norms.l2 * prm.u0_norms.l2 +
                  4.0 * prm.u0_dx_l2sq()) *
                 decay;
    return b;
}

/// Squared-L2 Burgers bound, integral disturbance gain:
/// 2||u0||^2 e^{-(mu-eps)t} + 2 sup|d|^2 + (2/eps) int ||f||^2.
inline double envelope_T11i(const EnvelopeParams& prm, const RunningStats& stats, double t) {
    if (!(prm.epsilon > 0.0) || !(prm.epsilon < prm.mu)) {
        throw ValidationError("envelope_T11i: epsilon must lie in (0, mu)");
    }
    return 2.0 * prm.u0_norms.l2 * prm.u0_norms.l2 * std::exp(-(prm.mu - prm.epsilon) * t) +
           2.0 * stats.sup_d * stats.sup_d + 2.0 / prm.epsilon * stats.int_f_l2sq;
}

/// Squared-L2 Burgers bound, max disturbance gain:
/// 2 e^{-mu t}||u0||^2 + 4 sup|d|^2 + (1/mu^2) 2^{2+(5p-8)/(2p-4)} sup|f|^2.
inline double envelope_T11ii(const EnvelopeParams& prm, const RunningStats& stats, double t) {
    const double g = degiorgi_gain(prm.p);
    return 2.0 * std::exp(-prm.mu * t) * prm.u0_norms.l2 * prm.u0_norms.l2 +
           4.0 * stats.sup_d * stats.sup_d +
           4.0 * g / (prm.mu * prm.mu) * stats.sup_f * stats.sup_f;
}

/// Max-norm bound for the boundary-driven Burgers subsystem without f.
inline double envelope_T12(const RunningStats& stats) { return stats.sup_d; }

/// Squared-L2 bound for the coupled Burgers companion carrying u0 and f.
inline double envelope_T13(const EnvelopeParams& prm, const RunningStats& stats, double t) {
    if (!(prm.epsilon > 0.0) || !(prm.epsilon < prm.mu)) {
        throw ValidationError("envelope_T13: epsilon must lie in (0, mu)");
    }
    return prm.u0_norms.l2 * prm.u0_norms.l2 * std::exp(-(prm.mu - prm.epsilon) * t) +
           stats.int_f_l2sq / prm.epsilon;
}

/// Max-norm bound for the boundary-driven Burgers subsystem with f.
inline double envelope_T15(const EnvelopeParams& prm, const RunningStats& stats) {
    return stats.sup_d + degiorgi_gain(prm.p) / prm.mu * stats.sup_f;
}

/// Squared-L2 pure-decay bound for the disturbance-free Burgers companion.
inline double envelope_T16(const EnvelopeParams& prm, double t) {
    return prm.u0_norms.l2 * prm.u0_norms.l2 * std::exp(-prm.mu * t);
}

enum class TheoremId { T6i, T6ii, T7, T7x, T8, T9, T11i, T11ii, T12, T13, T15, T16 };

inline std::string to_string(TheoremId id) {
    switch (id) {
    case TheoremId::T6i: return "T6i";
    case TheoremId::T6ii: return "T6ii";
    case TheoremId::T7: return "T7";
    case TheoremId::T7x: return "T7x";
    case TheoremId::T8: return "T8";
    case TheoremId::T9: return "T9";
    case TheoremId::T11i: return "T11i";
    case TheoremId::T11ii: return "T11ii";
    case TheoremId::T12: return "T12";
    case TheoremId::T13: return "T13";
    case TheoremId::T15: return "T15";
    case TheoremId::T16: return "T16";
    }
    return "?";
}

inline std::optional<TheoremId> parse_theorem_id(const std::string& s) {
    if (s == "T6i") return TheoremId::T6i;
    if (s == "T6ii") return TheoremId::T6ii;
    if (s == "T7") return TheoremId::T7;
    if (s == "T7x") return TheoremId::T7x;
    if (s == "T8") return TheoremId::T8;
    if (s == "T9") return TheoremId::T9;
    if (s == "T11i") return TheoremId::T11i;
    if (s == "T11ii") return TheoremId::T11ii;
    if (s == "T12") return TheoremId::T12;
    if (s == "T13") return TheoremId::T13;
    if (s == "T15") return TheoremId::T15;
    if (s == "T16") return TheoremId::T16;
    return std::nullopt;
}

/// Which plant an estimate speaks about.
inline PlantKind theorem_plant(TheoremId id) {
    switch (id) {
    case TheoremId::T6i:
    case TheoremId::T6ii:
    case TheoremId::T7:
    case TheoremId::T7x:
    case TheoremId::T8:
    case TheoremId::T9:
        return PlantKind::transport;
    default:
        return PlantKind::burgers;
    }
}

/// Envelope values against observed values along one trajectory.
/// max_violation is the worst observed - envelope; pass means every point
/// stays within tol_rel * envelope + tol_abs.
struct EnvelopeVerdict {
    std::string theorem_id;
    std::vector<double> times;
    std::vector<double> envelope_values;
    std::vector<double> observed_values;
    double max_violation = 0.0;
    double max_excess_over_allowance = 0.0;
    double tol_rel = 0.02;
    double tol_abs = 1e-6;
    bool pass = false;
    bool hypothesis_met = true;
    std::string hypothesis_note;
};

namespace detail {

inline void finish_verdict(EnvelopeVerdict& v) {
    double worst = -std::numeric_limits<double>::infinity();
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.times.size(); ++i) {
        const double violation = v.observed_values[i] - v.envelope_values[i];
        worst = std::max(worst, violation);
        excess = std::max(excess, violation - (v.tol_rel * v.envelope_values[i] + v.tol_abs));
    }
    v.max_violation = worst;
    v.max_excess_over_allowance = excess;
    v.pass = excess <= 0.0;
}

} // namespace detail

/// Hypothesis context for the verdict engine. sup_d_signal / sup_f_signal
/// are whole-signal suprema when known (used for the smallness hypotheses,
/// which quantify over all time); the running statistics stand in
/// otherwise.
struct HypothesisContext {
    std::optional<double> sup_d_signal;
    std::optional<double> sup_f_signal;
};

/// Compare one estimate against a trajectory, point by point in time.
inline EnvelopeVerdict verify(const TrajectoryRecord& traj, TheoremId which,
                              const EnvelopeParams& prm, double tol_rel = 0.02,
                              double tol_abs = 1e-6, const HypothesisContext& ctx = {}) {
    if (theorem_plant(which) != traj.plant) {
        throw ValidationError("verify: estimate " + to_string(which) +
                              " does not apply to the " + to_string(traj.plant) + " plant");
    }
    EnvelopeVerdict v;
    v.theorem_id = to_string(which);
    v.tol_rel = tol_rel;
    v.tol_abs = tol_abs;
    v.times = traj.times;
    const std::size_t n = traj.times.size();
    v.envelope_values.resize(n);
    v.observed_values.resize(n);

    // hypothesis flags
    const double sup_d_all = ctx.sup_d_signal.value_or(traj.final_stats().sup_d);
    const double sup_f_all = ctx.sup_f_signal.value_or(traj.final_stats().sup_f);
    switch (which) {
    case TheoremId::T6i:
    case TheoremId::T6ii:
    case TheoremId::T9:
        if (prm.shifted_reaction() < 0.0) {
            v.hypothesis_met = false;
            v.hypothesis_note = "m^2/(4mu) + n >= 0 violated";
        }
        break;
    case TheoremId::T11i:
    case TheoremId::T13:
        if (!(sup_d_all < prm.mu / prm.nu)) {
            v.hypothesis_met = false;
            v.hypothesis_note = "max|d| < mu/nu violated";
        }
        break;
    case TheoremId::T11ii:
    case TheoremId::T16:
        if (!(sup_d_all + degiorgi_gain(prm.p) / prm.mu * sup_f_all < prm.mu / prm.nu)) {
            v.hypothesis_met = false;
            v.hypothesis_note = "max|d| + gain max|f| < mu/nu violated";
        }
        break;
    default:
        break;
    }

    const auto run_max = traj.running_linf();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = traj.times[i];
        const RunningStats& st = traj.stats_series[i];
        const NormTriple& nm = traj.norm_series[i];
        double env = 0.0;
        double obs = 0.0;
        switch (which) {
        case TheoremId::T6i:
            env = envelope_T6i(prm, st, t);
            obs = nm.linf;
            break;
        case TheoremId::T6ii:
            env = envelope_T6ii(prm, st, t);
            obs = nm.linf;
            break;
        case TheoremId::T7:
            env = envelope_T7(prm, t).l2_sq;
            obs = nm.l2 * nm.l2;
            break;
        case TheoremId::T7x:
            env = envelope_T7(prm, t).dx_l2_sq;
            obs = std::max(0.0, nm.h1 * nm.h1 - nm.l2 * nm.l2);
            break;
        case TheoremId::T8:
            env = envelope_T8(prm, t);
            obs = nm.linf;
            break;
        case TheoremId::T9:
            env = envelope_T9(prm, st);
            obs = run_max[i];
            break;
        case TheoremId::T11i:
            env = envelope_T11i(prm, st, t);
            obs = nm.l2 * nm.l2;
            break;
        case TheoremId::T11ii:
            env = envelope_T11ii(prm, st, t);
            obs = nm.l2 * nm.l2;
            break;
        case TheoremId::T12:
            env = envelope_T12(st);
            obs = run_max[i];
            break;
        case TheoremId::T13:
            env = envelope_T13(prm, st, t);
            obs = nm.l2 * nm.l2;
            break;
        case TheoremId::T15:
            env = envelope_T15(prm, st);
            obs = run_max[i];
            break;
        case TheoremId::T16:
            env = envelope_T16(prm, t);
            obs = nm.l2 * nm.l2;
            break;
        }
        v.envelope_values[i] = env;
        v.observed_values[i] = obs;
    }
    detail::finish_verdict(v);
    return v;
}

} // namespace isslab
