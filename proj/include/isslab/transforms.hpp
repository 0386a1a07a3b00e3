#pragma once

#include <cmath>
#include <string>

#include "isslab/errors.hpp"
#include "isslab/grid.hpp"
#include "isslab/scenario.hpp"
#include "isslab/solvers.hpp"

namespace isslab {

/// Pointwise exponential weight removing the advection term:
/// forward multiplies by e^{m x / (2 mu)}, inverse by e^{-m x / (2 mu)}.
/// The weighted field solves the same plant with m = 0 and reaction
/// shifted to m^2/(4 mu) + n.
struct ExpTransform {
    enum class Direction { forward, inverse };
    double m = 0.0;
    double mu = 1.0;
    Direction direction = Direction::forward;

    ExpTransform inverted() const {
        ExpTransform t = *this;
        t.direction = (direction == Direction::forward) ? Direction::inverse
                                                        : Direction::forward;
        return t;
    }

    double weight(double x) const {
        const double e = m * x / (2.0 * mu);
        return (direction == Direction::forward) ? std::exp(e) : std::exp(-e);
    }
};

inline GridFunction exp_transform(const GridFunction& f, const ExpTransform& xf) {
    GridFunction out = f;
    for (int i = 0; i < f.size(); ++i) {
        out[i] = f[i] * xf.weight(f.grid->nodes[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// Two-subsystem decomposition of a scenario. subsystem_w keeps the
/// initial data under homogeneous boundary values; subsystem_v starts
/// from zero and carries the boundary disturbance. Their boundary and
/// initial data sum to the parent's. For Burgers the subsystem holding
/// the initial data additionally carries coupling terms driven by the
/// boundary subsystem's trajectory, so that one must be solved first.
struct SplitPair {
    Scenario subsystem_w;
    Scenario subsystem_v;
    FPlacement placement = FPlacement::boundary_subsystem;
    bool w_needs_v_trajectory = false;
};

inline SplitPair split(const Scenario& s, FPlacement placement = FPlacement::boundary_subsystem) {
    if (s.plant != PlantKind::transport && s.plant != PlantKind::burgers) {
        throw ValidationError("split: only the transport and burgers plants decompose");
    }
    SplitPair pair;
    pair.placement = placement;

    Scenario w = s;
    w.name = s.name + "_w";
    w.u0 = s.u0;
    w.d = BoundarySignal::zero();
    w.f = (placement == FPlacement::homogeneous_subsystem) ? s.f : FieldSignal::zero();
    w.allow_corner_mismatch = true;
    w.verification.theorems.clear();

    Scenario v = s;
    v.name = s.name + "_v";
    v.u0 = SpaceProfile::zero();
    v.d = s.d;
    v.f = (placement == FPlacement::boundary_subsystem) ? s.f : FieldSignal::zero();
    v.allow_corner_mismatch = true;
    v.verification.theorems.clear();

    pair.subsystem_w = std::move(w);
    pair.subsystem_v = std::move(v);
    pair.w_needs_v_trajectory = (s.plant == PlantKind::burgers);
    return pair;
}

/// Maximum node-wise deviation |u - (w + v)| over the common snapshot
/// times. Only the linear transport plant superposes exactly; Burgers is
/// rejected.
inline double verify_superposition(const TrajectoryRecord& original,
                                   const TrajectoryRecord& w, const TrajectoryRecord& v) {
    if (original.plant != PlantKind::transport || w.plant != PlantKind::transport ||
        v.plant != PlantKind::transport) {
        throw ValidationError("verify_superposition: exact superposition is a linear property; "
                              "only the transport plant qualifies");
    }
    if (original.grid->n_cells != w.grid->n_cells || original.grid->n_cells != v.grid->n_cells ||
        original.snapshot_steps != w.snapshot_steps ||
        original.snapshot_steps != v.snapshot_steps) {
        throw DimensionError("verify_superposition: trajectories use different discretizations");
    }
    double dev = 0.0;
    for (std::size_t k = 0; k < original.snapshots.size(); ++k) {
        const GridFunction& a = original.snapshots[k];
        const GridFunction& b = w.snapshots[k];
        const GridFunction& c = v.snapshots[k];
        for (int i = 0; i < a.size(); ++i) {
            dev = std::max(dev, std::abs(a[i] - (b[i] + c[i])));
        }
    }
    return dev;
}

/// Run both halves of a splitting. For Burgers the boundary subsystem is
/// integrated first at full snapshot resolution and drives the coupled
/// companion system.
struct SplitTrajectories {
    TrajectoryRecord w;
    TrajectoryRecord v;
};

inline SplitTrajectories simulate_split(const Scenario& s,
                                        FPlacement placement = FPlacement::boundary_subsystem) {
    SplitPair pair = split(s, placement);
    SplitTrajectories out;
    if (s.plant == PlantKind::transport) {
        out.w = simulate(pair.subsystem_w);
        out.w.role = "subsystem_w";
        out.v = simulate(pair.subsystem_v);
        out.v.role = "subsystem_v";
        return out;
    }
    Scenario v_full = pair.subsystem_v;
    v_full.disc.snapshot_stride = 1;
    out.v = simulate(v_full);
    out.v.role = "subsystem_v";
    out.w = simulate_burgers_coupled(pair.subsystem_w, out.v);
    return out;
}

} // namespace isslab
