#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "isslab/errors.hpp"
#include "isslab/signals.hpp"

namespace isslab {

enum class PlantKind { transport, burgers, reaction, closed_loop };

inline std::string to_string(PlantKind k) {
    switch (k) {
    case PlantKind::transport: return "transport";
    case PlantKind::burgers: return "burgers";
    case PlantKind::reaction: return "reaction";
    case PlantKind::closed_loop: return "closed_loop";
    }
    return "?";
}

/// u_t - mu u_xx + m u_x + n u = f with u(0,t)=0, u(1,t)=d(t).
struct TransportParams {
    double mu = 1.0;
    double m = 0.0;
    double n = 0.0;

    /// Decay-hypothesis flag: m^2/(4 mu) + n >= 0. The solver runs either
    /// way; the exponential envelopes are only claimed when this holds.
    bool stability_margin_ok() const { return m * m / (4.0 * mu) + n >= 0.0; }
    double shifted_reaction() const { return m * m / (4.0 * mu) + n; }
};

/// u_t - mu u_xx + nu u u_x = f with u(0,t)=0, u(1,t)=d(t).
struct BurgersParams {
    double mu = 1.0;
    double nu = 1.0;
};

/// u_t - mu u_xx + m u_x + a(x) u = f with u(0,t)=0 and controlled/disturbed
/// right boundary. m is the optional advection of the shifted variant.
struct ReactionParams {
    double mu = 1.0;
    SpaceProfile a = SpaceProfile::constant(0.0);
    double m = 0.0;
};

struct Discretization {
    int n_cells = 200;
    double dt = 1e-3;
    double t_final = 5.0;
    int snapshot_stride = 10;
};

/// Which subsystem of a two-part splitting carries the in-domain
/// disturbance f.
enum class FPlacement {
    boundary_subsystem,    ///< f rides with the boundary-disturbed, zero-initial part
    homogeneous_subsystem, ///< f rides with the homogeneous-boundary part holding u0
};

struct VerificationParams {
    std::vector<std::string> theorems;
    double p = 4.0;
    std::optional<double> epsilon; ///< empty = midpoint of the admissible interval
    double tol_rel = 0.02;
    double tol_abs = 1e-6;
    bool subsystems_on_original = false; ///< check subsystem estimates on the full trajectory
};

/// Complete description of one run: plant + coefficients + signals +
/// discretization + verification request.
struct Scenario {
    std::string name = "scenario";
    PlantKind plant = PlantKind::transport;

    TransportParams transport;
    BurgersParams burgers;
    ReactionParams reaction;
    double target_n = 1.0; ///< closed-loop target decay coefficient (>= 0)

    InitialCondition u0 = SpaceProfile::zero();
    BoundarySignal d = BoundarySignal::zero();
    FieldSignal f = FieldSignal::zero();

    Discretization disc;
    VerificationParams verification;

    /// Subsystems of a splitting may carry a jump between u0(1) and d(0)
    /// even when the parent scenario is compatible; split() sets this.
    bool allow_corner_mismatch = false;

    double mu() const {
        switch (plant) {
        case PlantKind::transport: return transport.mu;
        case PlantKind::burgers: return burgers.mu;
        case PlantKind::reaction:
        case PlantKind::closed_loop: return reaction.mu;
        }
        return 0.0;
    }

    /// All validation failures, empty when the scenario is runnable.
    std::vector<std::string> validate() const {
        std::vector<std::string> errs;
        if (!(mu() > 0.0)) errs.push_back("mu must be positive");
        if (plant == PlantKind::burgers && !(burgers.nu > 0.0)) {
            errs.push_back("nu must be positive");
        }
        if (plant == PlantKind::closed_loop && target_n < 0.0) {
            errs.push_back("target_n must be >= 0");
        }
        if (disc.n_cells < 3) errs.push_back("n_cells must be >= 3");
        if (!(disc.dt > 0.0)) errs.push_back("dt must be positive");
        if (!(disc.t_final > 0.0)) errs.push_back("t_final must be positive");
        if (disc.snapshot_stride < 1) errs.push_back("snapshot_stride must be >= 1");
        if (verification.p <= 2.0) errs.push_back("p must be > 2");
        if (!(verification.tol_rel >= 0.0)) errs.push_back("tolerance_rel must be >= 0");

        // Initial/boundary compatibility. The closed loop sets its own
        // right-boundary value, so only u0(0)=0 applies there.
        if (std::abs(u0(0.0)) > 1e-12) {
            errs.push_back("u0(0) must vanish (left boundary is pinned to zero)");
        }
        if (plant != PlantKind::closed_loop && !allow_corner_mismatch) {
            const double mismatch = std::abs(u0(1.0) - d(0.0));
            if (mismatch > 1e-12) {
                errs.push_back("incompatible data: u0(1) must equal d(0), mismatch = " +
                               std::to_string(mismatch));
            }
        }
        return errs;
    }

    void validate_or_throw() const {
        const auto errs = validate();
        if (errs.empty()) return;
        std::string msg = "invalid scenario '" + name + "':";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ValidationError(msg);
    }
};

} // namespace isslab
