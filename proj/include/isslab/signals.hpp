#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isslab/errors.hpp"
#include "isslab/grid.hpp"

namespace isslab {

namespace detail {

/// Catmull-Rom interpolation through uniformly spaced samples; C1 smooth.
/// Evaluation is clamped to the sampled range.
inline double catmull_rom(const std::vector<double>& samples, double step, double s) {
    const std::size_t n = samples.size();
    if (n == 0) throw ValidationError("table signal: no samples");
    if (n == 1) return samples[0];
    double pos = s / step;
    if (pos <= 0.0) return samples.front();
    if (pos >= static_cast<double>(n - 1)) return samples.back();
    const std::size_t i = static_cast<std::size_t>(pos);
    const double u = pos - static_cast<double>(i);
    const double p1 = samples[i];
    const double p2 = samples[i + 1];
    const double p0 = (i > 0) ? samples[i - 1] : 2.0 * p1 - p2;
    const double p3 = (i + 2 < n) ? samples[i + 2] : 2.0 * p2 - p1;
    const double a = 2.0 * p1;
    const double b = p2 - p0;
    const double c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    const double d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
    return 0.5 * (a + b * u + c * u * u + d * u * u * u);
}

} // namespace detail

/// Spatial profile on [0,1]; used for initial conditions and for the
/// space factor of separable in-domain disturbances.
class SpaceProfile {
public:
    enum class Kind { zero, polynomial, sine_mode, table, custom };

    SpaceProfile() : kind_(Kind::zero) {}

    static SpaceProfile zero() { return SpaceProfile(); }

    /// coeffs[k] multiplies x^k.
    static SpaceProfile polynomial(std::vector<double> coeffs) {
        SpaceProfile p;
        p.kind_ = Kind::polynomial;
        p.coeffs_ = std::move(coeffs);
        return p;
    }

    static SpaceProfile constant(double value) { return polynomial({value}); }

    /// amplitude * sin(mode * pi * x); vanishes at both endpoints.
    static SpaceProfile sine_mode(double amplitude, int mode) {
        if (mode < 1) throw ValidationError("sine_mode: mode must be >= 1");
        SpaceProfile p;
        p.kind_ = Kind::sine_mode;
        p.amplitude_ = amplitude;
        p.mode_ = mode;
        return p;
    }

    /// Samples on a uniform grid over [0,1], cubic-interpolated.
    static SpaceProfile table(std::vector<double> samples) {
        if (samples.size() < 2) throw ValidationError("table profile: need >= 2 samples");
        SpaceProfile p;
        p.kind_ = Kind::table;
        p.samples_ = std::move(samples);
        return p;
    }

    static SpaceProfile from_function(std::function<double(double)> fn) {
        SpaceProfile p;
        p.kind_ = Kind::custom;
        p.fn_ = std::move(fn);
        return p;
    }

    Kind kind() const { return kind_; }

    double operator()(double x) const {
        switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::polynomial: {
            double acc = 0.0;
            for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
            return acc;
        }
        case Kind::sine_mode:
            return amplitude_ * std::sin(static_cast<double>(mode_) * M_PI * x);
        case Kind::table: {
            const double step = 1.0 / static_cast<double>(samples_.size() - 1);
            return detail::catmull_rom(samples_, step, x);
        }
        case Kind::custom:
            return fn_(x);
        }
        return 0.0;
    }

    GridFunction sample(std::shared_ptr<const Grid> g) const {
        return GridFunction::sample(std::move(g), [this](double x) { return (*this)(x); });
    }

    double max_abs(int scan_points = 2049) const {
        double m = 0.0;
        for (int i = 0; i < scan_points; ++i) {
            const double x = static_cast<double>(i) / static_cast<double>(scan_points - 1);
            m = std::max(m, std::abs((*this)(x)));
        }
        return m;
    }

private:
    Kind kind_;
    std::vector<double> coeffs_;
    double amplitude_ = 0.0;
    int mode_ = 1;
    std::vector<double> samples_;
    std::function<double(double)> fn_;
};

using InitialCondition = SpaceProfile;

/// Boundary disturbance d(t) driving the Dirichlet value at x = 1.
/// Analytic kinds are C2 in t; table signals are cubic-interpolated
/// (C1, flagged as approximately C2).
class BoundarySignal {
public:
    enum class Kind { zero, constant, sinusoid, decaying_sinusoid, table, custom };

    BoundarySignal() : kind_(Kind::zero) {}

    static BoundarySignal zero() { return BoundarySignal(); }

    static BoundarySignal constant(double amplitude) {
        BoundarySignal s;
        s.kind_ = Kind::constant;
        s.amplitude_ = amplitude;
        return s;
    }

    /// amplitude * sin(omega t); omega in rad/s. Starts at 0.
    static BoundarySignal sinusoid(double amplitude, double omega) {
        BoundarySignal s;
        s.kind_ = Kind::sinusoid;
        s.amplitude_ = amplitude;
        s.omega_ = omega;
        return s;
    }

    /// amplitude * exp(-decay t) * sin(omega t).
    static BoundarySignal decaying_sinusoid(double amplitude, double omega, double decay) {
        if (decay < 0.0) throw ValidationError("decaying_sinusoid: decay must be >= 0");
        BoundarySignal s;
        s.kind_ = Kind::decaying_sinusoid;
        s.amplitude_ = amplitude;
        s.omega_ = omega;
        s.decay_ = decay;
        return s;
    }

    /// Uniform samples d(0), d(sample_dt), ...; cubic-interpolated, clamped
    /// to the last sample beyond the table end.
    static BoundarySignal table(std::vector<double> samples, double sample_dt) {
        if (samples.size() < 2) throw ValidationError("table signal: need >= 2 samples");
        if (!(sample_dt > 0.0)) throw ValidationError("table signal: sample_dt must be > 0");
        BoundarySignal s;
        s.kind_ = Kind::table;
        s.samples_ = std::move(samples);
        s.sample_dt_ = sample_dt;
        return s;
    }

    static BoundarySignal from_function(std::function<double(double)> fn) {
        BoundarySignal s;
        s.kind_ = Kind::custom;
        s.fn_ = std::move(fn);
        return s;
    }

    Kind kind() const { return kind_; }

    /// True when smoothness is only approximate (interpolated table data).
    bool approximate_smoothness() const { return kind_ == Kind::table; }

    double operator()(double t) const {
        if (t < 0.0) throw ValidationError("boundary signal: t must be >= 0");
        switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::constant:
            return amplitude_;
        case Kind::sinusoid:
            return amplitude_ * std::sin(omega_ * t);
        case Kind::decaying_sinusoid:
            return amplitude_ * std::exp(-decay_ * t) * std::sin(omega_ * t);
        case Kind::table:
            return detail::catmull_rom(samples_, sample_dt_, t);
        case Kind::custom:
            return fn_(t);
        }
        return 0.0;
    }

    /// Supremum of |d| over all t >= 0 when known in closed form.
    std::optional<double> sup_all_time() const {
        switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::constant:
        case Kind::sinusoid:
        case Kind::decaying_sinusoid:
            return std::abs(amplitude_);
        case Kind::table: {
            double m = 0.0;
            // interpolation can overshoot samples slightly; scan densely
            const double t_end = sample_dt_ * static_cast<double>(samples_.size() - 1);
            const int pts = static_cast<int>(samples_.size()) * 8;
            for (int i = 0; i <= pts; ++i) {
                m = std::max(m, std::abs((*this)(t_end * i / pts)));
            }
            return m;
        }
        case Kind::custom:
            return std::nullopt;
        }
        return std::nullopt;
    }

private:
    Kind kind_;
    double amplitude_ = 0.0;
    double omega_ = 0.0;
    double decay_ = 0.0;
    std::vector<double> samples_;
    double sample_dt_ = 1.0;
    std::function<double(double)> fn_;
};

/// In-domain disturbance f(x,t).
class FieldSignal {
public:
    enum class Kind { zero, separable, traveling, table, custom };

    FieldSignal() : kind_(Kind::zero) {}

    static FieldSignal zero() { return FieldSignal(); }

    /// g(x) * s(t).
    static FieldSignal separable(SpaceProfile g, BoundarySignal s) {
        FieldSignal f;
        f.kind_ = Kind::separable;
        f.space_ = std::move(g);
        f.time_ = std::move(s);
        return f;
    }

    /// g(x - c t) with the argument wrapped into [0,1).
    static FieldSignal traveling(SpaceProfile g, double speed) {
        FieldSignal f;
        f.kind_ = Kind::traveling;
        f.space_ = std::move(g);
        f.speed_ = speed;
        return f;
    }

    /// Samples on a uniform space-time lattice; bilinear in (x,t).
    static FieldSignal table(std::vector<std::vector<double>> rows, double sample_dt) {
        if (rows.size() < 2) throw ValidationError("field table: need >= 2 time rows");
        const std::size_t nx = rows.front().size();
        if (nx < 2) throw ValidationError("field table: need >= 2 space samples");
        for (const auto& r : rows) {
            if (r.size() != nx) throw ValidationError("field table: ragged rows");
        }
        if (!(sample_dt > 0.0)) throw ValidationError("field table: sample_dt must be > 0");
        FieldSignal f;
        f.kind_ = Kind::table;
        f.rows_ = std::move(rows);
        f.sample_dt_ = sample_dt;
        return f;
    }

    static FieldSignal from_function(std::function<double(double, double)> fn) {
        FieldSignal f;
        f.kind_ = Kind::custom;
        f.fn_ = std::move(fn);
        return f;
    }

    Kind kind() const { return kind_; }
    bool approximate_smoothness() const { return kind_ == Kind::table; }

    bool is_zero() const { return kind_ == Kind::zero; }

    double operator()(double x, double t) const {
        if (t < 0.0) throw ValidationError("field signal: t must be >= 0");
        switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::separable:
            return space_(x) * time_(t);
        case Kind::traveling: {
            double arg = x - speed_ * t;
            arg -= std::floor(arg);
            return space_(arg);
        }
        case Kind::table: {
            const std::size_t nt = rows_.size();
            const std::size_t nx = rows_.front().size();
            double tp = t / sample_dt_;
            tp = std::min(tp, static_cast<double>(nt - 1));
            double xp = x * static_cast<double>(nx - 1);
            xp = std::clamp(xp, 0.0, static_cast<double>(nx - 1));
            const std::size_t i = std::min(static_cast<std::size_t>(tp), nt - 2);
            const std::size_t j = std::min(static_cast<std::size_t>(xp), nx - 2);
            const double a = tp - static_cast<double>(i);
            const double b = xp - static_cast<double>(j);
            return (1 - a) * ((1 - b) * rows_[i][j] + b * rows_[i][j + 1]) +
                   a * ((1 - b) * rows_[i + 1][j] + b * rows_[i + 1][j + 1]);
        }
        case Kind::custom:
            return fn_(x, t);
        }
        return 0.0;
    }

    GridFunction sample(std::shared_ptr<const Grid> g, double t) const {
        return GridFunction::sample(std::move(g), [this, t](double x) { return (*this)(x, t); });
    }

    /// Supremum of |f| over [0,1] x [0,inf) when known in closed form.
    std::optional<double> sup_all_time() const {
        switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::separable: {
            auto st = time_.sup_all_time();
            if (!st) return std::nullopt;
            return space_.max_abs() * (*st);
        }
        case Kind::traveling:
            return space_.max_abs();
        case Kind::table: {
            double m = 0.0;
            for (const auto& r : rows_)
                for (double v : r) m = std::max(m, std::abs(v));
            return m;
        }
        case Kind::custom:
            return std::nullopt;
        }
        return std::nullopt;
    }

private:
    Kind kind_;
    SpaceProfile space_;
    BoundarySignal time_;
    double speed_ = 0.0;
    std::vector<std::vector<double>> rows_;
    double sample_dt_ = 1.0;
    std::function<double(double, double)> fn_;
};

/// Running disturbance statistics along a trajectory: the max of |d| over
/// sample times so far, the max of |f| over grid x time, and the time
/// integral of ||f||^2 by the trapezoid rule.
struct RunningStats {
    double sup_d = 0.0;
    double sup_f = 0.0;
    double int_f_l2sq = 0.0;

    // trapezoid memory and signed extremes of d (De Giorgi base levels)
    double last_f_l2sq = 0.0;
    double d_signed_max = 0.0;
    double d_signed_min = 0.0;
    bool seeded = false;
};

/// Fold one sample into the running statistics. The first call seeds the
/// trapezoid memory without accumulating; subsequent calls add
/// dt * (previous + current)/2 to the f-integral.
inline RunningStats update_stats(RunningStats stats, double d_value,
                                 const GridFunction& f_snapshot, double dt) {
    if (!(dt > 0.0)) throw ValidationError("update_stats: dt must be > 0");
    const double f_l2 = l2_norm(f_snapshot);
    const double f_l2sq = f_l2 * f_l2;
    if (stats.seeded) {
        stats.int_f_l2sq += 0.5 * dt * (stats.last_f_l2sq + f_l2sq);
        stats.d_signed_max = std::max(stats.d_signed_max, d_value);
        stats.d_signed_min = std::min(stats.d_signed_min, d_value);
    } else {
        stats.d_signed_max = d_value;
        stats.d_signed_min = d_value;
        stats.seeded = true;
    }
    stats.sup_d = std::max(stats.sup_d, std::abs(d_value));
    stats.sup_f = std::max(stats.sup_f, f_snapshot.max_abs());
    stats.last_f_l2sq = f_l2sq;
    return stats;
}

} // namespace isslab
