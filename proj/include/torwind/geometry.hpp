#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "torwind/errors.hpp"

namespace torwind {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

enum class Space { plane, torus };

/// Canonical torus coordinates, both in [0, 2*pi).
struct TorusPoint {
    double u = 0.0;
    double v = 0.0;
};

namespace detail {
inline double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    if (w >= kTwoPi) // fmod result rounded up to exactly 2*pi
        w -= kTwoPi;
    return w;
}
} // namespace detail

/// Canonical representative of (u, v) in [0, 2*pi)^2.
inline TorusPoint wrap_torus(double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v))
        throw ValidationError("wrap_torus: non-finite input");
    return {detail::wrap_angle(u), detail::wrap_angle(v)};
}

/// Flat quotient metric on the torus: per-component min(|d|, 2*pi - |d|),
/// combined Euclidean.
inline double torus_distance(TorusPoint a, TorusPoint b) {
    double du = std::fabs(a.u - b.u);
    du = std::min(du, kTwoPi - du);
    double dv = std::fabs(a.v - b.v);
    dv = std::min(dv, kTwoPi - dv);
    return std::hypot(du, dv);
}

inline constexpr int kDefaultCurveSamples = 4096;
inline constexpr double kEpsClose = 1e-9;  // closedness tolerance
inline constexpr double kEpsReg = 1e-12;   // sample tangent-norm floor
inline constexpr double kEpsSnap = 1e-6;   // lap-count rounding residual

/// Smooth closed parametrized curve on [0, 2*pi], with a plane or torus
/// target. Construction validates closedness (endpoint matches start; on
/// the torus, after wrapping) and regularity on samples (finite-difference
/// tangent norm above kEpsReg). Global injectivity is not checked.
class ParamCurve {
public:
    using Component = std::function<double(double)>;

    static ParamCurve closed(Component x_of_t, Component y_of_t, Space target,
                             int sample_count = kDefaultCurveSamples) {
        ParamCurve c(std::move(x_of_t), std::move(y_of_t), target, sample_count);
        c.validate();
        return c;
    }

    Vec2 at(double t) const { return {x_(t), y_(t)}; }

    TorusPoint at_wrapped(double t) const {
        if (target_ != Space::torus)
            throw ValidationError("at_wrapped: curve target is the plane");
        return wrap_torus(x_(t), y_(t));
    }

    Space target() const { return target_; }
    int sample_count() const { return sample_count_; }

private:
    ParamCurve(Component x, Component y, Space target, int sample_count)
        : x_(std::move(x)), y_(std::move(y)), target_(target),
          sample_count_(sample_count) {
        if (sample_count_ < 8)
            throw ValidationError("ParamCurve: sample_count must be >= 8");
    }

    void validate() const {
        const Vec2 start = at(0.0);
        const Vec2 end = at(kTwoPi);
        const double gap = target_ == Space::torus
                               ? torus_distance(wrap_torus(start.x, start.y),
                                                wrap_torus(end.x, end.y))
                               : distance(start, end);
        if (!(gap < kEpsClose))
            throw ValidationError(
                "ParamCurve: curve is not closed (endpoint gap " +
                std::to_string(gap) + ")");

        const double half_step = kPi / sample_count_;
        for (int j = 0; j < sample_count_; ++j) {
            const double t = kTwoPi * j / sample_count_;
            const Vec2 tangent =
                (at(t + half_step) - at(t - half_step)) / (2.0 * half_step);
            if (!(tangent.norm() > kEpsReg))
                throw ValidationError(
                    "ParamCurve: tangent vanishes near t = " + std::to_string(t));
        }
    }

    Component x_, y_;
    Space target_;
    int sample_count_;
};

/// Lap counts (p, q) of a closed torus curve around the two fundamental
/// circles; (0,0) means the curve is not essential.
struct CurveType {
    int p = 0;
    int q = 0;
    bool essential() const { return p != 0 || q != 0; }
    bool operator==(const CurveType&) const = default;
};

namespace detail {
// Reduce an angle difference into (-pi, pi].
inline double principal_delta(double d) {
    double r = std::fmod(d, kTwoPi);
    if (r > kPi)
        r -= kTwoPi;
    else if (r <= -kPi)
        r += kTwoPi;
    return r;
}
} // namespace detail

/// Type (p, q) of a closed torus curve: the continuous lift is built by
/// unwrapping the per-sample jumps, and the total displacement divided by
/// 2*pi is rounded to the nearest integer. A rounding residual of kEpsSnap
/// or more signals under-sampling or a non-closed curve.
inline CurveType curve_type(const ParamCurve& curve) {
    if (curve.target() != Space::torus)
        throw ValidationError("curve_type: curve must live on the torus");
    const int n = curve.sample_count();
    TorusPoint prev = curve.at_wrapped(0.0);
    double lift_u = prev.u, lift_v = prev.v;
    const double u0 = prev.u, v0 = prev.v;
    for (int j = 1; j <= n; ++j) {
        const TorusPoint w = curve.at_wrapped(kTwoPi * j / n);
        lift_u += detail::principal_delta(w.u - prev.u);
        lift_v += detail::principal_delta(w.v - prev.v);
        prev = w;
    }
    const double p_raw = (lift_u - u0) / kTwoPi;
    const double q_raw = (lift_v - v0) / kTwoPi;
    const double p_round = std::round(p_raw);
    const double q_round = std::round(q_raw);
    const double residual =
        std::max(std::fabs(p_raw - p_round), std::fabs(q_raw - q_round));
    if (!(residual < kEpsSnap))
        throw ValidationError(
            "curve_type: lap counts are not integral (residual " +
            std::to_string(residual) + "); curve under-sampled or not closed");
    return {static_cast<int>(p_round), static_cast<int>(q_round)};
}

/// Minimum over sample pairs of the point distance (torus-geodesic on the
/// torus, Euclidean in the plane). A positive lower-bound certificate up
/// to sampling resolution.
inline double curve_distance(const ParamCurve& a, const ParamCurve& b) {
    if (a.target() != b.target())
        throw ValidationError("curve_distance: curves live on different targets");
    const int na = a.sample_count();
    const int nb = b.sample_count();
    double best = std::numeric_limits<double>::infinity();
    if (a.target() == Space::torus) {
        std::vector<TorusPoint> pa(na), pb(nb);
        for (int i = 0; i < na; ++i)
            pa[i] = a.at_wrapped(kTwoPi * i / na);
        for (int j = 0; j < nb; ++j)
            pb[j] = b.at_wrapped(kTwoPi * j / nb);
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                double du = std::fabs(pa[i].u - pb[j].u);
                if (du > kPi) du = kTwoPi - du;
                double dv = std::fabs(pa[i].v - pb[j].v);
                if (dv > kPi) dv = kTwoPi - dv;
                const double d2 = du * du + dv * dv;
                if (d2 < best)
                    best = d2;
            }
    } else {
        std::vector<Vec2> pa(na), pb(nb);
        for (int i = 0; i < na; ++i)
            pa[i] = a.at(kTwoPi * i / na);
        for (int j = 0; j < nb; ++j)
            pb[j] = b.at(kTwoPi * j / nb);
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                const double dx = pa[i].x - pb[j].x;
                const double dy = pa[i].y - pb[j].y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best)
                    best = d2;
            }
    }
    return std::sqrt(best);
}

/// Orientation-reversed copy: t -> curve(2*pi - t).
inline ParamCurve reversed(const ParamCurve& c) {
    return ParamCurve::closed([c](double t) { return c.at(kTwoPi - t).x; },
                              [c](double t) { return c.at(kTwoPi - t).y; },
                              c.target(), c.sample_count());
}

} // namespace torwind
