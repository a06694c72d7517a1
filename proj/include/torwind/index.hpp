#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "torwind/errors.hpp"
#include "torwind/field.hpp"
#include "torwind/geometry.hpp"

namespace torwind {

enum class IndexStatus {
    ok,         // snap residual below snap_tol
    suspicious, // residual in [snap_tol, snap_error): reported, not trusted
};

inline const char* to_string(IndexStatus s) {
    return s == IndexStatus::ok ? "ok" : "suspicious";
}

/// Winding-number result: `raw` is the value before snapping, `snapped`
/// the nearest integer, `panels` the final quadrature panel count (or
/// sample count for the unwrapping route), and `min_field_norm` the
/// smallest ||X|| seen on the curve.
struct IndexResult {
    double raw = 0.0;
    long long snapped = 0;
    double snap_residual = 0.0;
    long long panels = 0;
    double min_field_norm = 0.0;
    IndexStatus status = IndexStatus::ok;
};

struct IndexOptions {
    double convergence_tol = 1e-9;      // |raw_k - raw_{k-1}| stop criterion
    long long panel_cap = 1LL << 20;    // refinement ceiling
    long long initial_panels = 64;      // starting resolution (even)
    double snap_tol = 1e-3;             // residual below this: valid
    double snap_error = 1e-1;           // residual at or above this: error
    double zero_tol = kEpsZero;         // field-norm floor on the curve
    double max_angle_jump = kPi / 2.0;  // unwrap sampling adequacy bound
};

namespace detail {

inline IndexResult classify_index(double raw, long long panels,
                                  double min_norm, const IndexOptions& opts) {
    IndexResult r;
    r.raw = raw;
    r.snapped = std::llround(raw);
    r.snap_residual = std::fabs(raw - static_cast<double>(r.snapped));
    r.panels = panels;
    r.min_field_norm = min_norm;
    if (r.snap_residual >= opts.snap_error)
        throw NumericError("index: value " + std::to_string(raw) +
                           " is far from any integer; the field likely "
                           "vanishes on or near the curve");
    r.status = r.snap_residual < opts.snap_tol ? IndexStatus::ok
                                               : IndexStatus::suspicious;
    return r;
}

// Field samples along the curve at n uniform parameters; throws if the
// field norm drops to the zero floor. Updates min_norm.
inline std::vector<Vec2> sample_field_on_curve(const PlaneVectorField& X,
                                               const ParamCurve& curve, long long n,
                                               double zero_tol, double& min_norm) {
    std::vector<Vec2> V(static_cast<std::size_t>(n));
    min_norm = std::numeric_limits<double>::infinity();
    for (long long j = 0; j < n; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        V[static_cast<std::size_t>(j)] = X.at(curve.at(t));
        const double norm = V[static_cast<std::size_t>(j)].norm();
        min_norm = std::min(min_norm, norm);
        if (norm <= zero_tol)
            throw NumericError("index: field vanishes on the curve near t = " +
                               std::to_string(t));
    }
    return V;
}

} // namespace detail

/// Winding number by quadrature of
///   (1/2pi) * integral over [0,2pi] of det(V, V') / ||V||^2 dt,
/// V(t) = X(curve(t)). V' uses 4th-order central differences on the same
/// panel grid with periodic wraparound; composite Simpson on uniform
/// panels, doubled until successive values agree to convergence_tol or the
/// panel cap is reached.
inline IndexResult index_quadrature(const PlaneVectorField& X,
                                    const ParamCurve& curve,
                                    const IndexOptions& opts = {}) {
    if (curve.target() != Space::plane)
        throw ValidationError("index_quadrature: curve must live in the plane");

    double prev_raw = 0.0;
    bool have_prev = false;
    for (long long n = opts.initial_panels; n <= opts.panel_cap; n *= 2) {
        double min_norm = 0.0;
        const std::vector<Vec2> V =
            detail::sample_field_on_curve(X, curve, n, opts.zero_tol, min_norm);
        const double h = kTwoPi / static_cast<double>(n);

        // Simpson weights on the periodic grid: node 0 carries 1 + 1 (both
        // interval endpoints), odd nodes 4, even nodes 2.
        double sum = 0.0;
        for (long long j = 0; j < n; ++j) {
            const std::size_t jm2 = static_cast<std::size_t>((j - 2 + n) % n);
            const std::size_t jm1 = static_cast<std::size_t>((j - 1 + n) % n);
            const std::size_t jp1 = static_cast<std::size_t>((j + 1) % n);
            const std::size_t jp2 = static_cast<std::size_t>((j + 2) % n);
            const std::size_t ji = static_cast<std::size_t>(j);
            const Vec2 dV = (V[jm2] - V[jp2] + 8.0 * (V[jp1] - V[jm1])) / (12.0 * h);
            const double integrand = cross(V[ji], dV) / dot(V[ji], V[ji]);
            sum += (j % 2 == 1 ? 4.0 : 2.0) * integrand;
        }
        const double raw = sum * h / 3.0 / kTwoPi;

        if (have_prev && std::fabs(raw - prev_raw) < opts.convergence_tol)
            return detail::classify_index(raw, n, min_norm, opts);
        prev_raw = raw;
        have_prev = true;
    }
    throw NumericError("index_quadrature: no convergence at the panel cap");
}

/// Winding number by angle continuation: theta(t) = atan2(Q, P) along the
/// curve, with jumps above pi unwrapped by +-2pi; returns the total angle
/// change over 2pi. Grid doubled until stable; serves as the independent
/// oracle for index_quadrature.
inline IndexResult index_unwrap(const PlaneVectorField& X,
                                const ParamCurve& curve,
                                const IndexOptions& opts = {}) {
    if (curve.target() != Space::plane)
        throw ValidationError("index_unwrap: curve must live in the plane");

    double prev_raw = 0.0;
    bool have_prev = false;
    for (long long n = opts.initial_panels; n <= opts.panel_cap; n *= 2) {
        double min_norm = std::numeric_limits<double>::infinity();
        double total = 0.0;
        double max_jump = 0.0;
        double prev_theta = 0.0;
        for (long long j = 0; j <= n; ++j) {
            const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            const Vec2 v = X.at(curve.at(t));
            const double norm = v.norm();
            min_norm = std::min(min_norm, norm);
            if (norm <= opts.zero_tol)
                throw NumericError(
                    "index: field vanishes on the curve near t = " +
                    std::to_string(t));
            const double theta = std::atan2(v.y, v.x);
            if (j > 0) {
                const double delta = detail::principal_delta(theta - prev_theta);
                max_jump = std::max(max_jump, std::fabs(delta));
                total += delta;
            }
            prev_theta = theta;
        }
        const double raw = total / kTwoPi;

        if (have_prev && std::fabs(raw - prev_raw) < opts.convergence_tol &&
            max_jump < opts.max_angle_jump)
            return detail::classify_index(raw, n, min_norm, opts);
        prev_raw = raw;
        have_prev = true;

        if (2 * n > opts.panel_cap && max_jump >= opts.max_angle_jump)
            throw NumericError(
                "index_unwrap: angle jump of " + std::to_string(max_jump) +
                " rad between consecutive samples at the finest grid; the "
                "field varies too fast relative to the sampling");
    }
    throw NumericError("index_unwrap: no convergence at the panel cap");
}

} // namespace torwind
