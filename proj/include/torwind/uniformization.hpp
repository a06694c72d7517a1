#pragma once

#include <cmath>
#include <string>

#include "torwind/errors.hpp"
#include "torwind/field.hpp"
#include "torwind/geometry.hpp"
#include "torwind/index.hpp"

namespace torwind {

/// Scaled clockwise rotation (1/(p^2+q^2)) * [[p, q], [-q, p]]. Sends the
/// lift endpoint (2*pi*p, 2*pi*q) of the curve t -> (p t, q t) to (2*pi, 0).
inline Vec2 rho(int p, int q, Vec2 z) {
    if (p == 0 && q == 0)
        throw ValidationError("rho: (p, q) must be nonzero");
    const double H = static_cast<double>(p) * p + static_cast<double>(q) * q;
    return {(p * z.x + q * z.y) / H, (-q * z.x + p * z.y) / H};
}

/// Translation (x, y) -> (x, y + 2*pi).
inline Vec2 tau(Vec2 z) { return {z.x, z.y + kTwoPi}; }

/// Polar-style map (x, y) -> (y cos x, y sin x). Invertible only where
/// y > 0; callers that need the inverse must stay on that strip.
inline Vec2 sigma(Vec2 z) { return {z.y * std::cos(z.x), z.y * std::sin(z.x)}; }

/// The annulus map in closed form,
///   phi(x, y) = (1/H) * ((p y - q x + 2 pi) cos(p x + q y),
///                        (p y - q x + 2 pi) sin(p x + q y)),
/// H = p^2 + q^2. Operates on lift coordinates; the radius factor
/// p y - q x + 2 pi must stay positive (the fundamental strip).
inline Vec2 phi(int p, int q, Vec2 z) {
    if (p == 0 && q == 0)
        throw ValidationError("phi: (p, q) must be nonzero");
    const double H = static_cast<double>(p) * p + static_cast<double>(q) * q;
    const double radius_factor = p * z.y - q * z.x + kTwoPi;
    if (!(radius_factor > 0.0))
        throw EvalDomainError(
            "phi: point outside the fundamental strip (p*y - q*x + 2*pi = " +
            std::to_string(radius_factor) + ")");
    const double angle = p * z.x + q * z.y;
    return {radius_factor * std::cos(angle) / H,
            radius_factor * std::sin(angle) / H};
}

/// Closed-form preimage under phi (principal branch of the angle).
inline Vec2 phi_inverse(int p, int q, Vec2 w) {
    if (p == 0 && q == 0)
        throw ValidationError("phi_inverse: (p, q) must be nonzero");
    const double H = static_cast<double>(p) * p + static_cast<double>(q) * q;
    const double r = w.norm();
    if (!(r > 0.0))
        throw EvalDomainError("phi_inverse: the origin has no preimage");
    const double angle = std::atan2(w.y, w.x);
    const double offset = H * r - kTwoPi; // p y - q x on the preimage
    return {(p * angle - q * offset) / H, (q * angle + p * offset) / H};
}

/// phi with its closed-form inverse, packaged as a diffeomorphism between
/// torus lift coordinates and the plane.
inline Diffeo2 phi_diffeo(int p, int q) {
    if (p == 0 && q == 0)
        throw ValidationError("phi_diffeo: (p, q) must be nonzero");
    Diffeo2 d(ScalarField2([p, q](double x, double y) { return phi(p, q, {x, y}).x; }),
              ScalarField2([p, q](double x, double y) { return phi(p, q, {x, y}).y; }),
              Space::torus, Space::plane);
    d.with_inverse(
        ScalarField2([p, q](double x, double y) { return phi_inverse(p, q, {x, y}).x; }),
        ScalarField2([p, q](double x, double y) { return phi_inverse(p, q, {x, y}).y; }));
    return d;
}

/// The explicit construction for a type-(p, q) torus curve: the curves
/// gamma(t) = (p t, q t) and gamma0(t) = (p t + 1/2, q t + 1/2), the map
/// phi, and the image of gamma under phi parametrized once around.
///
/// phi maps the t-parametrized gamma onto the circle of radius 2*pi/H
/// covered H times; the pushforward of a constant field is nevertheless
/// single-valued on that circle (the differential of phi in x is the same
/// at every preimage), so the image is exposed as a Jordan curve via the
/// injective parametrization theta -> phi(gamma_lift(theta / H)).
struct TorusUniformization {
    int p = 0, q = 0;
    double H = 0.0;
    ParamCurve gamma;      // torus target
    ParamCurve gamma0;     // torus target
    Diffeo2 phi_map;
    ParamCurve gamma_image; // plane target, once around

    /// Sampled minimum torus distance between gamma and gamma0. For p = q
    /// the two curves coincide as sets and this is ~0; the construction
    /// still runs but the disjointness hypothesis fails.
    double gamma_gamma0_distance() const {
        return curve_distance(gamma, gamma0);
    }
    bool curves_disjoint(double threshold = 0.02) const {
        return gamma_gamma0_distance() > threshold;
    }
};

inline TorusUniformization make_uniformization(int p, int q,
                                               int sample_count = kDefaultCurveSamples) {
    if (p == 0 && q == 0)
        throw ValidationError("make_uniformization: (p, q) must be nonzero");
    const double H = static_cast<double>(p) * p + static_cast<double>(q) * q;
    auto gamma = ParamCurve::closed([p](double t) { return p * t; },
                                    [q](double t) { return q * t; },
                                    Space::torus, sample_count);
    auto gamma0 = ParamCurve::closed([p](double t) { return p * t + 0.5; },
                                     [q](double t) { return q * t + 0.5; },
                                     Space::torus, sample_count);
    auto image = ParamCurve::closed(
        [p, q, H](double th) { return phi(p, q, {p * th / H, q * th / H}).x; },
        [p, q, H](double th) { return phi(p, q, {p * th / H, q * th / H}).y; },
        Space::plane, sample_count);
    return {p, q, H, std::move(gamma), std::move(gamma0), phi_diffeo(p, q),
            std::move(image)};
}

struct TheoremReport {
    int p = 0, q = 0;
    double H = 0.0;
    IndexResult quadrature;
    IndexResult unwrap;
    double oracle_delta = 0.0;
    bool holds = false; // both routes snapped to 1
};

/// End-to-end check that the constant field d/dx pushed through phi has
/// winding number 1 along the image of gamma. The pushforward field is
/// evaluated through the closed-form inverse and the central-difference
/// Jacobian of phi, i.e. along the curve it equals the derivative of phi
/// in x at the preimage. Both the quadrature and the unwrapping routes are
/// computed; they must agree to oracle_tol.
inline TheoremReport theorem_check(int p, int q, const IndexOptions& opts = {},
                                   double oracle_tol = 1e-6,
                                   int sample_count = 2048) {
    const TorusUniformization uni = make_uniformization(p, q, sample_count);
    const PlaneVectorField Y = pushforward(constant_field(1.0, 0.0), uni.phi_map);

    TheoremReport report;
    report.p = p;
    report.q = q;
    report.H = uni.H;
    report.quadrature = index_quadrature(Y, uni.gamma_image, opts);
    report.unwrap = index_unwrap(Y, uni.gamma_image, opts);
    report.oracle_delta = std::fabs(report.quadrature.raw - report.unwrap.raw);
    if (report.oracle_delta > oracle_tol)
        throw NumericError(
            "theorem_check: quadrature and unwrap disagree by " +
            std::to_string(report.oracle_delta));
    report.holds = report.quadrature.snapped == 1 && report.unwrap.snapped == 1;
    return report;
}

/// Radii of the images under phi of a grid spanning the strip between the
/// lifts of gamma and gamma0.
struct CoronaInterval {
    double r_min = 0.0;
    double r_max = 0.0;
};

inline CoronaInterval corona_image_check(int p, int q, int grid = 64) {
    if (p == 0 && q == 0)
        throw ValidationError("corona_image_check: (p, q) must be nonzero");
    if (grid < 2)
        throw ValidationError("corona_image_check: grid must be >= 2");
    const double H = static_cast<double>(p) * p + static_cast<double>(q) * q;
    // Along-direction coordinate alpha spans one period; the transverse
    // coordinate beta runs from gamma's lift (beta = 0) to gamma0's
    // (beta = (p - q) / (2 H)). Lift point: alpha*(p, q) + beta*(-q, p).
    const double beta_end = (p - q) / (2.0 * H);
    CoronaInterval interval{std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 0; i < grid; ++i) {
        const double alpha = kTwoPi * i / grid;
        for (int j = 0; j <= grid; ++j) {
            const double beta = beta_end * j / grid;
            const Vec2 z{alpha * p - beta * q, alpha * q + beta * p};
            const double r = phi(p, q, z).norm();
            if (!(r > 0.0))
                throw NumericError("corona_image_check: nonpositive radius");
            interval.r_min = std::min(interval.r_min, r);
            interval.r_max = std::max(interval.r_max, r);
        }
    }
    return interval;
}

} // namespace torwind
