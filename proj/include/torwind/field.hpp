#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torwind/errors.hpp"
#include "torwind/geometry.hpp"

namespace torwind {

inline constexpr double kEpsZero = 1e-10; // field-norm floor on queried sets
inline constexpr double kEpsJac = 1e-12;  // Jacobian-determinant floor
inline constexpr double kEpsInv = 1e-8;   // forward(inverse) identity tolerance

/// Real-valued function of (x, y) with central-difference partials.
/// `fd_step` is a relative scale: the absolute step used at a coordinate c
/// is fd_step * max(1, |c|).
class ScalarField2 {
public:
    using Fn = std::function<double(double, double)>;

    ScalarField2() = default;
    explicit ScalarField2(Fn fn, double fd_step = 1e-6)
        : fn_(std::move(fn)), fd_step_(fd_step) {
        if (!(fd_step_ > 0.0))
            throw ValidationError("ScalarField2: fd_step must be positive");
    }

    double operator()(double x, double y) const { return fn_(x, y); }
    double operator()(Vec2 p) const { return fn_(p.x, p.y); }

    double dx(double x, double y) const {
        const double h = fd_step_ * std::max(1.0, std::fabs(x));
        return (fn_(x + h, y) - fn_(x - h, y)) / (2.0 * h);
    }

    double dy(double x, double y) const {
        const double h = fd_step_ * std::max(1.0, std::fabs(y));
        return (fn_(x, y + h) - fn_(x, y - h)) / (2.0 * h);
    }

    double fd_step() const { return fd_step_; }
    ScalarField2 with_fd_step(double step) const {
        return ScalarField2(fn_, step);
    }

private:
    Fn fn_;
    double fd_step_ = 1e-6;
};

/// Plane vector field X = P d/dx + Q d/dy.
struct PlaneVectorField {
    ScalarField2 P, Q;

    Vec2 at(double x, double y) const { return {P(x, y), Q(x, y)}; }
    Vec2 at(Vec2 p) const { return at(p.x, p.y); }
};

inline PlaneVectorField constant_field(double a, double b) {
    return {ScalarField2([a](double, double) { return a; }),
            ScalarField2([b](double, double) { return b; })};
}

/// 2x2 matrix, row-major.
struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    Vec2 apply(Vec2 v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
};

/// Diffeomorphism of the plane (or between torus lift coordinates and the
/// plane), given by forward components (f, g) and an optional closed-form
/// inverse. The differential is computed by central differences; without a
/// supplied inverse, `inverse()` runs damped Newton from a seed.
class Diffeo2 {
public:
    Diffeo2(ScalarField2 f, ScalarField2 g, Space source = Space::plane,
            Space target = Space::plane)
        : f_(std::move(f)), g_(std::move(g)), source_(source), target_(target) {}

    Diffeo2& with_inverse(ScalarField2 inv_f, ScalarField2 inv_g) {
        inverse_ = std::make_pair(std::move(inv_f), std::move(inv_g));
        return *this;
    }

    Vec2 apply(Vec2 z) const { return {f_(z.x, z.y), g_(z.x, z.y)}; }

    /// Central-difference matrix [[f_x, f_y], [g_x, g_y]].
    Mat2 jacobian(Vec2 z) const {
        return {f_.dx(z.x, z.y), f_.dy(z.x, z.y),
                g_.dx(z.x, z.y), g_.dy(z.x, z.y)};
    }

    bool has_closed_inverse() const { return inverse_.has_value(); }

    /// Preimage of w: the supplied closed form when present, otherwise
    /// damped Newton from `seed` (default: w itself), tolerance 1e-12,
    /// at most 50 iterations.
    Vec2 inverse(Vec2 w, std::optional<Vec2> seed = std::nullopt) const {
        if (inverse_)
            return {inverse_->first(w.x, w.y), inverse_->second(w.x, w.y)};
        return newton_inverse(w, seed.value_or(w));
    }

    const ScalarField2& f() const { return f_; }
    const ScalarField2& g() const { return g_; }
    Space source() const { return source_; }
    Space target() const { return target_; }

private:
    Vec2 newton_inverse(Vec2 w, Vec2 z) const {
        const double tol = 1e-12 * (1.0 + w.norm());
        double res = (apply(z) - w).norm();
        for (int iter = 0; iter < 50; ++iter) {
            if (res < tol)
                return z;
            const Mat2 J = jacobian(z);
            const double det = J.det();
            if (std::fabs(det) <= kEpsJac)
                throw NumericError("inverse: singular Jacobian during Newton");
            const Vec2 F = apply(z) - w;
            const Vec2 step = {(-J.a22 * F.x + J.a12 * F.y) / det,
                               (J.a21 * F.x - J.a11 * F.y) / det};
            double lambda = 1.0;
            for (;;) {
                const Vec2 trial = z + lambda * step;
                const double trial_res = (apply(trial) - w).norm();
                if (trial_res < res || lambda < 1.0 / 1024.0) {
                    z = trial;
                    res = trial_res;
                    break;
                }
                lambda *= 0.5;
            }
        }
        if (res < tol)
            return z;
        throw NumericError("inverse: Newton iteration did not converge");
    }

    ScalarField2 f_, g_;
    Space source_, target_;
    std::optional<std::pair<ScalarField2, ScalarField2>> inverse_;
};

inline Mat2 jacobian(const Diffeo2& d, Vec2 point) { return d.jacobian(point); }

inline Diffeo2 identity_diffeo() {
    Diffeo2 d(ScalarField2([](double x, double) { return x; }),
              ScalarField2([](double, double y) { return y; }));
    d.with_inverse(ScalarField2([](double x, double) { return x; }),
                   ScalarField2([](double, double y) { return y; }));
    return d;
}

/// Invertible linear map with its exact inverse.
inline Diffeo2 linear_diffeo(double a11, double a12, double a21, double a22) {
    const double det = a11 * a22 - a12 * a21;
    if (std::fabs(det) <= kEpsJac)
        throw ValidationError("linear_diffeo: matrix is singular");
    Diffeo2 d(ScalarField2([=](double x, double y) { return a11 * x + a12 * y; }),
              ScalarField2([=](double x, double y) { return a21 * x + a22 * y; }));
    d.with_inverse(
        ScalarField2([=](double x, double y) { return (a22 * x - a12 * y) / det; }),
        ScalarField2([=](double x, double y) { return (-a21 * x + a11 * y) / det; }));
    return d;
}

/// outer after inner; the inverse is supplied when both factors carry one.
inline Diffeo2 compose(const Diffeo2& outer, const Diffeo2& inner) {
    Diffeo2 d(ScalarField2([outer, inner](double x, double y) {
                  return outer.apply(inner.apply({x, y})).x;
              }),
              ScalarField2([outer, inner](double x, double y) {
                  return outer.apply(inner.apply({x, y})).y;
              }),
              inner.source(), outer.target());
    if (outer.has_closed_inverse() && inner.has_closed_inverse()) {
        d.with_inverse(ScalarField2([outer, inner](double x, double y) {
                           return inner.inverse(outer.inverse({x, y})).x;
                       }),
                       ScalarField2([outer, inner](double x, double y) {
                           return inner.inverse(outer.inverse({x, y})).y;
                       }));
    }
    return d;
}

/// Field induced on the target of d: Y(w) = J_d(d^-1(w)) * X(d^-1(w)),
/// evaluated lazily at query points.
inline PlaneVectorField pushforward(const PlaneVectorField& X, const Diffeo2& d) {
    auto value = [X, d](double wx, double wy) -> Vec2 {
        const Vec2 z = d.inverse({wx, wy});
        return d.jacobian(z).apply(X.at(z));
    };
    return {ScalarField2([value](double x, double y) { return value(x, y).x; }),
            ScalarField2([value](double x, double y) { return value(x, y).y; })};
}

/// Max over samples of ||J_d(s) * X(s) - Z(d(s))||; a small value certifies
/// that d conjugates X to Z on the sample set.
inline double conjugacy_residual(const PlaneVectorField& X,
                                 const PlaneVectorField& Z, const Diffeo2& d,
                                 const std::vector<Vec2>& samples) {
    double worst = 0.0;
    for (const Vec2& s : samples) {
        const Vec2 lhs = d.jacobian(s).apply(X.at(s));
        const Vec2 rhs = Z.at(d.apply(s));
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

/// The field conjugate to the constant field (a, b) through psi = (f, g):
///   P = (a g_y - b f_y) / J,  Q = (b f_x - a g_x) / J,
/// with J = f_x g_y - f_y g_x and derivatives by central differences.
inline PlaneVectorField example_field(const Diffeo2& psi, double a, double b) {
    if (a == 0.0 && b == 0.0)
        throw ValidationError("example_field: (a, b) must be nonzero");
    auto value = [psi, a, b](double x, double y) -> Vec2 {
        const Mat2 J = psi.jacobian({x, y});
        const double det = J.det();
        if (std::fabs(det) <= kEpsJac)
            throw NumericError("example_field: Jacobian vanishes at (" +
                               std::to_string(x) + ", " + std::to_string(y) + ")");
        return {(a * J.a22 - b * J.a12) / det, (b * J.a11 - a * J.a21) / det};
    };
    return {ScalarField2([value](double x, double y) { return value(x, y).x; }),
            ScalarField2([value](double x, double y) { return value(x, y).y; })};
}

} // namespace torwind
