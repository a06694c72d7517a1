#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "torwind/errors.hpp"
#include "torwind/field.hpp"
#include "torwind/geometry.hpp"

namespace torwind {

inline constexpr double kEpsCurl = 1e-5; // integrability acceptance threshold

struct Rect {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diameter() const { return std::hypot(width(), height()); }
    bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

/// First integral on the torus lift for the constant field (a, b):
/// H(u, v) = b u - a v, so a H_u + b H_v = 0 identically.
inline ScalarField2 torus_first_integral(double a, double b) {
    if (a == 0.0 && b == 0.0)
        throw ValidationError("torus_first_integral: (a, b) must be nonzero");
    return ScalarField2([a, b](double u, double v) { return b * u - a * v; });
}

/// Prescribed gradient for the pullback integral of the constant field
/// (a, b) through psi = (f, g):
///   gx = b f_x - a f_y,   gy = b g_x - a g_y.
struct GradientSpec {
    ScalarField2 gx, gy;
    double a = 0.0, b = 0.0;
};

inline GradientSpec make_gradient_spec(const Diffeo2& psi, double a, double b) {
    if (a == 0.0 && b == 0.0)
        throw ValidationError("make_gradient_spec: (a, b) must be nonzero");
    GradientSpec spec;
    spec.a = a;
    spec.b = b;
    spec.gx = ScalarField2([psi, a, b](double x, double y) {
        return b * psi.f().dx(x, y) - a * psi.f().dy(x, y);
    });
    spec.gy = ScalarField2([psi, a, b](double x, double y) {
        return b * psi.g().dx(x, y) - a * psi.g().dy(x, y);
    });
    return spec;
}

/// Compatibility residual max |d(gx)/dy - d(gy)/dx| over a grid on
/// `domain`. gx and gy already come from inner differences, so the outer
/// derivative uses the wider relative step `curl_step` to keep roundoff
/// well below kEpsCurl.
inline double check_integrability(const GradientSpec& spec, const Rect& domain,
                                  int resolution, double curl_step = 2e-4) {
    if (resolution < 1)
        throw ValidationError("check_integrability: resolution must be >= 1");
    double worst = 0.0;
    for (int j = 0; j <= resolution; ++j) {
        const double y = domain.y0 + domain.height() * j / resolution;
        for (int i = 0; i <= resolution; ++i) {
            const double x = domain.x0 + domain.width() * i / resolution;
            const double hx = curl_step * std::max(1.0, std::fabs(x));
            const double hy = curl_step * std::max(1.0, std::fabs(y));
            const double dgx_dy =
                (spec.gx(x, y + hy) - spec.gx(x, y - hy)) / (2.0 * hy);
            const double dgy_dx =
                (spec.gy(x + hx, y) - spec.gy(x - hx, y)) / (2.0 * hx);
            worst = std::max(worst, std::fabs(dgx_dy - dgy_dx));
        }
    }
    return worst;
}

/// First integral sampled on a rectangular grid. `values` is row-major in
/// x (index i) with stride nx, rows indexed by j in y. Off-grid queries
/// interpolate bilinearly.
struct FirstIntegralGrid {
    Rect domain;
    int nx = 0, ny = 0; // node counts per axis
    std::vector<double> values;
    int anchor_i = 0, anchor_j = 0;
    double path_disagreement = 0.0; // max |row-first - column-first|
    double integrability_residual = 0.0;

    double step_x() const { return domain.width() / (nx - 1); }
    double step_y() const { return domain.height() / (ny - 1); }
    double node_x(int i) const { return domain.x0 + step_x() * i; }
    double node_y(int j) const { return domain.y0 + step_y() * j; }
    double at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * nx + i];
    }
    double& at(int i, int j) {
        return values[static_cast<std::size_t>(j) * nx + i];
    }

    double interpolate(double x, double y) const {
        if (!domain.contains({x, y}))
            throw ValidationError("FirstIntegralGrid: query outside the domain");
        const double fx = std::min((x - domain.x0) / step_x(),
                                   static_cast<double>(nx - 1));
        const double fy = std::min((y - domain.y0) / step_y(),
                                   static_cast<double>(ny - 1));
        const int i = std::min(static_cast<int>(fx), nx - 2);
        const int j = std::min(static_cast<int>(fy), ny - 2);
        const double sx = fx - i, sy = fy - j;
        return (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) +
               (1 - sx) * sy * at(i, j + 1) + sx * sy * at(i + 1, j + 1);
    }

    // Central differences at interior nodes.
    double grad_x(int i, int j) const {
        return (at(i + 1, j) - at(i - 1, j)) / (2.0 * step_x());
    }
    double grad_y(int i, int j) const {
        return (at(i, j + 1) - at(i, j - 1)) / (2.0 * step_y());
    }
};

struct BuildOptions {
    double eps_curl = kEpsCurl;
    int curl_resolution = 32; // grid for the compatibility pre-check
    double curl_step = 2e-4;
};

namespace detail {

// Simpson value of integrand over one cell [s0, s1].
template <class F>
double simpson_cell(F&& integrand, double s0, double s1) {
    return (s1 - s0) / 6.0 *
           (integrand(s0) + 4.0 * integrand(0.5 * (s0 + s1)) + integrand(s1));
}

} // namespace detail

/// Reconstructs h with the prescribed gradient by composite-Simpson line
/// integration from the anchor along axis-aligned paths. Both path orders
/// (row-then-column and column-then-row) are computed and averaged; their
/// maximum disagreement is recorded as the path diagnostic. h(anchor) = 0.
///
/// Refuses to integrate when the compatibility residual reaches eps_curl:
/// without it the result would be path-dependent.
inline FirstIntegralGrid build_first_integral(const GradientSpec& spec,
                                              const Rect& domain, int resolution,
                                              Vec2 anchor,
                                              const BuildOptions& opts = {}) {
    if (resolution < 2)
        throw ValidationError("build_first_integral: resolution must be >= 2");
    if (!domain.contains(anchor))
        throw ValidationError("build_first_integral: anchor outside the domain");

    const double residual =
        check_integrability(spec, domain, opts.curl_resolution, opts.curl_step);
    if (!(residual < opts.eps_curl))
        throw NumericError(
            "build_first_integral: gradient system is not integrable "
            "(mixed-partials residual " +
            std::to_string(residual) + ")");

    FirstIntegralGrid grid;
    grid.domain = domain;
    grid.nx = resolution + 1;
    grid.ny = resolution + 1;
    grid.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
    grid.integrability_residual = residual;
    grid.anchor_i =
        static_cast<int>(std::lround((anchor.x - domain.x0) / grid.step_x()));
    grid.anchor_j =
        static_cast<int>(std::lround((anchor.y - domain.y0) / grid.step_y()));

    const int nx = grid.nx, ny = grid.ny;
    const int ai = grid.anchor_i, aj = grid.anchor_j;

    // Cumulative Simpson along one axis from the anchor index outward.
    auto integrate_line = [](int n, int anchor_idx, auto node, auto cell_value) {
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        for (int k = anchor_idx + 1; k < n; ++k)
            acc[k] = acc[k - 1] + cell_value(node(k - 1), node(k));
        for (int k = anchor_idx - 1; k >= 0; --k)
            acc[k] = acc[k + 1] - cell_value(node(k), node(k + 1));
        return acc;
    };

    auto x_node = [&](int i) { return grid.node_x(i); };
    auto y_node = [&](int j) { return grid.node_y(j); };

    // Row-then-column order.
    std::vector<double> ha(grid.values.size(), 0.0);
    {
        const double ya = y_node(aj);
        auto row = integrate_line(nx, ai, x_node, [&](double s0, double s1) {
            return detail::simpson_cell(
                [&](double s) { return spec.gx(s, ya); }, s0, s1);
        });
        for (int i = 0; i < nx; ++i) {
            const double xi = x_node(i);
            auto col = integrate_line(ny, aj, y_node, [&](double s0, double s1) {
                return detail::simpson_cell(
                    [&](double s) { return spec.gy(xi, s); }, s0, s1);
            });
            for (int j = 0; j < ny; ++j)
                ha[static_cast<std::size_t>(j) * nx + i] = row[i] + col[j];
        }
    }

    // Column-then-row order.
    std::vector<double> hb(grid.values.size(), 0.0);
    {
        const double xa = x_node(ai);
        auto col = integrate_line(ny, aj, y_node, [&](double s0, double s1) {
            return detail::simpson_cell(
                [&](double s) { return spec.gy(xa, s); }, s0, s1);
        });
        for (int j = 0; j < ny; ++j) {
            const double yj = y_node(j);
            auto row = integrate_line(nx, ai, x_node, [&](double s0, double s1) {
                return detail::simpson_cell(
                    [&](double s) { return spec.gx(s, yj); }, s0, s1);
            });
            for (int i = 0; i < nx; ++i)
                hb[static_cast<std::size_t>(j) * nx + i] = col[j] + row[i];
        }
    }

    double disagreement = 0.0;
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        grid.values[k] = 0.5 * (ha[k] + hb[k]);
        disagreement = std::max(disagreement, std::fabs(ha[k] - hb[k]));
    }
    grid.path_disagreement = disagreement;
    if (disagreement > 10.0 * opts.eps_curl * domain.diameter())
        throw NumericError(
            "build_first_integral: path orders disagree by " +
            std::to_string(disagreement) + "; gradient data inconsistent");
    grid.at(ai, aj) = 0.0;
    return grid;
}

/// Quantitative first-integral defect: max over interior grid nodes of
/// |P h_x + Q h_y| with h derivatives by central differences on the grid.
inline double residual_X_of_h(const PlaneVectorField& X,
                              const FirstIntegralGrid& h) {
    double worst = 0.0;
    for (int j = 1; j + 1 < h.ny; ++j)
        for (int i = 1; i + 1 < h.nx; ++i) {
            const Vec2 v = X.at(h.node_x(i), h.node_y(j));
            worst = std::max(worst,
                             std::fabs(v.x * h.grad_x(i, j) + v.y * h.grad_y(i, j)));
        }
    return worst;
}

/// Grid as CSV with header "x,y,h", rows in y-major order, values with
/// 17 significant digits.
inline void write_grid_csv(const FirstIntegralGrid& grid, std::ostream& os) {
    os << "x,y,h\n";
    char buf[128];
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.node_x(i),
                          grid.node_y(j), grid.at(i, j));
            os << buf;
        }
}

struct FlowDrift {
    double drift = 0.0;       // |h(end) - h(start)|
    double time = 0.0;        // time actually integrated (stops at the boundary)
    double gradient_scale = 0.0;
};

/// Integrates the flow of X from `start` with fixed-step RK4 and reports
/// how much h changes along the trajectory. Stops early when the next step
/// would leave the grid domain.
inline FlowDrift flow_level_set_drift(const PlaneVectorField& X,
                                      const FirstIntegralGrid& h, Vec2 start,
                                      double total_time, double dt = 1e-3) {
    if (!h.domain.contains(start))
        throw ValidationError("flow_level_set_drift: start outside the domain");
    const double h_start = h.interpolate(start.x, start.y);

    const int ci = std::clamp(static_cast<int>(std::lround(
                                  (start.x - h.domain.x0) / h.step_x())),
                              1, h.nx - 2);
    const int cj = std::clamp(static_cast<int>(std::lround(
                                  (start.y - h.domain.y0) / h.step_y())),
                              1, h.ny - 2);
    const double grad_scale =
        std::hypot(h.grad_x(ci, cj), h.grad_y(ci, cj));

    Vec2 pos = start;
    double t = 0.0;
    auto inside = [&](Vec2 p) { return h.domain.contains(p); };
    while (t + dt <= total_time) {
        const Vec2 k1 = X.at(pos);
        const Vec2 p2 = pos + 0.5 * dt * k1;
        if (!inside(p2)) break;
        const Vec2 k2 = X.at(p2);
        const Vec2 p3 = pos + 0.5 * dt * k2;
        if (!inside(p3)) break;
        const Vec2 k3 = X.at(p3);
        const Vec2 p4 = pos + dt * k3;
        if (!inside(p4)) break;
        const Vec2 k4 = X.at(p4);
        const Vec2 next = pos + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!inside(next)) break;
        pos = next;
        t += dt;
    }
    return {std::fabs(h.interpolate(pos.x, pos.y) - h_start), t, grad_scale};
}

} // namespace torwind
