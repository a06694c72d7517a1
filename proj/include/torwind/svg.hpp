#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "torwind/errors.hpp"
#include "torwind/first_integral.hpp"
#include "torwind/geometry.hpp"

namespace torwind {

namespace detail {

// Data-to-viewport mapping: 800x800 viewport, 5% margin, square aspect.
struct SvgFrame {
    double x0, x1, y0, y1;
    static constexpr double size = 800.0;
    static constexpr double margin = 40.0;

    static SvgFrame fit(double xmin, double xmax, double ymin, double ymax) {
        double w = xmax - xmin, h = ymax - ymin;
        if (w <= 0) { xmin -= 0.5; xmax += 0.5; w = 1.0; }
        if (h <= 0) { ymin -= 0.5; ymax += 0.5; h = 1.0; }
        // Equal scales: widen the shorter extent around its midpoint.
        if (w > h) {
            const double mid = 0.5 * (ymin + ymax);
            ymin = mid - 0.5 * w;
            ymax = mid + 0.5 * w;
        } else if (h > w) {
            const double mid = 0.5 * (xmin + xmax);
            xmin = mid - 0.5 * h;
            xmax = mid + 0.5 * h;
        }
        const double padx = 0.05 * (xmax - xmin);
        const double pady = 0.05 * (ymax - ymin);
        return {xmin - padx, xmax + padx, ymin - pady, ymax + pady};
    }

    double px(double x) const {
        return margin + (x - x0) / (x1 - x0) * (size - 2 * margin);
    }
    double py(double y) const {
        return size - margin - (y - y0) / (y1 - y0) * (size - 2 * margin);
    }
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string fmt_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void svg_header(std::string& out) {
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
           "height=\"800\" viewBox=\"0 0 800 800\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" "
           "fill=\"white\"/>\n";
}

inline void svg_axes(std::string& out, const SvgFrame& f) {
    out += "<rect x=\"40\" y=\"40\" width=\"720\" height=\"720\" fill=\"none\" "
           "stroke=\"#888888\" stroke-width=\"1\"/>\n";
    if (f.x0 < 0.0 && f.x1 > 0.0) {
        const std::string x = fmt(f.px(0.0));
        out += "<line x1=\"" + x + "\" y1=\"40\" x2=\"" + x +
               "\" y2=\"760\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    if (f.y0 < 0.0 && f.y1 > 0.0) {
        const std::string y = fmt(f.py(0.0));
        out += "<line x1=\"40\" y1=\"" + y + "\" x2=\"760\" y2=\"" + y +
               "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    out += "<text x=\"40\" y=\"780\" font-size=\"14\" fill=\"#444444\">x: [" +
           fmt_label(f.x0) + ", " + fmt_label(f.x1) + "]</text>\n";
    out += "<text x=\"400\" y=\"780\" font-size=\"14\" fill=\"#444444\">y: [" +
           fmt_label(f.y0) + ", " + fmt_label(f.y1) + "]</text>\n";
}

inline void write_svg_file(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    os << body;
    if (!os)
        throw IoError("failed while writing '" + path + "'");
}

} // namespace detail

/// Closed-curve plot: a polyline through the samples.
inline void emit_svg_curve(const std::string& path,
                           const std::vector<Vec2>& samples) {
    if (samples.empty())
        throw ValidationError("emit_svg_curve: no samples");
    double xmin = samples[0].x, xmax = samples[0].x;
    double ymin = samples[0].y, ymax = samples[0].y;
    for (const Vec2& p : samples) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    const auto f = detail::SvgFrame::fit(xmin, xmax, ymin, ymax);
    std::string out;
    detail::svg_header(out);
    detail::svg_axes(out, f);
    out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k) out += ' ';
        out += detail::fmt(f.px(samples[k].x)) + "," + detail::fmt(f.py(samples[k].y));
    }
    out += "\"/>\n</svg>\n";
    detail::write_svg_file(path, out);
}

/// Vector-field quiver: one arrow per (position, vector) pair, lengths
/// scaled so the largest arrow spans `arrow_span` data units.
inline void emit_svg_quiver(const std::string& path,
                            const std::vector<std::pair<Vec2, Vec2>>& arrows,
                            double arrow_span) {
    if (arrows.empty())
        throw ValidationError("emit_svg_quiver: no arrows");
    double xmin = arrows[0].first.x, xmax = arrows[0].first.x;
    double ymin = arrows[0].first.y, ymax = arrows[0].first.y;
    double vmax = 0.0;
    for (const auto& [p, v] : arrows) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
        vmax = std::max(vmax, v.norm());
    }
    if (vmax == 0.0)
        throw ValidationError("emit_svg_quiver: all vectors vanish");
    const auto f = detail::SvgFrame::fit(xmin, xmax, ymin, ymax);
    std::string out;
    detail::svg_header(out);
    detail::svg_axes(out, f);
    for (const auto& [p, v] : arrows) {
        const Vec2 tip = p + (arrow_span / vmax) * v;
        const double ax = f.px(p.x), ay = f.py(p.y);
        const double bx = f.px(tip.x), by = f.py(tip.y);
        out += "<line x1=\"" + detail::fmt(ax) + "\" y1=\"" + detail::fmt(ay) +
               "\" x2=\"" + detail::fmt(bx) + "\" y2=\"" + detail::fmt(by) +
               "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
        // Arrowhead: two short barbs at the tip.
        const double dx = bx - ax, dy = by - ay;
        const double len = std::hypot(dx, dy);
        if (len > 1e-9) {
            const double ux = dx / len, uy = dy / len;
            const double s = std::min(6.0, 0.35 * len);
            const Vec2 left{bx - s * ux + 0.5 * s * uy, by - s * uy - 0.5 * s * ux};
            const Vec2 right{bx - s * ux - 0.5 * s * uy, by - s * uy + 0.5 * s * ux};
            out += "<line x1=\"" + detail::fmt(bx) + "\" y1=\"" + detail::fmt(by) +
                   "\" x2=\"" + detail::fmt(left.x) + "\" y2=\"" + detail::fmt(left.y) +
                   "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
            out += "<line x1=\"" + detail::fmt(bx) + "\" y1=\"" + detail::fmt(by) +
                   "\" x2=\"" + detail::fmt(right.x) + "\" y2=\"" + detail::fmt(right.y) +
                   "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
        }
    }
    out += "</svg>\n";
    detail::write_svg_file(path, out);
}

/// Contour plot of a first-integral grid by marching squares at `levels`
/// evenly spaced values strictly between the grid min and max.
inline void emit_svg_contours(const std::string& path,
                              const FirstIntegralGrid& grid, int levels = 9) {
    if (grid.nx < 2 || grid.ny < 2)
        throw ValidationError("emit_svg_contours: grid too small");
    if (levels < 1)
        throw ValidationError("emit_svg_contours: levels must be >= 1");
    double vmin = grid.values[0], vmax = grid.values[0];
    for (double v : grid.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const auto f = detail::SvgFrame::fit(grid.domain.x0, grid.domain.x1,
                                         grid.domain.y0, grid.domain.y1);
    std::string out;
    detail::svg_header(out);
    detail::svg_axes(out, f);

    auto edge_point = [](double level, double va, double vb, Vec2 a, Vec2 b) {
        const double s = (level - va) / (vb - va);
        return Vec2{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
    };

    for (int L = 1; L <= levels; ++L) {
        const double level = vmin + (vmax - vmin) * L / (levels + 1);
        std::string seg;
        for (int j = 0; j + 1 < grid.ny; ++j) {
            for (int i = 0; i + 1 < grid.nx; ++i) {
                const Vec2 c00{grid.node_x(i), grid.node_y(j)};
                const Vec2 c10{grid.node_x(i + 1), grid.node_y(j)};
                const Vec2 c01{grid.node_x(i), grid.node_y(j + 1)};
                const Vec2 c11{grid.node_x(i + 1), grid.node_y(j + 1)};
                const double v00 = grid.at(i, j), v10 = grid.at(i + 1, j);
                const double v01 = grid.at(i, j + 1), v11 = grid.at(i + 1, j + 1);
                std::vector<Vec2> hits;
                if ((v00 < level) != (v10 < level))
                    hits.push_back(edge_point(level, v00, v10, c00, c10));
                if ((v10 < level) != (v11 < level))
                    hits.push_back(edge_point(level, v10, v11, c10, c11));
                if ((v01 < level) != (v11 < level))
                    hits.push_back(edge_point(level, v01, v11, c01, c11));
                if ((v00 < level) != (v01 < level))
                    hits.push_back(edge_point(level, v00, v01, c00, c01));
                // Saddle cells yield 4 crossings; pair them in a fixed order.
                for (std::size_t k = 0; k + 1 < hits.size(); k += 2) {
                    seg += "<line x1=\"" + detail::fmt(f.px(hits[k].x)) +
                           "\" y1=\"" + detail::fmt(f.py(hits[k].y)) +
                           "\" x2=\"" + detail::fmt(f.px(hits[k + 1].x)) +
                           "\" y2=\"" + detail::fmt(f.py(hits[k + 1].y)) +
                           "\" stroke=\"#2a7a2a\" stroke-width=\"1.2\"/>\n";
                }
            }
        }
        out += seg;
    }
    out += "</svg>\n";
    detail::write_svg_file(path, out);
}

} // namespace torwind
