#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torwind/errors.hpp"
#include "torwind/expr.hpp"
#include "torwind/field.hpp"
#include "torwind/geometry.hpp"
#include "torwind/uniformization.hpp"

namespace torwind {

inline ScalarField2 scalar_from_expr(const Expr& e) {
    return ScalarField2([e](double x, double y) { return e.eval(x, y, 0.0); });
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Splits "(lhs, rhs)" or "lhs, rhs" at the unique top-level comma.
inline std::pair<std::string_view, std::string_view>
split_pair(std::string_view text) {
    std::string_view s = trim(text);
    if (!s.empty() && s.front() == '(') {
        int depth = 0;
        std::size_t match = std::string_view::npos;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            else if (s[i] == ')' && --depth == 0) { match = i; break; }
        }
        if (match == s.size() - 1)
            s = trim(s.substr(1, s.size() - 2));
    }
    int depth = 0;
    std::size_t comma = std::string_view::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == ',' && depth == 0) {
            if (comma != std::string_view::npos)
                throw ValidationError("expected exactly one top-level comma in \"" +
                                      std::string(text) + "\"");
            comma = i;
        }
    }
    if (comma == std::string_view::npos)
        throw ValidationError("expected a pair \"(expr, expr)\", got \"" +
                              std::string(text) + "\"");
    return {trim(s.substr(0, comma)), trim(s.substr(comma + 1))};
}

inline void require_variables(const Expr& e, std::string_view allowed,
                              std::string_view what) {
    for (char v : {'x', 'y', 't'})
        if (e.uses_variable(v) && allowed.find(v) == std::string_view::npos)
            throw ValidationError(std::string(what) + " must not use variable '" +
                                  std::string(1, v) + "' (allowed: " +
                                  std::string(allowed) + ")");
}

inline std::vector<double> parse_number_args(std::string_view args,
                                             std::string_view what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= args.size()) {
        std::size_t comma = args.find(',', start);
        std::string_view piece =
            trim(args.substr(start, comma == std::string_view::npos
                                        ? std::string_view::npos
                                        : comma - start));
        if (piece.empty())
            throw ValidationError(std::string(what) + ": empty argument");
        try {
            std::size_t used = 0;
            const double v = std::stod(std::string(piece), &used);
            if (used != piece.size())
                throw std::invalid_argument("trailing characters");
            out.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": bad numeric argument \"" +
                                  std::string(piece) + "\"");
        }
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

} // namespace detail

/// Pair of expressions "(ex, ey)"; `allowed` lists the variables each side
/// may reference ("xy" for fields and maps, "t" for curves).
inline std::pair<Expr, Expr> parse_pair_expr(std::string_view text,
                                             std::string_view allowed,
                                             std::string_view what) {
    auto [lhs, rhs] = detail::split_pair(text);
    Expr ex, ey;
    try {
        ex = parse_expr(lhs);
        ey = parse_expr(rhs);
    } catch (const ParseError& e) {
        throw ParseError(std::string(what) + ": " + e.what(), e.position());
    }
    detail::require_variables(ex, allowed, what);
    detail::require_variables(ey, allowed, what);
    return {ex, ey};
}

inline PlaneVectorField field_from_exprs(const Expr& p, const Expr& q) {
    return {scalar_from_expr(p), scalar_from_expr(q)};
}

inline ParamCurve curve_from_exprs(const Expr& cx, const Expr& cy, Space target,
                                   int sample_count = kDefaultCurveSamples) {
    return ParamCurve::closed(
        [cx](double t) { return cx.eval(0.0, 0.0, t); },
        [cy](double t) { return cy.eval(0.0, 0.0, t); }, target, sample_count);
}

inline ParamCurve parse_curve(std::string_view text, Space target = Space::plane,
                              int sample_count = kDefaultCurveSamples) {
    auto [cx, cy] = parse_pair_expr(text, "t", "curve");
    return curve_from_exprs(cx, cy, target, sample_count);
}

inline Diffeo2 parse_diffeo(std::string_view forward,
                            std::optional<std::string_view> inverse = std::nullopt) {
    auto [f, g] = parse_pair_expr(forward, "xy", "map");
    Diffeo2 d(scalar_from_expr(f), scalar_from_expr(g));
    if (inverse) {
        auto [fi, gi] = parse_pair_expr(*inverse, "xy", "inverse map");
        d.with_inverse(scalar_from_expr(fi), scalar_from_expr(gi));
    }
    return d;
}

inline PlaneVectorField radial_field() {
    return {ScalarField2([](double x, double) { return x; }),
            ScalarField2([](double, double y) { return y; })};
}

inline PlaneVectorField rotation_field() {
    return {ScalarField2([](double, double y) { return -y; }),
            ScalarField2([](double x, double) { return x; })};
}

/// The constant field d/dx pushed through the annulus map for (p, q).
inline PlaneVectorField theorem_pushforward_field(int p, int q) {
    return pushforward(constant_field(1.0, 0.0), phi_diffeo(p, q));
}

/// Context needed by registry entries that reference a map: the "example"
/// field requires psi and the slope (a, b).
struct FieldContext {
    std::optional<Diffeo2> psi;
    std::optional<double> a, b;
};

/// Builds a field from a registry name ("constant(a,b)", "radial",
/// "rotation", "example", "example(a,b)", "theorem-pushforward(p,q)") or,
/// failing that, from a pair expression in x, y.
inline PlaneVectorField make_field(std::string_view spec,
                                   const FieldContext& ctx = {}) {
    const std::string_view s = detail::trim(spec);
    std::string_view name = s;
    std::string_view args;
    const std::size_t paren = s.find('(');
    if (paren != std::string_view::npos && s.back() == ')') {
        name = detail::trim(s.substr(0, paren));
        args = s.substr(paren + 1, s.size() - paren - 2);
    }
    if (name == "radial" && paren == std::string_view::npos)
        return radial_field();
    if (name == "rotation" && paren == std::string_view::npos)
        return rotation_field();
    if (name == "constant") {
        const auto v = detail::parse_number_args(args, "constant");
        if (v.size() != 2)
            throw ValidationError("constant: expected constant(a,b)");
        if (v[0] == 0.0 && v[1] == 0.0)
            throw ValidationError("constant: (a, b) must be nonzero");
        return constant_field(v[0], v[1]);
    }
    if (name == "theorem-pushforward") {
        const auto v = detail::parse_number_args(args, "theorem-pushforward");
        if (v.size() != 2)
            throw ValidationError(
                "theorem-pushforward: expected theorem-pushforward(p,q)");
        return theorem_pushforward_field(static_cast<int>(v[0]),
                                         static_cast<int>(v[1]));
    }
    if (name == "example") {
        double a = ctx.a.value_or(0.0), b = ctx.b.value_or(0.0);
        if (paren != std::string_view::npos) {
            const auto v = detail::parse_number_args(args, "example");
            if (v.size() != 2)
                throw ValidationError("example: expected example(a,b)");
            a = v[0];
            b = v[1];
        } else if (!ctx.a || !ctx.b) {
            throw ValidationError("example: slope (a, b) required (flags --a/--b "
                                  "or example(a,b))");
        }
        if (!ctx.psi)
            throw ValidationError("example: a map psi is required (flag --psi)");
        return example_field(*ctx.psi, a, b);
    }
    // Not a registry name: a pair expression in x, y.
    auto [p, q] = parse_pair_expr(s, "xy", "field");
    return field_from_exprs(p, q);
}

} // namespace torwind
