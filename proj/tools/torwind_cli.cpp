// torwind: winding indices of plane vector fields, the explicit annulus
// uniformization of constant torus fields, and constructive first
// integrals. See README.md for the expression syntax and examples.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torwind/torwind.hpp"

namespace tw = torwind;

namespace {

// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 assertion failure (a theorem check that does not hold).
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAssertion = 4;

struct JobConfig {
    std::string command;
    std::optional<std::string> field, curve, psi, psi_inverse;
    std::vector<std::string> curves; // corollary-check accepts several
    std::optional<int> p, q, res, samples, grid;
    std::optional<double> a, b;
    std::optional<std::string> domain, anchor, pairs;
    bool sweep = false;
    std::optional<std::string> out, svg, csv;
    std::optional<double> snap_tol, oracle_tol, eps_curl;
};

// The standard sweep list for theorem-check --sweep.
const std::vector<std::pair<int, int>> kSweepPairs = {
    {1, 0}, {0, 1}, {1, 1}, {-1, 1}, {2, 1}, {1, 2}, {3, 2}, {2, 3}};

std::string resolve_output(const std::string& path) {
    std::filesystem::path resolved = path;
    const char* dir = std::getenv("TORWIND_OUT_DIR");
    if (dir && *dir && !resolved.is_absolute())
        resolved = std::filesystem::path(dir) / resolved;
    std::error_code ec;
    if (resolved.has_parent_path())
        std::filesystem::create_directories(resolved.parent_path(), ec);
    return resolved.string();
}

void apply_config_file(JobConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw tw::ValidationError("cannot read config file '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw tw::ValidationError("config file '" + path + "': " + e.what());
    }
    auto str = [&](const char* key, std::optional<std::string>& slot) {
        if (j.contains(key) && !slot)
            slot = j.at(key).get<std::string>();
    };
    auto num = [&](const char* key, std::optional<double>& slot) {
        if (j.contains(key) && !slot)
            slot = j.at(key).get<double>();
    };
    auto integer = [&](const char* key, std::optional<int>& slot) {
        if (j.contains(key) && !slot)
            slot = j.at(key).get<int>();
    };
    if (cfg.command.empty() && j.contains("command"))
        cfg.command = j.at("command").get<std::string>();
    str("field", cfg.field);
    str("curve", cfg.curve);
    if (j.contains("curves") && cfg.curves.empty())
        cfg.curves = j.at("curves").get<std::vector<std::string>>();
    str("psi", cfg.psi);
    str("psi_inverse", cfg.psi_inverse);
    integer("p", cfg.p);
    integer("q", cfg.q);
    integer("res", cfg.res);
    integer("samples", cfg.samples);
    integer("grid", cfg.grid);
    num("a", cfg.a);
    num("b", cfg.b);
    str("domain", cfg.domain);
    str("anchor", cfg.anchor);
    str("pairs", cfg.pairs);
    if (j.contains("sweep") && !cfg.sweep)
        cfg.sweep = j.at("sweep").get<bool>();
    str("out", cfg.out);
    str("svg", cfg.svg);
    str("csv", cfg.csv);
    num("snap_tol", cfg.snap_tol);
    num("oracle_tol", cfg.oracle_tol);
    num("eps_curl", cfg.eps_curl);
}

tw::IndexOptions index_options(const JobConfig& cfg) {
    tw::IndexOptions opts;
    if (cfg.snap_tol) {
        if (!(*cfg.snap_tol > 0.0))
            throw tw::ValidationError("--snap-tol must be positive");
        opts.snap_tol = *cfg.snap_tol;
    }
    return opts;
}

tw::Json index_result_json(const tw::IndexResult& r) {
    tw::Json j = tw::Json::object();
    j.set("raw", r.raw);
    j.set("snapped", r.snapped);
    j.set("snap_residual", r.snap_residual);
    j.set("panels", r.panels);
    j.set("min_field_norm", r.min_field_norm);
    j.set("status", tw::to_string(r.status));
    return j;
}

tw::Json tolerance_json(const tw::IndexOptions& opts) {
    tw::Json j = tw::Json::object();
    j.set("convergence_tol", opts.convergence_tol);
    j.set("panel_cap", opts.panel_cap);
    j.set("initial_panels", opts.initial_panels);
    j.set("snap_tol", opts.snap_tol);
    j.set("snap_error", opts.snap_error);
    j.set("zero_tol", opts.zero_tol);
    return j;
}

void write_document(const tw::Json& doc, const JobConfig& cfg) {
    doc.dump(std::cout);
    if (cfg.out) {
        const std::string path = resolve_output(*cfg.out);
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw tw::IoError("cannot open '" + path + "' for writing");
        doc.dump(os);
    }
}


void echo_output_paths(torwind::Json& inputs, const JobConfig& cfg) {
    if (cfg.out)
        inputs.set("out", *cfg.out);
    if (cfg.svg)
        inputs.set("svg", *cfg.svg);
    if (cfg.csv)
        inputs.set("csv", *cfg.csv);
}

// Registry-field context, echoed when present so the document round-trips
// the whole job.
void echo_field_context(torwind::Json& inputs, const JobConfig& cfg) {
    if (cfg.psi)
        inputs.set("psi", *cfg.psi);
    if (cfg.a)
        inputs.set("a", *cfg.a);
    if (cfg.b)
        inputs.set("b", *cfg.b);
}

std::vector<tw::Vec2> sample_curve(const tw::ParamCurve& curve, int n = 720) {
    std::vector<tw::Vec2> pts;
    pts.reserve(n + 1);
    for (int j = 0; j <= n; ++j)
        pts.push_back(curve.at(tw::kTwoPi * j / n));
    return pts;
}

tw::Rect parse_domain(const std::string& text) {
    const auto v = tw::detail::parse_number_args(text, "domain");
    if (v.size() != 4)
        throw tw::ValidationError("domain: expected \"x0,x1,y0,y1\"");
    if (!(v[0] < v[1]) || !(v[2] < v[3]))
        throw tw::ValidationError("domain: need x0 < x1 and y0 < y1");
    return {v[0], v[1], v[2], v[3]};
}

tw::Vec2 parse_point(const std::string& text, const char* what) {
    const auto v = tw::detail::parse_number_args(text, what);
    if (v.size() != 2)
        throw tw::ValidationError(std::string(what) + ": expected \"x,y\"");
    return {v[0], v[1]};
}

tw::FieldContext field_context(const JobConfig& cfg) {
    tw::FieldContext ctx;
    if (cfg.psi)
        ctx.psi = tw::parse_diffeo(*cfg.psi, cfg.psi_inverse
                                                 ? std::optional<std::string_view>(*cfg.psi_inverse)
                                                 : std::nullopt);
    ctx.a = cfg.a;
    ctx.b = cfg.b;
    return ctx;
}

// ---------------------------------------------------------------------
// subcommands

int run_index(const JobConfig& cfg) {
    if (!cfg.field || !cfg.curve)
        throw tw::ValidationError("index: --field and --curve are required");
    const tw::IndexOptions opts = index_options(cfg);
    const int samples = cfg.samples.value_or(tw::kDefaultCurveSamples);

    // Fail-fast validation: parse everything before computing.
    const tw::PlaneVectorField X = tw::make_field(*cfg.field, field_context(cfg));
    const tw::ParamCurve curve = tw::parse_curve(*cfg.curve, tw::Space::plane, samples);

    const tw::IndexResult quad = tw::index_quadrature(X, curve, opts);
    const tw::IndexResult unw = tw::index_unwrap(X, curve, opts);

    tw::Json doc = tw::Json::object();
    doc.set("schema", 1);
    doc.set("command", "index");
    tw::Json inputs = tw::Json::object();
    inputs.set("field", *cfg.field);
    inputs.set("curve", *cfg.curve);
    inputs.set("samples", samples);
    echo_field_context(inputs, cfg);
    inputs.set("tolerances", tolerance_json(opts));
    echo_output_paths(inputs, cfg);
    doc.set("inputs", inputs);
    tw::Json outputs = tw::Json::object();
    outputs.set("quadrature", index_result_json(quad));
    outputs.set("unwrap", index_result_json(unw));
    outputs.set("oracle_delta", std::fabs(quad.raw - unw.raw));
    doc.set("outputs", outputs);

    if (cfg.svg)
        tw::emit_svg_curve(resolve_output(*cfg.svg), sample_curve(curve));
    write_document(doc, cfg);
    return kExitOk;
}

int run_theorem_check(const JobConfig& cfg) {
    std::vector<std::pair<int, int>> cases;
    if (cfg.sweep) {
        cases = kSweepPairs;
    } else if (cfg.pairs) {
        // "p1,q1;p2,q2;..."
        std::string_view rest = *cfg.pairs;
        while (!rest.empty()) {
            const std::size_t semi = rest.find(';');
            const std::string_view piece = rest.substr(0, semi);
            const auto v = tw::detail::parse_number_args(piece, "pairs");
            if (v.size() != 2)
                throw tw::ValidationError("pairs: expected \"p,q;p,q;...\"");
            cases.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
            if (semi == std::string_view::npos)
                break;
            rest.remove_prefix(semi + 1);
        }
    } else if (cfg.p && cfg.q) {
        cases.emplace_back(*cfg.p, *cfg.q);
    } else {
        throw tw::ValidationError(
            "theorem-check: give --p and --q, or --pairs, or --sweep");
    }

    const tw::IndexOptions opts = index_options(cfg);
    const double oracle_tol = cfg.oracle_tol.value_or(1e-6);
    if (!(oracle_tol > 0.0))
        throw tw::ValidationError("--oracle-tol must be positive");

    tw::Json doc = tw::Json::object();
    doc.set("schema", 1);
    doc.set("command", "theorem-check");
    tw::Json inputs = tw::Json::object();
    {
        tw::Json list = tw::Json::array();
        for (auto [p, q] : cases) {
            tw::Json pair = tw::Json::array();
            pair.push(p);
            pair.push(q);
            list.push(std::move(pair));
        }
        inputs.set("pairs", list);
        inputs.set("sweep", cfg.sweep);
        inputs.set("oracle_tol", oracle_tol);
        inputs.set("tolerances", tolerance_json(opts));
    }
    echo_output_paths(inputs, cfg);
    doc.set("inputs", inputs);

    bool all_hold = true;
    tw::Json checks = tw::Json::array();
    for (auto [p, q] : cases) {
        const tw::TheoremReport rep = tw::theorem_check(p, q, opts, oracle_tol);
        all_hold = all_hold && rep.holds;
        tw::Json c = tw::Json::object();
        c.set("p", p);
        c.set("q", q);
        c.set("H", rep.H);
        c.set("quadrature", index_result_json(rep.quadrature));
        c.set("unwrap", index_result_json(rep.unwrap));
        c.set("oracle_delta", rep.oracle_delta);
        c.set("theorem_holds", rep.holds);
        checks.push(std::move(c));
    }
    tw::Json outputs = tw::Json::object();
    outputs.set("checks", checks);
    outputs.set("all_hold", all_hold);
    doc.set("outputs", outputs);

    if (cfg.svg && cases.size() == 1) {
        const auto uni = tw::make_uniformization(cases[0].first, cases[0].second);
        tw::emit_svg_curve(resolve_output(*cfg.svg), sample_curve(uni.gamma_image));
    }
    write_document(doc, cfg);
    if (!all_hold) {
        tw::Json err = tw::Json::object();
        err.set("schema", 1);
        tw::Json detail = tw::Json::object();
        detail.set("type", "assertion");
        detail.set("message", "theorem-check: snapped index differs from 1");
        err.set("error", detail);
        err.dump(std::cerr);
        return kExitAssertion;
    }
    return kExitOk;
}

int run_corollary_check(const JobConfig& cfg) {
    std::vector<std::string> curves = cfg.curves;
    if (cfg.curve)
        curves.insert(curves.begin(), *cfg.curve);
    if (!cfg.field || curves.empty())
        throw tw::ValidationError(
            "corollary-check: --field and at least one --curve are required");
    const tw::IndexOptions opts = index_options(cfg);
    const int samples = cfg.samples.value_or(tw::kDefaultCurveSamples);

    const tw::PlaneVectorField X = tw::make_field(*cfg.field, field_context(cfg));
    std::vector<tw::ParamCurve> parsed;
    for (const std::string& c : curves)
        parsed.push_back(tw::parse_curve(c, tw::Space::plane, samples));

    tw::Json doc = tw::Json::object();
    doc.set("schema", 1);
    doc.set("command", "corollary-check");
    tw::Json inputs = tw::Json::object();
    inputs.set("field", *cfg.field);
    {
        tw::Json list = tw::Json::array();
        for (const std::string& c : curves)
            list.push(c);
        inputs.set("curves", list);
    }
    inputs.set("samples", samples);
    echo_field_context(inputs, cfg);
    inputs.set("tolerances", tolerance_json(opts));
    echo_output_paths(inputs, cfg);
    doc.set("inputs", inputs);

    bool necessary = true;
    tw::Json results = tw::Json::array();
    for (std::size_t k = 0; k < parsed.size(); ++k) {
        const tw::IndexResult quad = tw::index_quadrature(X, parsed[k], opts);
        const tw::IndexResult unw = tw::index_unwrap(X, parsed[k], opts);
        const bool is_one = quad.snapped == 1 && unw.snapped == 1;
        necessary = necessary && is_one;
        tw::Json r = tw::Json::object();
        r.set("curve", curves[k]);
        r.set("quadrature", index_result_json(quad));
        r.set("unwrap", index_result_json(unw));
        r.set("oracle_delta", std::fabs(quad.raw - unw.raw));
        r.set("index_is_one", is_one);
        results.push(std::move(r));
    }
    tw::Json outputs = tw::Json::object();
    outputs.set("curves", results);
    // Index 1 along the contour is necessary for a uniformization of this
    // shape to exist; it is not sufficient.
    outputs.set("necessary_condition_holds", necessary);
    doc.set("outputs", outputs);
    write_document(doc, cfg);
    return kExitOk;
}

int run_pushforward(const JobConfig& cfg) {
    if (!cfg.field || !cfg.psi)
        throw tw::ValidationError("pushforward: --field and --psi are required");
    if (cfg.curves.empty())
        throw tw::ValidationError("pushforward: at least one --at point is required");

    const tw::Diffeo2 map = tw::parse_diffeo(
        *cfg.psi, cfg.psi_inverse ? std::optional<std::string_view>(*cfg.psi_inverse)
                                  : std::nullopt);
    const tw::PlaneVectorField X = tw::make_field(*cfg.field, field_context(cfg));
    const tw::PlaneVectorField Y = tw::pushforward(X, map);

    tw::Json doc = tw::Json::object();
    doc.set("schema", 1);
    doc.set("command", "pushforward");
    tw::Json inputs = tw::Json::object();
    inputs.set("field", *cfg.field);
    inputs.set("map", *cfg.psi);
    if (cfg.psi_inverse)
        inputs.set("inverse", *cfg.psi_inverse);
    {
        tw::Json pts = tw::Json::array();
        for (const std::string& s : cfg.curves)
            pts.push(s);
        inputs.set("points", pts);
    }
    echo_output_paths(inputs, cfg);
    doc.set("inputs", inputs);

    tw::Json values = tw::Json::array();
    for (const std::string& s : cfg.curves) {
        const tw::Vec2 w = parse_point(s, "point");
        const tw::Vec2 v = Y.at(w);
        tw::Json entry = tw::Json::object();
        tw::Json pt = tw::Json::array();
        pt.push(w.x);
        pt.push(w.y);
        tw::Json val = tw::Json::array();
        val.push(v.x);
        val.push(v.y);
        entry.set("point", pt);
        entry.set("value", val);
        values.push(std::move(entry));
    }
    tw::Json outputs = tw::Json::object();
    outputs.set("values", values);
    doc.set("outputs", outputs);
    write_document(doc, cfg);
    return kExitOk;
}

int run_first_integral(const JobConfig& cfg) {
    if (!cfg.psi || !cfg.a || !cfg.b)
        throw tw::ValidationError("first-integral: --psi, --a, --b are required");
    const tw::Rect domain = parse_domain(cfg.domain.value_or("0,1,0,1"));
    const int res = cfg.res.value_or(64);
    if (res < 2)
        throw tw::ValidationError("--res must be at least 2");
    tw::BuildOptions build;
    if (cfg.eps_curl) {
        if (!(*cfg.eps_curl > 0.0))
            throw tw::ValidationError("--eps-curl must be positive");
        build.eps_curl = *cfg.eps_curl;
    }
    const tw::Vec2 anchor = cfg.anchor ? parse_point(*cfg.anchor, "anchor")
                                       : tw::Vec2{domain.x0, domain.y0};

    const tw::Diffeo2 psi = tw::parse_diffeo(
        *cfg.psi, cfg.psi_inverse ? std::optional<std::string_view>(*cfg.psi_inverse)
                                  : std::nullopt);
    const tw::GradientSpec spec = tw::make_gradient_spec(psi, *cfg.a, *cfg.b);
    const tw::FirstIntegralGrid grid =
        tw::build_first_integral(spec, domain, res, anchor, build);
    const tw::PlaneVectorField X = tw::example_field(psi, *cfg.a, *cfg.b);
    const double defect = tw::residual_X_of_h(X, grid);

    tw::Json doc = tw::Json::object();
    doc.set("schema", 1);
    doc.set("command", "first-integral");
    tw::Json inputs = tw::Json::object();
    inputs.set("psi", *cfg.psi);
    if (cfg.psi_inverse)
        inputs.set("psi_inverse", *cfg.psi_inverse);
    inputs.set("a", *cfg.a);
    inputs.set("b", *cfg.b);
    {
        tw::Json d = tw::Json::array();
        d.push(domain.x0);
        d.push(domain.x1);
        d.push(domain.y0);
        d.push(domain.y1);
        inputs.set("domain", d);
    }
    inputs.set("res", res);
    {
        tw::Json apt = tw::Json::array();
        apt.push(anchor.x);
        apt.push(anchor.y);
        inputs.set("anchor", apt);
    }
    inputs.set("eps_curl", build.eps_curl);
    echo_output_paths(inputs, cfg);
    doc.set("inputs", inputs);

    double h_min = grid.values[0], h_max = grid.values[0];
    for (double v : grid.values) {
        h_min = std::min(h_min, v);
        h_max = std::max(h_max, v);
    }
    tw::Json outputs = tw::Json::object();
    outputs.set("integrability_residual", grid.integrability_residual);
    outputs.set("path_disagreement", grid.path_disagreement);
    outputs.set("anchor_value", grid.at(grid.anchor_i, grid.anchor_j));
    outputs.set("h_min", h_min);
    outputs.set("h_max", h_max);
    outputs.set("field_applied_to_h_max", defect);
    doc.set("outputs", outputs);
    {
        // The construction presumes a well-behaved (Hausdorff) flow of the
        // induced field; that hypothesis is surfaced, not verified.
        tw::Json notes = tw::Json::array();
        notes.push("assumes the flow of the induced field is Hausdorff (not checked)");
        doc.set("assumptions", notes);
    }

    if (cfg.csv) {
        const std::string path = resolve_output(*cfg.csv);
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw tw::IoError("cannot open '" + path + "' for writing");
        tw::write_grid_csv(grid, os);
    }
    if (cfg.svg)
        tw::emit_svg_contours(resolve_output(*cfg.svg), grid);
    write_document(doc, cfg);
    return kExitOk;
}

int run_plot(const JobConfig& cfg) {
    if (!cfg.svg)
        throw tw::ValidationError("plot: --svg output path is required");
    const std::string svg_path = resolve_output(*cfg.svg);
    const int modes = (cfg.curve ? 1 : 0) + (cfg.field ? 1 : 0) +
                      (cfg.psi && cfg.a && cfg.b ? 1 : 0);
    if (modes != 1)
        throw tw::ValidationError(
            "plot: give exactly one of --curve, --field (quiver over --domain), "
            "or --psi/--a/--b (contours of the first integral)");

    tw::Json doc = tw::Json::object();
    doc.set("schema", 1);
    doc.set("command", "plot");
    tw::Json inputs = tw::Json::object();
    tw::Json outputs = tw::Json::object();

    if (cfg.curve) {
        const tw::ParamCurve curve =
            tw::parse_curve(*cfg.curve, tw::Space::plane,
                            cfg.samples.value_or(tw::kDefaultCurveSamples));
        const auto pts = sample_curve(curve);
        tw::emit_svg_curve(svg_path, pts);
        inputs.set("kind", "curve");
        inputs.set("curve", *cfg.curve);
        outputs.set("samples", static_cast<long long>(pts.size()));
    } else if (cfg.field) {
        const tw::Rect dom = parse_domain(cfg.domain.value_or("-1,1,-1,1"));
        const int n = cfg.grid.value_or(20);
        if (n < 2)
            throw tw::ValidationError("--grid must be at least 2");
        const tw::PlaneVectorField X = tw::make_field(*cfg.field, field_context(cfg));
        std::vector<std::pair<tw::Vec2, tw::Vec2>> arrows;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const tw::Vec2 p{dom.x0 + dom.width() * i / n,
                                 dom.y0 + dom.height() * j / n};
                arrows.emplace_back(p, X.at(p));
            }
        tw::emit_svg_quiver(svg_path, arrows, 0.8 * dom.width() / n);
        inputs.set("kind", "quiver");
        inputs.set("field", *cfg.field);
        inputs.set("grid", n);
        outputs.set("arrows", static_cast<long long>(arrows.size()));
    } else {
        const tw::Rect dom = parse_domain(cfg.domain.value_or("0,1,0,1"));
        const int res = cfg.res.value_or(64);
        const tw::Diffeo2 psi = tw::parse_diffeo(*cfg.psi);
        const tw::GradientSpec spec = tw::make_gradient_spec(psi, *cfg.a, *cfg.b);
        const tw::FirstIntegralGrid grid =
            tw::build_first_integral(spec, dom, res, {dom.x0, dom.y0});
        tw::emit_svg_contours(svg_path, grid);
        inputs.set("kind", "contour");
        inputs.set("psi", *cfg.psi);
        inputs.set("a", *cfg.a);
        inputs.set("b", *cfg.b);
        inputs.set("res", res);
        outputs.set("levels", 9);
    }
    echo_output_paths(inputs, cfg);
    doc.set("inputs", inputs);
    doc.set("outputs", outputs);
    write_document(doc, cfg);
    return kExitOk;
}

int dispatch(const JobConfig& cfg) {
    if (cfg.command == "index") return run_index(cfg);
    if (cfg.command == "theorem-check") return run_theorem_check(cfg);
    if (cfg.command == "corollary-check") return run_corollary_check(cfg);
    if (cfg.command == "pushforward") return run_pushforward(cfg);
    if (cfg.command == "first-integral") return run_first_integral(cfg);
    if (cfg.command == "plot") return run_plot(cfg);
    throw tw::ValidationError("no command given (and none found in --config)");
}

int emit_error(const char* type, const std::string& message, int code) {
    tw::Json err = tw::Json::object();
    err.set("schema", 1);
    tw::Json detail = tw::Json::object();
    detail.set("type", type);
    detail.set("message", message);
    err.set("error", detail);
    err.dump(std::cerr);
    return code;
}

const char kExprHelp[] =
    "Expressions use +, -, *, /, ^ (power), parentheses, the constant pi and\n"
    "the functions sin, cos, tan, atan2, exp, log, sqrt, abs. Fields and maps\n"
    "are pairs \"(ex, ey)\" in x and y; curves are pairs in t over [0, 2*pi].\n"
    "Registry fields: constant(a,b), radial, rotation, example[(a,b)]\n"
    "(requires --psi), theorem-pushforward(p,q).\n"
    "Exit codes: 0 ok, 2 invalid input, 3 numerical failure, 4 failed check.\n"
    "Set TORWIND_OUT_DIR to redirect relative output paths.";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"winding indices, torus uniformization and first integrals"};
    app.footer(kExprHelp);
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON job file; flags override it");

    // Typed holders; values move into the JobConfig only when the flag was
    // actually given, so config-file values are not clobbered by defaults.
    struct Holders {
        std::string field, curve, psi, psi_inverse, domain, anchor, pairs;
        std::string out, svg, csv;
        std::vector<std::string> curves, points;
        int p = 0, q = 0, res = 0, samples = 0, grid = 0;
        double a = 0, b = 0, snap_tol = 0, oracle_tol = 0, eps_curl = 0;
        bool sweep = false;
    } h;

    auto wire = [&h](CLI::App* sub, std::initializer_list<const char*> names) {
        sub->fallthrough(); // lets the global --config sit after the subcommand
        auto has = [&names](const char* n) {
            for (const char* m : names)
                if (std::string_view(m) == n) return true;
            return false;
        };
        if (has("field"))
            sub->add_option("--field", h.field,
                            "field: pair expression \"(P, Q)\" or registry name");
        if (has("curve"))
            sub->add_option("--curve", h.curve, "closed curve \"(x(t), y(t))\"");
        if (has("curves"))
            sub->add_option("--curve", h.curves,
                            "contour curve \"(x(t), y(t))\" (repeatable)");
        if (has("psi"))
            sub->add_option("--psi", h.psi, "map \"(f, g)\" in x, y");
        if (has("inverse"))
            sub->add_option("--inverse", h.psi_inverse,
                            "closed-form inverse map \"(finv, ginv)\"");
        if (has("pq")) {
            sub->add_option("--p", h.p, "lap count p");
            sub->add_option("--q", h.q, "lap count q");
        }
        if (has("ab")) {
            sub->add_option("--a", h.a, "slope a");
            sub->add_option("--b", h.b, "slope b");
        }
        if (has("domain"))
            sub->add_option("--domain", h.domain, "rectangle \"x0,x1,y0,y1\"");
        if (has("res"))
            sub->add_option("--res", h.res, "grid cells per axis");
        if (has("samples"))
            sub->add_option("--samples", h.samples, "curve validation samples");
        if (has("anchor"))
            sub->add_option("--anchor", h.anchor, "anchor point \"x,y\" where h = 0");
        if (has("pairs"))
            sub->add_option("--pairs", h.pairs, "explicit list \"p,q;p,q;...\"");
        if (has("sweep"))
            sub->add_flag("--sweep", h.sweep, "run the standard (p,q) sweep");
        if (has("oracle"))
            sub->add_option("--oracle-tol", h.oracle_tol,
                            "max quadrature/unwrap disagreement");
        if (has("eps_curl"))
            sub->add_option("--eps-curl", h.eps_curl, "integrability threshold");
        if (has("points"))
            sub->add_option("--at", h.points, "query point \"x,y\" (repeatable)");
        if (has("grid"))
            sub->add_option("--grid", h.grid, "quiver grid per axis");
        if (has("csv"))
            sub->add_option("--csv", h.csv, "grid CSV (x,y,h) output path");
        if (has("svg"))
            sub->add_option("--svg", h.svg, "SVG output path");
        sub->add_option("--out", h.out, "write the JSON result here as well as stdout");
        sub->add_option("--snap-tol", h.snap_tol, "snap residual tolerance");
    };

    CLI::App* c_index = app.add_subcommand(
        "index", "winding number of a field along a closed curve");
    wire(c_index, {"field", "curve", "samples", "psi", "ab", "svg"});

    CLI::App* c_thm = app.add_subcommand(
        "theorem-check",
        "index of the pushed-forward constant field along the image curve");
    wire(c_thm, {"pq", "pairs", "sweep", "oracle", "samples", "svg"});

    CLI::App* c_cor = app.add_subcommand(
        "corollary-check", "necessary condition: index 1 along the contours");
    wire(c_cor, {"field", "curves", "samples", "psi", "ab"});

    CLI::App* c_push = app.add_subcommand(
        "pushforward", "evaluate a pushed-forward field at points");
    wire(c_push, {"field", "psi", "inverse", "points", "ab"});

    CLI::App* c_fi = app.add_subcommand(
        "first-integral",
        "build h with the prescribed gradient and verify it annihilates the field");
    wire(c_fi, {"psi", "inverse", "ab", "domain", "res", "anchor", "eps_curl",
                "csv", "svg"});

    CLI::App* c_plot = app.add_subcommand(
        "plot", "SVG figures: curve, quiver, or first-integral contours");
    wire(c_plot, {"curve", "field", "psi", "ab", "domain", "grid", "res",
                  "samples", "svg"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help or --version
            return app.exit(e);
        return emit_error("validation", e.what(), kExitValidation);
    }

    JobConfig cfg;
    CLI::App* parsed = nullptr;
    for (CLI::App* sub : {c_index, c_thm, c_cor, c_push, c_fi, c_plot})
        if (sub->parsed()) {
            parsed = sub;
            cfg.command = sub->get_name();
        }

    auto seen = [&](const char* name) {
        if (!parsed)
            return false;
        const CLI::Option* opt = parsed->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (seen("--field")) cfg.field = h.field;
    if (seen("--curve")) {
        if (cfg.command == "corollary-check")
            cfg.curves = h.curves;
        else
            cfg.curve = h.curve;
    }
    if (seen("--psi")) cfg.psi = h.psi;
    if (seen("--inverse")) cfg.psi_inverse = h.psi_inverse;
    if (seen("--p")) cfg.p = h.p;
    if (seen("--q")) cfg.q = h.q;
    if (seen("--a")) cfg.a = h.a;
    if (seen("--b")) cfg.b = h.b;
    if (seen("--domain")) cfg.domain = h.domain;
    if (seen("--res")) cfg.res = h.res;
    if (seen("--samples")) cfg.samples = h.samples;
    if (seen("--grid")) cfg.grid = h.grid;
    if (seen("--anchor")) cfg.anchor = h.anchor;
    if (seen("--pairs")) cfg.pairs = h.pairs;
    if (seen("--sweep")) cfg.sweep = h.sweep;
    if (seen("--oracle-tol")) cfg.oracle_tol = h.oracle_tol;
    if (seen("--eps-curl")) cfg.eps_curl = h.eps_curl;
    if (seen("--at")) cfg.curves = h.points;
    if (seen("--out")) cfg.out = h.out;
    if (seen("--svg")) cfg.svg = h.svg;
    if (seen("--csv")) cfg.csv = h.csv;
    if (seen("--snap-tol")) cfg.snap_tol = h.snap_tol;

    try {
        if (!config_path.empty())
            apply_config_file(cfg, config_path);
        return dispatch(cfg);
    } catch (const tw::ParseError& e) {
        return emit_error("parse", e.what(), kExitValidation);
    } catch (const tw::ValidationError& e) {
        return emit_error("validation", e.what(), kExitValidation);
    } catch (const tw::IoError& e) {
        return emit_error("io", e.what(), kExitValidation);
    } catch (const tw::EvalDomainError& e) {
        return emit_error("domain", e.what(), kExitNumeric);
    } catch (const tw::NumericError& e) {
        return emit_error("numeric", e.what(), kExitNumeric);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what(), kExitNumeric);
    }
}
