// Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
// criterion fails. argv[1] must name the CLI binary (used by the
// determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "torwind/torwind.hpp"

using namespace torwind;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const char* title, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number,
                title, detail.c_str());
    if (!ok)
        ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, format);
    std::vsnprintf(buf, sizeof buf, format, ap);
    va_end(ap);
    return buf;
}

const std::vector<std::pair<int, int>> kPairs = {
    {1, 0}, {0, 1}, {1, 1}, {-1, 1}, {2, 1}, {1, 2}, {3, 2}, {2, 3}};

// --------------------------------------------------------------------
// 1. theorem reproduction: snapped 1, residual < 1e-6, oracle delta
//    < 1e-6 for every (p,q); full sweep under 10 seconds.
void criterion_theorem() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_residual = 0.0, worst_delta = 0.0;
    for (auto [p, q] : kPairs) {
        const TheoremReport rep = theorem_check(p, q);
        ok = ok && rep.quadrature.snapped == 1 && rep.unwrap.snapped == 1;
        worst_residual = std::max(worst_residual, rep.quadrature.snap_residual);
        worst_delta = std::max(worst_delta, rep.oracle_delta);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    ok = ok && worst_residual < 1e-6 && worst_delta < 1e-6 && secs < 10.0;
    report(1, "theorem reproduction over the (p,q) sweep", ok,
           fmt("8 pairs, worst residual %.2e, worst oracle delta %.2e, %.2fs",
               worst_residual, worst_delta, secs));
}

// --------------------------------------------------------------------
// 2. constant-field index 0 along 20 randomized smooth Jordan curves.
void criterion_constant_field() {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> coef(-0.12, 0.12);
    std::uniform_real_distribution<double> slope(-2.0, 2.0);
    bool ok = true;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
        const double s1 = coef(rng), s2 = coef(rng), s3 = coef(rng);
        const double cx = slope(rng) * 0.2, cy = slope(rng) * 0.2;
        double a = 0.0, b = 0.0;
        while (std::hypot(a, b) < 0.1) {
            a = slope(rng);
            b = slope(rng);
        }
        auto radius = [=](double t) {
            return 1.0 + c1 * std::cos(t) + c2 * std::cos(2 * t) +
                   c3 * std::cos(3 * t) + s1 * std::sin(t) +
                   s2 * std::sin(2 * t) + s3 * std::sin(3 * t);
        };
        const ParamCurve curve = ParamCurve::closed(
            [=](double t) { return cx + radius(t) * std::cos(t); },
            [=](double t) { return cy + radius(t) * std::sin(t); },
            Space::plane, 1024);
        const IndexResult quad = index_quadrature(constant_field(a, b), curve);
        const IndexResult unw = index_unwrap(constant_field(a, b), curve);
        ok = ok && quad.snapped == 0 && unw.snapped == 0;
        worst = std::max({worst, quad.snap_residual, unw.snap_residual});
    }
    ok = ok && worst < 1e-6;
    report(2, "constant field winds 0 along randomized Jordan curves", ok,
           fmt("20 curves, worst residual %.2e", worst));
}

// --------------------------------------------------------------------
// 3. classical indices with oracle agreement.
void criterion_classical() {
    const ParamCurve circle = ParamCurve::closed(
        [](double t) { return std::cos(t); },
        [](double t) { return std::sin(t); }, Space::plane, 512);
    const PlaneVectorField z2{
        ScalarField2([](double x, double y) { return x * x - y * y; }),
        ScalarField2([](double x, double y) { return 2 * x * y; })};
    struct Case {
        const char* name;
        PlaneVectorField field;
        long long expected;
    };
    const Case cases[] = {{"radial", radial_field(), 1},
                          {"rotation", rotation_field(), 1},
                          {"squared-radial", z2, 2}};
    bool ok = true;
    double worst = 0.0;
    for (const Case& c : cases) {
        const IndexResult quad = index_quadrature(c.field, circle);
        const IndexResult unw = index_unwrap(c.field, circle);
        ok = ok && quad.snapped == c.expected && unw.snapped == c.expected;
        worst = std::max({worst, quad.snap_residual, unw.snap_residual,
                          std::fabs(quad.raw - unw.raw)});
    }
    ok = ok && worst < 1e-6;
    report(3, "classical indices (radial 1, rotation 1, squared 2)", ok,
           fmt("worst residual/delta %.2e", worst));
}

// --------------------------------------------------------------------
// 4. the mapped curve matches (2 pi / H)(cos Ht, sin Ht) to 1e-9.
void criterion_closed_form() {
    bool ok = true;
    double worst = 0.0;
    for (auto [p, q] : kPairs) {
        const double H = double(p) * p + double(q) * q;
        for (int j = 0; j <= 2000; ++j) {
            const double t = kTwoPi * j / 2000.0;
            const Vec2 w = phi(p, q, {p * t, q * t});
            const Vec2 closed{kTwoPi / H * std::cos(H * t),
                              kTwoPi / H * std::sin(H * t)};
            worst = std::max(worst, (w - closed).norm());
        }
    }
    ok = worst < 1e-9;
    report(4, "curve image matches its closed form", ok,
           fmt("8 pairs x 2001 samples, max deviation %.2e", worst));
}

// --------------------------------------------------------------------
// 5. example-family conjugacy through three smooth invertible maps.
void criterion_conjugacy() {
    std::vector<Vec2> samples;
    for (int j = 0; j <= 32; ++j)
        for (int i = 0; i <= 32; ++i)
            samples.push_back({i / 32.0, j / 32.0});

    std::vector<std::pair<const char*, Diffeo2>> maps;
    maps.emplace_back("linear", linear_diffeo(2.0, 0.3, -0.1, 1.0));
    maps.emplace_back("shear",
                      Diffeo2(ScalarField2([](double x, double y) {
                                  return x + 0.1 * std::sin(y);
                              }),
                              ScalarField2([](double, double y) { return y; })));
    maps.emplace_back(
        "gradient",
        Diffeo2(ScalarField2([](double x, double y) {
                    return x + 0.1 * std::cos(x) * std::sin(y);
                }),
                ScalarField2([](double x, double y) {
                    return y + 0.1 * std::sin(x) * std::cos(y);
                })));

    bool ok = true;
    double worst = 0.0;
    for (auto& [name, psi] : maps) {
        for (auto [a, b] : {std::pair{1.0, 2.0}, {2.0, 3.0}}) {
            const PlaneVectorField X = example_field(psi, a, b);
            const double r = conjugacy_residual(X, constant_field(a, b), psi, samples);
            worst = std::max(worst, r);
        }
    }
    ok = worst < 1e-6;
    report(5, "example-family conjugacy on a 33x33 grid", ok,
           fmt("3 maps x 2 slopes, worst residual %.2e", worst));
}

// --------------------------------------------------------------------
// 6. first-integral pipeline.
void criterion_first_integral() {
    const Rect dom{0, 1, 0, 1};
    bool ok = true;
    std::string detail;

    // Identity map, (a,b) = (1,2): h = 2x - y + const to 1e-10.
    {
        const auto spec = make_gradient_spec(identity_diffeo(), 1.0, 2.0);
        const FirstIntegralGrid grid = build_first_integral(spec, dom, 64, {0, 0});
        double worst = 0.0;
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                worst = std::max(worst,
                                 std::fabs(grid.at(i, j) - (2 * grid.node_x(i) -
                                                            grid.node_y(j))));
        ok = ok && worst < 1e-10;
        detail += fmt("identity h error %.2e", worst);
    }

    // Example-family instances that pass the integrability gate: residual
    // of X applied to h below 1e-4 at resolution 128, and level-set drift
    // below 1e-4 per unit time under RK4.
    struct Instance {
        const char* name;
        Diffeo2 psi;
        double a, b;
    };
    std::vector<Instance> instances;
    instances.push_back({"identity", identity_diffeo(), 1.0, 2.0});
    instances.push_back({"diagonal", linear_diffeo(2, 0, 0, 1), 2.0, 3.0});
    instances.push_back(
        {"gradient",
         Diffeo2(ScalarField2([](double x, double y) {
                     return x + 0.1 * std::cos(x) * std::sin(y);
                 }),
                 ScalarField2([](double x, double y) {
                     return y + 0.1 * std::sin(x) * std::cos(y);
                 })),
         1.0, 2.0});

    int used = 0;
    double worst_defect = 0.0, worst_drift_rate = 0.0;
    for (const Instance& inst : instances) {
        const GradientSpec spec = make_gradient_spec(inst.psi, inst.a, inst.b);
        if (!(check_integrability(spec, dom, 32) < 1e-5))
            continue; // only gated instances take part
        ++used;
        const FirstIntegralGrid grid =
            build_first_integral(spec, dom, 128, {0.5, 0.5});
        const PlaneVectorField X = example_field(inst.psi, inst.a, inst.b);
        worst_defect = std::max(worst_defect, residual_X_of_h(X, grid));

        const FlowDrift drift = flow_level_set_drift(
            X, grid, {grid.node_x(13), grid.node_y(19)}, 1.0);
        ok = ok && drift.time > 0.01;
        worst_drift_rate =
            std::max(worst_drift_rate, drift.drift / drift.time);
    }
    ok = ok && used == 3 && worst_defect < 1e-4 && worst_drift_rate < 1e-4;
    detail += fmt("; %d instances, worst X(h) %.2e, worst drift %.2e per unit time",
                  used, worst_defect, worst_drift_rate);
    report(6, "first-integral pipeline", ok, detail);
}

// --------------------------------------------------------------------
// 7. property suites: homotopy invariance, anchor-shift invariance,
//    Simpson-order refinement, chain rule.
void criterion_properties() {
    bool ok = true;
    std::string detail;

    {
        bool constant = true;
        long long first = -99;
        for (int s = 0; s <= 10; ++s) {
            const double sa = 1.0 + 0.05 * s;
            const double sb = 1.0 + 0.003 * s * s;
            const double w = 0.015 * s;
            const ParamCurve curve = ParamCurve::closed(
                [=](double t) { return sa * std::cos(t) + w * std::cos(2 * t); },
                [=](double t) { return sb * std::sin(t) + w * std::sin(3 * t); },
                Space::plane, 512);
            const long long snapped =
                index_quadrature(radial_field(), curve).snapped;
            if (s == 0)
                first = snapped;
            constant = constant && snapped == first;
        }
        ok = ok && constant && first == 1;
        detail += fmt("homotopy constant index %lld over 10 steps", first);
    }

    const Rect dom{0, 1, 0, 1};
    const Diffeo2 bench(ScalarField2([](double x, double y) {
                            return x + 0.1 * std::cos(x) * std::sin(y);
                        }),
                        ScalarField2([](double x, double y) {
                            return y + 0.1 * std::sin(x) * std::cos(y);
                        }));
    {
        const GradientSpec spec = make_gradient_spec(bench, 1.0, 2.0);
        const FirstIntegralGrid ga = build_first_integral(spec, dom, 64, {0, 0});
        const FirstIntegralGrid gb =
            build_first_integral(spec, dom, 64, {0.75, 0.5});
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t k = 0; k < ga.values.size(); ++k) {
            lo = std::min(lo, ga.values[k] - gb.values[k]);
            hi = std::max(hi, ga.values[k] - gb.values[k]);
        }
        ok = ok && hi - lo < 1e-8;
        detail += fmt("; anchor spread %.2e", hi - lo);
    }

    {
        // Higher-frequency benchmark keeps the refinement signal above the
        // finite-difference noise floor.
        const Diffeo2 wavy(ScalarField2([](double x, double y) {
                               return x + 0.2 * std::cos(2 * x) * std::sin(2 * y);
                           }),
                           ScalarField2([](double x, double y) {
                               return y + 0.2 * std::sin(2 * x) * std::cos(2 * y);
                           }));
        const GradientSpec spec = make_gradient_spec(wavy, 1.0, 2.0);
        const FirstIntegralGrid g16 = build_first_integral(spec, dom, 16, {0.5, 0.5});
        const FirstIntegralGrid g32 = build_first_integral(spec, dom, 32, {0.5, 0.5});
        const FirstIntegralGrid g64 = build_first_integral(spec, dom, 64, {0.5, 0.5});
        double d1 = 0.0, d2 = 0.0;
        for (int j = 0; j <= 16; ++j)
            for (int i = 0; i <= 16; ++i) {
                d1 = std::max(d1, std::fabs(g16.at(i, j) - g32.at(2 * i, 2 * j)));
                d2 = std::max(d2, std::fabs(g32.at(2 * i, 2 * j) - g64.at(4 * i, 4 * j)));
            }
        ok = ok && d1 / d2 >= 8.0;
        detail += fmt("; refinement ratio %.1f", d1 / d2);
    }

    {
        std::mt19937 rng(77u);
        std::uniform_real_distribution<double> amp(0.05, 0.2), pt(-1.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double e1 = amp(rng), e2 = amp(rng);
            const Diffeo2 d1(ScalarField2([e1](double x, double y) {
                                 return x + e1 * std::sin(x + y);
                             }),
                             ScalarField2([e1](double x, double y) {
                                 return y + e1 * std::cos(x - y);
                             }));
            const Diffeo2 d2(ScalarField2([e2](double x, double y) {
                                 return 2 * x - e2 * y * y;
                             }),
                             ScalarField2([e2](double x, double y) {
                                 return std::exp(e2 * x) + y;
                             }));
            const Diffeo2 comp = compose(d2, d1);
            const Vec2 z{pt(rng), pt(rng)};
            const Mat2 lhs = comp.jacobian(z);
            const Mat2 rhs = d2.jacobian(d1.apply(z)) * d1.jacobian(z);
            worst = std::max({worst, std::fabs(lhs.a11 - rhs.a11),
                              std::fabs(lhs.a12 - rhs.a12),
                              std::fabs(lhs.a21 - rhs.a21),
                              std::fabs(lhs.a22 - rhs.a22)});
        }
        ok = ok && worst < 1e-5;
        detail += fmt("; chain-rule deviation %.2e", worst);
    }

    report(7, "property suites", ok, detail);
}

// --------------------------------------------------------------------
// 8. repeated identical CLI invocations are byte-identical.
void criterion_determinism(const char* cli) {
    if (!cli) {
        report(8, "CLI determinism", false, "no CLI binary path given");
        return;
    }
    const fs::path tmp = "acceptance_tmp";
    fs::create_directories(tmp);
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    auto run = [&](const std::string& args, const fs::path& out) {
        const std::string cmd =
            std::string(cli) + " " + args + " > " + out.string() + " 2> /dev/null";
        return std::system(cmd.c_str()) == 0;
    };

    bool ok = true;
    std::string detail;
    {
        const std::string args =
            "index --field radial --curve \"(cos(t), sin(t))\"";
        ok = ok && run(args, tmp / "a1.json") && run(args, tmp / "a2.json");
        ok = ok && slurp(tmp / "a1.json") == slurp(tmp / "a2.json");
        detail += "index JSON";
    }
    {
        const std::string args =
            "theorem-check --p 2 --q 3 --svg " + (tmp / "curve.svg").string();
        ok = ok && run(args, tmp / "b1.json");
        const std::string svg_first = slurp(tmp / "curve.svg");
        ok = ok && run(args, tmp / "b2.json");
        ok = ok && slurp(tmp / "b1.json") == slurp(tmp / "b2.json");
        ok = ok && slurp(tmp / "curve.svg") == svg_first && !svg_first.empty();
        detail += ", theorem JSON+SVG";
    }
    {
        const std::string args =
            "first-integral --psi \"(x + 0.1*cos(x)*sin(y), y + 0.1*sin(x)*cos(y))\" "
            "--a 1 --b 2 --domain \"0,1,0,1\" --res 32 --csv " +
            (tmp / "h.csv").string() + " --svg " + (tmp / "h.svg").string();
        ok = ok && run(args, tmp / "c1.json");
        const std::string csv_first = slurp(tmp / "h.csv");
        const std::string svg_first = slurp(tmp / "h.svg");
        ok = ok && run(args, tmp / "c2.json");
        ok = ok && slurp(tmp / "c1.json") == slurp(tmp / "c2.json");
        ok = ok && slurp(tmp / "h.csv") == csv_first && !csv_first.empty();
        ok = ok && slurp(tmp / "h.svg") == svg_first;
        detail += ", first-integral JSON+CSV+SVG";
    }
    report(8, "CLI determinism", ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;
    criterion_theorem();
    criterion_constant_field();
    criterion_classical();
    criterion_closed_form();
    criterion_conjugacy();
    criterion_first_integral();
    criterion_properties();
    criterion_determinism(cli);
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
