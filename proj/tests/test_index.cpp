#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "torwind/index.hpp"
#include "torwind/registry.hpp"

using namespace torwind;
using namespace torwind::testing;

namespace {

void check_both_routes(const PlaneVectorField& X, const ParamCurve& curve,
                       long long expected) {
    const IndexResult quad = index_quadrature(X, curve);
    const IndexResult unw = index_unwrap(X, curve);
    CHECK(quad.snapped == expected);
    CHECK(unw.snapped == expected);
    CHECK(quad.snap_residual < 1e-6);
    CHECK(unw.snap_residual < 1e-6);
    CHECK(std::fabs(quad.raw - unw.raw) < 1e-6);
    CHECK(quad.status == IndexStatus::ok);
    CHECK(quad.min_field_norm > kEpsZero);
}

} // namespace

TEST_CASE("constant field has index 0 along any closed curve") {
    check_both_routes(constant_field(1, 0), unit_circle(), 0);
    const auto wobbly = ParamCurve::closed(
        [](double t) { return (1 + 0.2 * std::cos(3 * t)) * std::cos(t); },
        [](double t) { return (1 + 0.2 * std::cos(3 * t)) * std::sin(t); },
        Space::plane, 512);
    check_both_routes(constant_field(0.3, -0.7), wobbly, 0);
}

TEST_CASE("radial field along the unit circle has index 1") {
    check_both_routes(radial_field(), unit_circle(), 1);
}

TEST_CASE("rotation field along a radius-2 circle has index 1") {
    check_both_routes(rotation_field(), circle(2.0), 1);
}

TEST_CASE("squared radial field has index 2, both routes agree") {
    const PlaneVectorField z2{
        ScalarField2([](double x, double y) { return x * x - y * y; }),
        ScalarField2([](double x, double y) { return 2 * x * y; })};
    check_both_routes(z2, unit_circle(), 2);
}

TEST_CASE("index along the reversed curve is negated") {
    // Reversing the traversal negates the total angle swept, mirroring the
    // lap-count rule type(reversed) = (-p, -q). Magnitude is preserved.
    const auto curve = unit_circle();
    const auto back = reversed(curve);
    CHECK(index_quadrature(radial_field(), back).snapped ==
          -index_quadrature(radial_field(), curve).snapped);
    CHECK(index_unwrap(rotation_field(), back).snapped ==
          -index_unwrap(rotation_field(), curve).snapped);
    // The constant field is insensitive to orientation: 0 both ways.
    CHECK(index_quadrature(constant_field(2, 1), back).snapped == 0);
    CHECK(index_quadrature(constant_field(2, 1), curve).snapped == 0);
}

TEST_CASE("homotopy invariance along a deformation avoiding zeros") {
    // The radial field vanishes only at the origin; every curve in the
    // family encloses it.
    long long first = -99;
    for (int s = 0; s <= 10; ++s) {
        const double sa = 1.0 + 0.05 * s;
        const double sb = 1.0 + 0.003 * s * s;
        const double w = 0.015 * s;
        const auto curve = ParamCurve::closed(
            [=](double t) { return sa * std::cos(t) + w * std::cos(2 * t); },
            [=](double t) { return sb * std::sin(t) + w * std::sin(3 * t); },
            Space::plane, 512);
        const long long snapped = index_quadrature(radial_field(), curve).snapped;
        if (s == 0)
            first = snapped;
        CHECK(snapped == first);
    }
    CHECK(first == 1);
}

TEST_CASE("winding count respects enclosed zeros") {
    // Radial field along a circle that does not enclose the origin.
    check_both_routes(radial_field(), circle(0.5, {2.0, 0.0}), 0);
}

TEST_CASE("field zero on the curve is an error") {
    // The circle through the origin hits the radial field's only zero.
    const auto through_origin = circle(1.0, {1.0, 0.0}, 64);
    CHECK_THROWS_AS(index_quadrature(radial_field(), through_origin), NumericError);
    CHECK_THROWS_AS(index_unwrap(radial_field(), through_origin), NumericError);
}

TEST_CASE("unresolvably fast fields fail loudly") {
    const PlaneVectorField wild{
        ScalarField2([](double x, double) { return 1.0 + 0.3 * std::sin(987654.321 * x); }),
        ScalarField2([](double x, double y) { return 0.2 * std::cos(876543.21 * y + 3 * x); })};
    CHECK_THROWS_AS(index_quadrature(wild, unit_circle(64)), NumericError);

    // A discontinuous direction (angle jump ~ pi) never unwraps cleanly.
    const PlaneVectorField split{
        ScalarField2([](double x, double) { return x < 0 ? 1.0 : -1.0; }),
        ScalarField2([](double, double) { return 0.1; })};
    CHECK_THROWS_AS(index_unwrap(split, unit_circle(64)), NumericError);
}

TEST_CASE("snap residual classification") {
    const IndexOptions opts;
    CHECK(detail::classify_index(0.9999993, 64, 1.0, opts).status == IndexStatus::ok);
    CHECK(detail::classify_index(1.004, 64, 1.0, opts).status ==
          IndexStatus::suspicious);
    CHECK_THROWS_AS(detail::classify_index(1.2, 64, 1.0, opts), NumericError);
}

TEST_CASE("torus curves are rejected by the index routines") {
    const auto torus_curve = ParamCurve::closed([](double t) { return t; },
                                                [](double) { return 0.0; },
                                                Space::torus, 64);
    CHECK_THROWS_AS(index_quadrature(constant_field(1, 0), torus_curve),
                    ValidationError);
    CHECK_THROWS_AS(index_unwrap(constant_field(1, 0), torus_curve),
                    ValidationError);
}

TEST_CASE("quadrature and unwrap agree across a random pair suite") {
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> coef(-0.1, 0.1);
    for (int k = 0; k < 8; ++k) {
        const double c2 = coef(rng), s3 = coef(rng), cx = 0.2 * coef(rng);
        const auto curve = ParamCurve::closed(
            [=](double t) {
                return cx + (1 + c2 * std::cos(2 * t)) * std::cos(t);
            },
            [=](double t) {
                return (1 + s3 * std::sin(3 * t)) * std::sin(t);
            },
            Space::plane, 512);
        for (const PlaneVectorField& X :
             {radial_field(), rotation_field(), constant_field(1.0, -0.4)}) {
            const IndexResult quad = index_quadrature(X, curve);
            const IndexResult unw = index_unwrap(X, curve);
            CHECK(std::fabs(quad.raw - unw.raw) < 1e-6);
            CHECK(quad.snapped == unw.snapped);
            CHECK(quad.snap_residual < 1e-3);
        }
    }
}
