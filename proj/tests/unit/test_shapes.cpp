#include "doctest.h"

#include "cavityflow/errors.hpp"
#include "cavityflow/scenario.hpp"
#include "cavityflow/shapes.hpp"

#include <numbers>

using namespace cavityflow;
using doctest::Approx;

constexpr double pi = std::numbers::pi;

TEST_CASE("circle area, centroid and curvature") {
    const ClosedCurve c(Circle{0.7});
    CHECK(c.area() == Approx(pi * 0.49).epsilon(1e-13));
    CHECK(c.raw_centroid().norm() < 1e-14);
    CHECK(c.curvature(0.3) == Approx(1.0 / 0.7).epsilon(1e-13));
    CHECK(c.max_radius() == Approx(0.7).epsilon(1e-12));
}

TEST_CASE("ellipse area and extreme curvatures") {
    const ClosedCurve e(Ellipse{2.0, 1.0});
    CHECK(e.area() == Approx(2.0 * pi).epsilon(1e-13));
    CHECK(e.curvature(0.0) == Approx(2.0 / 1.0).epsilon(1e-12));       // a / b^2
    CHECK(e.curvature(pi / 2) == Approx(1.0 / 4.0).epsilon(1e-12));    // b / a^2
}

TEST_CASE("curves are counterclockwise") {
    for (const ShapeDescriptor& d :
         {ShapeDescriptor{Circle{1.0}}, ShapeDescriptor{Ellipse{1.5, 0.5}},
          ShapeDescriptor{Star{1.0, {0.0, 0.1}, {0.0, 0.0, 0.05}}}}) {
        const ClosedCurve c(d);
        const CurvePoint p = c.eval(0.4);
        // cross(x - centroid, x') > 0 on a counterclockwise star-shaped curve
        const Vec2 r = p.x - (c.raw_centroid() - c.offset());
        CHECK(r.x() * p.dx.y() - r.y() * p.dx.x() > 0.0);
    }
}

TEST_CASE("invalid descriptors are rejected") {
    CHECK_THROWS_AS(ClosedCurve(Circle{-1.0}), ValidationError);
    CHECK_THROWS_AS(ClosedCurve(Ellipse{1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(ClosedCurve(Star{1.0, {0.0, 1.5}, {}}), ValidationError);
}

TEST_CASE("make_body recenters off-center stars and validates inertia") {
    const BodyShape b = make_body(Star{1.0, {0.0, 0.2}, {0.0, 0.0, 0.1}}, 1.0, 0.5);
    // After recentering the sampled points average to the centroid at the origin.
    const ClosedCurve& c = b.curve;
    CHECK((c.raw_centroid() - c.offset()).norm() < 1e-12);
    CHECK_THROWS_AS(make_body(Circle{1.0}, -1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_body(Circle{1.0}, 1.0, 0.0), ValidationError);
}

TEST_CASE("uniform density inertia matches closed forms") {
    CHECK(uniform_density_inertia(Circle{0.5}, 2.0) == Approx(0.5 * 2.0 * 0.25).epsilon(1e-12));
    CHECK(uniform_density_inertia(Ellipse{2.0, 1.0}, 3.0) ==
          Approx(3.0 * (4.0 + 1.0) / 4.0).epsilon(1e-12));
    // Off-center star: the parallel-axis shift keeps the value positive and below m * r_max^2.
    const double j = uniform_density_inertia(Star{1.0, {0.0, 0.2}, {}}, 1.0);
    CHECK(j > 0.0);
    CHECK(j < 1.2 * 1.2);
}
