#include "doctest.h"

#include "cavityflow/errors.hpp"
#include "cavityflow/flows.hpp"
#include "cavityflow/laplace.hpp"
#include "cavityflow/oracles.hpp"

#include <numbers>

using namespace cavityflow;
using doctest::Approx;

namespace {

std::shared_ptr<const BoundaryDiscretization> annulus(int n, Vec2 h = Vec2::Zero()) {
    static const std::vector<BodyShape> bodies{make_body(Circle{1.0}, 1.0, 0.5)};
    static const CavityShape cavity = make_cavity(Circle{2.0});
    return BoundaryDiscretization::create(
        assemble_domain(bodies, cavity, Configuration(Eigen::Vector3d(h.x(), h.y(), 0.0)),
                        NodeCounts{n, n}));
}

std::shared_ptr<const BoundaryDiscretization> empty_disk(int n) {
    static const CavityShape cavity = make_cavity(Circle{1.0});
    return BoundaryDiscretization::create(
        assemble_domain({}, cavity, Configuration(Eigen::VectorXd(0)), NodeCounts{n, n}));
}

}  // namespace

TEST_CASE("Neumann solve reproduces the annulus translation potential") {
    const auto disc = annulus(128);
    const oracles::AnnulusSeries series(1.0, 2.0);
    const Eigen::MatrixXd traces = rigid_normal_traces(disc->domain());
    const HarmonicSolution phi = solve_neumann(disc, traces.col(0));
    double err = 0.0;
    for (int j = 0; j < disc->size(); ++j)
        err = std::max(err, std::abs(phi.trace()[j] -
                                     series.translation_potential(disc->domain().node(j))));
    CHECK(err < 1e-12);

    const Vec2 x(0.2, 1.45);
    const FieldValue v = phi.eval(x);
    CHECK(v.value == Approx(series.translation_potential(x)).epsilon(1e-11));
    CHECK((v.gradient - series.translation_gradient(x)).norm() < 1e-10);
}

TEST_CASE("Neumann data with net flux is rejected") {
    const auto disc = annulus(64);
    CHECK_THROWS_AS(solve_neumann(disc, Eigen::VectorXd::Ones(disc->size())), ValidationError);
}

TEST_CASE("Dirichlet solve with a free body constant gives the circulation stream") {
    const auto disc = annulus(128);
    const oracles::AnnulusSeries series(1.0, 2.0);
    const HarmonicSolution psi = solve_dirichlet_with_constants(disc, Eigen::VectorXd::Constant(1, -1.0));
    REQUIRE(psi.constants().size() == 1);
    CHECK(psi.constants()[0] == Approx(series.circulation_constant()).epsilon(1e-12));
    CHECK(disc->integrate(psi.normal_derivative(), 1) == Approx(-1.0).epsilon(1e-12));
    const Vec2 x(-0.9, 1.05);
    CHECK(psi.eval(x).value == Approx(series.circulation_stream(x)).epsilon(1e-11));
}

TEST_CASE("harmonic polynomials are reproduced in a multiply connected domain") {
    // u = x^2 - y^2 + 3xy with exact normal derivative: the Green identity holds to
    // quadrature accuracy, so eval of (u, du/dn) returns u at interior points.
    const auto disc = annulus(128, Vec2(0.3, -0.2));
    const DomainSnapshot& d = disc->domain();
    Eigen::VectorXd u(d.node_count()), du(d.node_count());
    for (int j = 0; j < d.node_count(); ++j) {
        const double x = d.x()[j], y = d.y()[j];
        u[j] = x * x - y * y + 3 * x * y;
        du[j] = Vec2(2 * x + 3 * y, -2 * y + 3 * x).dot(d.normal(j));
    }
    const HarmonicSolution sol(disc, u, du);
    const Vec2 p(-1.0, -0.2);
    const FieldValue v = sol.eval(p);
    CHECK(v.value == Approx(p.x() * p.x() - p.y() * p.y() + 3 * p.x() * p.y()).epsilon(1e-10));
    CHECK(v.gradient.x() == Approx(2 * p.x() + 3 * p.y()).epsilon(1e-9));
    CHECK(v.gradient.y() == Approx(-2 * p.y() + 3 * p.x()).epsilon(1e-9));

    // Boundary gradient from the two traces
    const int j = 5;
    const Vec2 g = sol.boundary_gradient(j);
    CHECK(g.x() == Approx(2 * d.x()[j] + 3 * d.y()[j]).epsilon(1e-9));
}

TEST_CASE("spectral tangential derivative of a trigonometric trace") {
    const auto disc = empty_disk(64);
    const DomainSnapshot& d = disc->domain();
    Eigen::VectorXd f(d.node_count());
    for (int j = 0; j < d.node_count(); ++j) f[j] = std::sin(3 * d.parameter()[j]);
    const Eigen::VectorXd df = disc->tangential_derivative(f, 0);
    // On the unit-circle cavity tau runs clockwise: d/dtau = -d/dt.
    for (int j = 0; j < d.node_count(); ++j)
        CHECK(df[j] == Approx(-3 * std::cos(3 * d.parameter()[j])).epsilon(1e-12));
}

TEST_CASE("evaluation zones") {
    // 128 nodes: the band is 0.245 wide on the disk and 0.49 on the cavity wall.
    const auto disc = annulus(128);
    CHECK(disc->classify(Vec2(1.4, 0.0)) == PointZone::interior);
    CHECK(disc->classify(Vec2(0.0, 0.0)) == PointZone::outside);
    CHECK(disc->classify(Vec2(2.5, 0.0)) == PointZone::outside);
    CHECK(disc->classify(Vec2(1.02, 0.0)) == PointZone::near_boundary);
    CHECK(disc->classify(Vec2(0.0, 1.7)) == PointZone::near_boundary);
    const HarmonicSolution zero(disc, Eigen::VectorXd::Zero(disc->size()),
                                Eigen::VectorXd::Zero(disc->size()));
    CHECK_THROWS_AS(zero.eval(Vec2(0.1, 0.0)), EvaluationZoneError);
    CHECK_THROWS_AS(zero.eval(Vec2(1.02, 0.0)), EvaluationZoneError);

    bool clamped = false;
    const Vec2 e = disc->evaluation_point(Vec2(1.02, 0.0), &clamped);
    CHECK(clamped);
    CHECK(disc->classify(e) == PointZone::interior);
    CHECK_THROWS_AS(disc->evaluation_point(Vec2(0.5, 0.0)), EvaluationZoneError);
}

TEST_CASE("scalar and active kernels give the same discretization") {
    const auto snap = annulus(64)->domain_ptr();
    const auto a = BoundaryDiscretization::create(snap, 5.0, kernels::scalar_kernels());
    const auto b = BoundaryDiscretization::create(snap, 5.0, kernels::active_kernels());
    CHECK((a->single_layer() - b->single_layer()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a->double_layer() - b->double_layer()).cwiseAbs().maxCoeff() < 1e-14);
}
