#include "doctest.h"

#include "cavityflow/dynamics.hpp"
#include "cavityflow/flows.hpp"
#include "cavityflow/oracles.hpp"

using namespace cavityflow;
using doctest::Approx;

namespace {

std::shared_ptr<const BoundaryDiscretization> annulus(int n) {
    static const std::vector<BodyShape> bodies{make_body(Circle{1.0}, 1.0, 0.5)};
    static const CavityShape cavity = make_cavity(Circle{2.0});
    return BoundaryDiscretization::create(
        assemble_domain(bodies, cavity, Configuration(Eigen::Vector3d::Zero()), NodeCounts{n, n}));
}

VortexParticleSet single(double x, double y, double w, double blob) {
    return VortexParticleSet({x}, {y}, {w}, blob);
}

}  // namespace

TEST_CASE("Kirchhoff potentials carry the rigid normal velocity") {
    const auto disc = annulus(96);
    const auto phis = kirchhoff_basis(disc);
    const Eigen::MatrixXd k = rigid_normal_traces(disc->domain());
    REQUIRE(phis.size() == 3);
    for (int c = 0; c < 3; ++c) CHECK((phis[c].normal_derivative() - k.col(c)).norm() < 1e-14);
    // A disk rotating about its center moves no fluid.
    CHECK(k.col(2).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(phis[2].trace().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("circulation basis has unit circulation and symmetric constants") {
    const std::vector<BodyShape> bodies{make_body(Ellipse{0.4, 0.2}, 1.0, 0.05),
                                        make_body(Circle{0.3}, 1.0, 0.045)};
    const auto disc = BoundaryDiscretization::create(assemble_domain(
        bodies, make_cavity(Circle{2.0}),
        Configuration((Eigen::VectorXd(6) << -0.7, 0.2, 0.4, 0.6, -0.3, 0.0).finished()),
        NodeCounts{64, 128}));
    const CirculationBasis cb = circulation_basis(disc);
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
            CHECK(disc->integrate(cb.streams[b].normal_derivative(), c + 1) ==
                  Approx(b == c ? -1.0 : 0.0).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(cb.constants(0, 1) - cb.constants(1, 0)) < 1e-12);
}

TEST_CASE("vortex stream matches the annulus series") {
    const auto disc = annulus(128);
    const oracles::AnnulusSeries series(1.0, 2.0);
    const double rho = 1.5;
    const VorticityStream vs = vorticity_stream(disc, single(rho, 0.0, 1.0, 1e-4));
    CHECK(vs.constants[0] == Approx(series.vortex_disk_constant(rho)).epsilon(1e-10));
    const Vec2 x(-0.3, 1.4);
    const auto [regular, regular_grad] = series.vortex_regular_part(rho, x);
    const FieldValue c = vs.correction.eval(x);
    CHECK(c.value == Approx(regular).epsilon(1e-9));
    CHECK((c.gradient - regular_grad).norm() < 1e-9);
}

TEST_CASE("a vortex in a disk cavity moves with the image-vortex speed") {
    const auto disc = BoundaryDiscretization::create(assemble_domain(
        {}, make_cavity(Circle{1.0}), Configuration(Eigen::VectorXd(0)), NodeCounts{128, 128}));
    const VortexParticleSet p = single(0.5, 0.0, 1.0, 0.05);
    const FlowBasis basis(disc, p, false);
    const auto v = particle_velocity(basis, Eigen::VectorXd(0), Eigen::VectorXd(0), p);
    const oracles::ImageVortex exact = oracles::image_vortex_disk(0.5, 1.0);
    CHECK(v[0].x() == Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(v[0].y() == Approx(exact.speed).epsilon(1e-11));
}

TEST_CASE("stream normal derivative skips the circulation basis when gamma is zero") {
    const auto disc = annulus(64);
    const FlowBasis basis(disc, VortexParticleSet{}, false);
    CHECK_FALSE(basis.has_circulation());
    CHECK(basis.stream_normal_derivative(Eigen::VectorXd::Zero(1)).isZero(0.0));
    CHECK_THROWS_AS(basis.circulation(), std::logic_error);
}
