#include "doctest.h"

#include "cavityflow/errors.hpp"
#include "cavityflow/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace cavityflow;
using namespace cavityflow::oracles;
using doctest::Approx;

constexpr double pi = std::numbers::pi;

TEST_CASE("finite differences are exact on constants and quadratics") {
    const Configuration q(Eigen::Vector3d(0.2, -0.4, 1.1));
    const auto constant = fd_gradient_scalar([](const Configuration&) { return 3.0; }, q);
    CHECK(constant.isZero(0.0));
    const auto quad = fd_gradient_scalar(
        [](const Configuration& c) {
            const auto& v = c.vector();
            return v[0] * v[0] + 2.0 * v[1] * v[2];
        },
        q);
    CHECK(quad[0] == Approx(0.4).epsilon(1e-10));
    CHECK(quad[1] == Approx(2.2).epsilon(1e-10));
    CHECK(quad[2] == Approx(-0.8).epsilon(1e-10));
}

TEST_CASE("plain central differences converge at second order") {
    const Configuration q(Eigen::Vector3d(0.3, 0.0, 0.0));
    const auto f = [](const Configuration& c) { return std::sin(c.vector()[0]); };
    std::vector<double> err;
    for (double h : {1e-2, 1e-3}) {
        const auto g = fd_gradient_scalar(f, q, FdOptions{h, false});
        err.push_back(std::abs(g[0] - std::cos(0.3)));
    }
    CHECK(std::log10(err[0] / err[1]) == Approx(2.0).epsilon(0.02));
}

TEST_CASE("matrix-valued gradient layout") {
    const Configuration q(Eigen::Vector3d(1.0, 2.0, 3.0));
    const Tensor3 t = fd_gradient(
        [](const Configuration& c) {
            Eigen::MatrixXd m(2, 1);
            m << c.vector()[0] * c.vector()[1], c.vector()[2];
            return m;
        },
        q);
    CHECK(t(0, 0, 0) == Approx(2.0));
    CHECK(t(0, 0, 1) == Approx(1.0));
    CHECK(t(1, 0, 2) == Approx(1.0));
    CHECK(std::abs(t(1, 0, 0)) < 1e-12);
}

TEST_CASE("annulus closed forms") {
    const AnnulusSeries s(1.0, 2.0);
    CHECK(s.added_mass() == Approx(5.0 * pi / 3.0).epsilon(1e-15));
    CHECK(s.circulation_constant() == Approx(-0.1103178).epsilon(1e-7));
    // A distant wall barely changes the free-space added mass pi a^2.
    CHECK(AnnulusSeries(1.0, 100.0).added_mass() == Approx(pi * 1.0002).epsilon(1e-7));
    // Translation potential satisfies both Neumann conditions.
    const double eps = 1e-6;
    const Vec2 e(std::cos(0.4), std::sin(0.4));
    const double dn_inner = (s.translation_potential((1.0 + eps) * e) - s.translation_potential((1.0 - eps) * e)) / (2 * eps);
    const double dn_outer = (s.translation_potential((2.0 + eps) * e) - s.translation_potential((2.0 - eps) * e)) / (2 * eps);
    CHECK(dn_inner == Approx(e.x()).epsilon(1e-8));
    CHECK(std::abs(dn_outer) < 1e-8);
    CHECK_THROWS_AS(AnnulusSeries(2.0, 1.0), ValidationError);
}

TEST_CASE("vortex regular part cancels the free-space stream on both circles") {
    const AnnulusSeries s(1.0, 2.0);
    const double rho = 1.5;
    for (double t : {0.3, 1.7, 4.0}) {
        const Vec2 e(std::cos(t), std::sin(t));
        const Vec2 xp(rho, 0.0);
        const double outer = s.vortex_regular_part(rho, 2.0 * e).first +
                             std::log((2.0 * e - xp).norm()) / (2 * pi);
        const double inner = s.vortex_regular_part(rho, e).first + std::log((e - xp).norm()) / (2 * pi);
        CHECK(std::abs(outer) < 1e-12);
        CHECK(inner == Approx(s.vortex_disk_constant(rho)).epsilon(1e-12));
    }
}

TEST_CASE("image vortex speeds") {
    CHECK(image_vortex_disk(0.5, 1.0).speed == Approx(0.106103).epsilon(1e-6));
    CHECK(image_vortex_disk(0.5, 2.0).speed == Approx(0.021221).epsilon(1e-5));
    CHECK(image_vortex_disk(0.5, 1.0).period == Approx(2 * pi * 0.5 / 0.1061032953945969).epsilon(1e-12));
    CHECK_THROWS_AS(image_vortex_disk(1.0, 1.0), ValidationError);
}
