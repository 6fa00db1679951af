// The AVX2 kernels must reproduce the scalar reference kernels.

#include "doctest.h"

#include "cavityflow/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace cavityflow::kernels;

namespace {

struct Cloud {
    std::vector<double> x, y, nx, ny, w;
};

Cloud make_cloud(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Cloud c;
    for (std::size_t i = 0; i < n; ++i) {
        c.x.push_back(u(rng));
        c.y.push_back(u(rng));
        const double a = 3.2 * u(rng);
        c.nx.push_back(std::cos(a));
        c.ny.push_back(std::sin(a));
        c.w.push_back(0.01 + 0.1 * std::abs(u(rng)));
    }
    return c;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max(scale, std::abs(a[i]));
        err = std::max(err, std::abs(a[i] - b[i]));
    }
    return scale > 0.0 ? err / scale : err;
}

}  // namespace

TEST_CASE("scalar kernels are always available") {
    CHECK(std::string(scalar_kernels().name) == "scalar");
    CHECK(active_kernels().assemble != nullptr);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    const KernelTable* fast = avx2_kernels();
    if (!fast) {
        MESSAGE("AVX2 kernels unavailable on this machine; skipping");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(42);
    // Sizes that leave every possible remainder after the 4-wide loops.
    for (std::size_t nt : {1u, 3u, 4u, 7u, 33u}) {
        for (std::size_t ns : {1u, 2u, 5u, 8u, 67u}) {
            const Cloud t = make_cloud(nt, rng);
            Cloud s = make_cloud(ns, rng);
            // One coincident target/source pair exercises the r == 0 masking.
            s.x[0] = t.x[0];
            s.y[0] = t.y[0];
            const Targets targets{t.x.data(), t.y.data(), nt};
            const BoundarySources src{s.x.data(), s.y.data(), s.nx.data(), s.ny.data(),
                                      s.w.data(), ns};

            std::vector<double> s1(nt * ns), d1(nt * ns), s2(nt * ns), d2(nt * ns);
            ref.assemble(targets, src, 3.0, s1.data(), d1.data(), ns);
            fast->assemble(targets, src, 3.0, s2.data(), d2.data(), ns);
            CHECK(max_rel(s1, s2) < 1e-13);
            CHECK(max_rel(d1, d2) < 1e-13);
            CHECK(s2[0] == 0.0);
            CHECK(d2[0] == 0.0);

            std::vector<double> a(ns), b(ns);
            for (std::size_t j = 0; j < ns; ++j) {
                a[j] = std::sin(1.0 + j);
                b[j] = std::cos(2.0 * j);
            }
            std::vector<double> v1(nt), gx1(nt), gy1(nt), v2(nt), gx2(nt), gy2(nt);
            // Keep evaluation targets away from the sources for the Green representation.
            std::vector<double> tx(t.x), ty(t.y);
            for (auto& v : tx) v += 3.0;
            const Targets far{tx.data(), ty.data(), nt};
            ref.green_eval(far, src, a.data(), b.data(), 3.0, v1.data(), gx1.data(), gy1.data());
            fast->green_eval(far, src, a.data(), b.data(), 3.0, v2.data(), gx2.data(), gy2.data());
            CHECK(max_rel(v1, v2) < 1e-13);
            CHECK(max_rel(gx1, gx2) < 1e-13);
            CHECK(max_rel(gy1, gy2) < 1e-13);

            std::vector<double> ux1(nt), uy1(nt), ux2(nt), uy2(nt);
            ref.blob_velocity(targets, s.x.data(), s.y.data(), s.w.data(), ns, 0.01, ux1.data(),
                              uy1.data());
            fast->blob_velocity(targets, s.x.data(), s.y.data(), s.w.data(), ns, 0.01,
                                ux2.data(), uy2.data());
            CHECK(max_rel(ux1, ux2) < 1e-13);
            CHECK(max_rel(uy1, uy2) < 1e-13);
        }
    }
}

TEST_CASE("blob velocity is the regularized point-vortex field") {
    const double px = 0.0, py = 0.0, pw = 2.0;
    const double tx = 0.5, ty = 0.0;
    double ux = 0.0, uy = 0.0;
    scalar_kernels().blob_velocity({&tx, &ty, 1}, &px, &py, &pw, 1, 0.0, &ux, &uy);
    // w / (2 pi r) counterclockwise
    CHECK(ux == doctest::Approx(0.0));
    CHECK(uy == doctest::Approx(2.0 / (2.0 * M_PI * 0.5)).epsilon(1e-14));
}
