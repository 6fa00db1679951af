#include "doctest.h"

#include "cavityflow/simulate.hpp"

#include <cmath>

using namespace cavityflow;
using doctest::Approx;

namespace {

SystemModel disk_model() {
    return SystemModel{{make_body(Circle{0.25}, 1.0, 0.03125)}, make_cavity(Circle{1.0}), NodeCounts{32, 64}};
}

SimState disk_state(Eigen::Vector3d q, Eigen::Vector3d qp, double gamma = 0.0) {
    SimState s;
    s.q = q;
    s.qp = qp;
    s.gamma = Eigen::VectorXd::Constant(1, gamma);
    return s;
}

}  // namespace

TEST_CASE("a centered body at rest stays at rest") {
    const RunResult r = run_simulation(disk_model(), disk_state(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()),
                                       IntegratorSettings{0.01, 0.1, 1, false});
    CHECK(r.status == RunStatus::completed);
    CHECK(r.steps == 10);
    CHECK(r.rows.size() == 11);
    CHECK(r.final_state.t == Approx(0.1).epsilon(1e-14));
    CHECK(r.final_state.q.isZero(0.0));
    CHECK(r.final_state.qp.isZero(0.0));
    CHECK(r.energy_drift == 0.0);
}

TEST_CASE("a body driven into the wall ends the run with a collision") {
    SystemModel model = disk_model();
    model.separation_margin = 0.05;
    const RunResult r = run_simulation(model,
                                       disk_state(Eigen::Vector3d(0.5, 0.0, 0.0), Eigen::Vector3d(2.0, 0.0, 0.0)),
                                       IntegratorSettings{0.002, 1.0, 1, false});
    CHECK(r.status == RunStatus::collision);
    CHECK(r.final_state.t < 1.0);
    CHECK(!r.rows.empty());
    CHECK(r.min_separation > 0.0);
    CHECK(std::string(to_string(r.status)) == "collision");
}

TEST_CASE("step doubling reports a small local error") {
    const RunResult r = run_simulation(disk_model(),
                                       disk_state(Eigen::Vector3d(0.2, -0.1, 0.0), Eigen::Vector3d(0.3, 0.2, 1.0), 0.5),
                                       IntegratorSettings{0.01, 0.05, 1, true});
    REQUIRE(r.status == RunStatus::completed);
    CHECK(std::isfinite(r.max_step_doubling_error));
    CHECK(r.max_step_doubling_error < 1e-8);
    const RunResult plain = run_simulation(disk_model(),
                                           disk_state(Eigen::Vector3d(0.2, -0.1, 0.0), Eigen::Vector3d(0.3, 0.2, 1.0), 0.5),
                                           IntegratorSettings{0.01, 0.05, 1, false});
    CHECK(std::isnan(plain.max_step_doubling_error));
}

TEST_CASE("reversing the motion retraces the trajectory") {
    const SystemModel model = disk_model();
    SimState s = disk_state(Eigen::Vector3d(0.2, -0.1, 0.3), Eigen::Vector3d(0.3, 0.2, 1.0), 0.5);
    s.particles = VortexParticleSet({-0.4}, {0.3}, {0.2}, 0.05);
    const RunResult fwd = run_simulation(model, s, IntegratorSettings{0.01, 0.2, 5, false});
    REQUIRE(fwd.status == RunStatus::completed);
    const RunResult back = run_simulation(model, reversed(fwd.final_state), IntegratorSettings{0.01, 0.2, 5, false});
    REQUIRE(back.status == RunStatus::completed);
    CHECK((back.final_state.q - s.q).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((back.final_state.qp + s.qp).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(back.final_state.particles.x()[0] - s.particles.x()[0]) < 1e-9);
    CHECK(back.final_state.particles.weights()[0] == -0.2);
}

TEST_CASE("runs are bitwise deterministic") {
    const SystemModel model = disk_model();
    const SimState s = disk_state(Eigen::Vector3d(0.2, -0.1, 0.3), Eigen::Vector3d(0.3, 0.2, 1.0), 0.5);
    const RunResult a = run_simulation(model, s, IntegratorSettings{0.01, 0.05, 1, false});
    const RunResult b = run_simulation(model, s, IntegratorSettings{0.01, 0.05, 1, false});
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK((a.rows[i].q.array() == b.rows[i].q.array()).all());
        CHECK((a.rows[i].qp.array() == b.rows[i].qp.array()).all());
        CHECK(a.rows[i].total == b.rows[i].total);
    }
}

TEST_CASE("energy is nearly conserved over a short geodesic run") {
    const RunResult r = run_simulation(disk_model(),
                                       disk_state(Eigen::Vector3d(0.2, -0.1, 0.0), Eigen::Vector3d(0.3, 0.2, 1.0)),
                                       IntegratorSettings{0.005, 0.2, 10, false});
    REQUIRE(r.status == RunStatus::completed);
    CHECK(r.energy_drift < 1e-6);
    CHECK(r.rows.front().kinetic > 0.0);
}
