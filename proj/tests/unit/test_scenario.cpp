#include "doctest.h"

#include "cavityflow/errors.hpp"
#include "cavityflow/scenario.hpp"

#include <string>

using namespace cavityflow;
using doctest::Approx;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_scenario_text(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

bool mentions(const std::string& message, const std::string& key) {
    return message.find(key) != std::string::npos;
}

}  // namespace

TEST_CASE("a minimal scenario takes the documented defaults") {
    const Scenario s = parse_scenario_text(R"({"schema": 1, "cavity": {"type": "circle", "radius": 2},
        "bodies": [{"shape": {"type": "circle", "radius": 0.3}, "h": [0.5, 0]}]})");
    CHECK(s.bodies.size() == 1);
    CHECK(s.bodies[0].m == 1.0);
    CHECK_FALSE(s.bodies[0].J.has_value());
    CHECK(s.solver.nodes_per_curve == 64);
    CHECK(s.integrator.dt == 1e-3);
    CHECK(s.output.directory == "output");

    const SystemModel model = build_model(s);
    CHECK(model.nodes.bodies == 64);
    CHECK(model.nodes.cavity == 64);
    // Uniform-density disk: J = m a^2 / 2.
    CHECK(model.bodies[0].inertia == Approx(0.045).epsilon(1e-10));
    const SimState init = initial_state(s);
    CHECK(init.q[0] == 0.5);
    CHECK(init.gamma.size() == 1);
}

TEST_CASE("errors name the offending key") {
    CHECK(mentions(error_of(R"({"schema": 1, "bodies": [{"m": -1}]})"), "bodies[0].m"));
    CHECK(mentions(error_of(R"({"schema": 1, "bodies": [{"mass": 1}]})"), "mass"));
    CHECK(mentions(error_of(R"({"bodies": []})"), "schema"));
    CHECK(mentions(error_of(R"({"schema": 2})"), "schema"));
    CHECK(mentions(error_of(R"({"schema": 1, "integrator": {"dt": 0}})"), "integrator.dt"));
    CHECK(mentions(error_of(R"({"schema": 1, "solver": {"nodes_per_curve": 33}})"), "nodes_per_curve"));
    CHECK(mentions(error_of(R"({"schema": 1,
        "bodies": [{"shape": {"type": "circle", "radius": 0.3}, "h": [0.0, 0]},
                   {"shape": {"type": "circle", "radius": 0.3}, "h": [0.5, 0]}]})"),
                   "min_separation"));
    CHECK(mentions(error_of(R"({"schema": 1, "particles": [{"x": [3, 0], "weight": 1}]})"), "particles[0].x"));
    CHECK(mentions(error_of("{not json"), "JSON"));
}

TEST_CASE("missing files raise IoError") {
    CHECK_THROWS_AS(parse_scenario("/nonexistent/scenario.json"), IoError);
}

TEST_CASE("scenarios round-trip through JSON") {
    const Scenario plain = parse_scenario_text(R"({"schema": 1})");
    CHECK(parse_scenario_text(scenario_to_json(plain)) == plain);

    Scenario full;
    full.cavity = Ellipse{2.2, 1.8};
    BodySpec a;
    a.shape = Star{0.3, {0.05}, {0.02}};
    a.m = 2.0;
    a.J = 0.1;
    a.h = {0.4, -0.3};
    a.theta = 0.7;
    a.h_dot = {0.1, 0.2};
    a.theta_dot = -0.5;
    a.gamma = 0.25;
    BodySpec b;
    b.shape = Ellipse{0.3, 0.15};
    b.h = {-0.8, 0.4};
    full.bodies = {a, b};
    full.particles = {ParticleSpec{{0.5, 0.9}, 0.3}};
    full.solver.cavity_nodes = 128;
    full.solver.delta_blob = 0.04;
    full.solver.eps_sep = 1e-3;
    full.solver.christoffel = "finite_difference";
    full.integrator = IntegratorSpec{2e-3, 0.5, 5, true};
    full.output.directory = "runs/a";
    full.output.particles = false;
    full.output.field_grid = FieldGridSpec{{-2, -1.5}, {2, 1.5}, {11, 9}};
    validate_scenario(full);
    const Scenario back = parse_scenario_text(scenario_to_json(full));
    CHECK(back == full);
    CHECK(integrator_settings(back).step_doubling);
}
