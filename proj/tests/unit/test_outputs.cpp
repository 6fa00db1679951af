#include "doctest.h"

#include "cavityflow/outputs.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace cavityflow;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

Scenario two_disks() {
    return parse_scenario_text(R"({"schema": 1, "cavity": {"type": "circle", "radius": 2},
        "bodies": [{"shape": {"type": "circle", "radius": 0.3}, "h": [-0.6, 0]},
                   {"shape": {"type": "circle", "radius": 0.3}, "h": [0.6, 0]}],
        "solver": {"nodes_per_curve": 32, "cavity_nodes": 128},
        "integrator": {"dt": 0.01, "T": 0.03, "output_every": 1}})");
}

}  // namespace

TEST_CASE("trajectory rows have 1 + 6N + 4 columns with 17 significant digits") {
    const Scenario s = two_disks();
    const RunResult r = run_simulation(build_model(s), initial_state(s), integrator_settings(s));
    const auto rows = lines(trajectory_csv(r, 2));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "t,q1,q2,q3,q4,q5,q6,qp1,qp2,qp3,qp4,qp5,qp6,E_kin,E_circ,E_tot,min_sep");
    for (const auto& row : rows) CHECK(fields(row).size() == 17);
    // Everything is at rest: only t changes between rows.
    const auto a = fields(rows[1]), b = fields(rows[4]);
    for (std::size_t c = 1; c < a.size(); ++c) CHECK(a[c] == b[c]);
    CHECK(a[1] == "-0.59999999999999998");
    CHECK(b[0] == "0.029999999999999999");
}

TEST_CASE("summary carries status, drift and solver diagnostics") {
    const Scenario s = two_disks();
    const RunResult r = run_simulation(build_model(s), initial_state(s), integrator_settings(s));
    const auto j = nlohmann::json::parse(summary_json(s, r));
    CHECK(j["status"] == "completed");
    CHECK(j["steps"] == 3);
    CHECK(j["final_state"]["q"].size() == 6);
    CHECK(j["drift"]["energy"] == 0.0);
    CHECK(j["solver"]["max_step_doubling_error"].is_null());
    CHECK(j["solver"]["nodes_per_curve"] == 32);
    CHECK(j["solver"]["clamped_particle_states"] == 0);
    CHECK(j["solver"].contains("kernels"));
}

TEST_CASE("velocity field samples are NaN outside the fluid") {
    const Scenario s = two_disks();
    FieldGridSpec grid{{-1.35, 0.0}, {1.35, 0.0}, {5, 1}};
    SimState st = initial_state(s);
    st.qp << 0.1, 0.0, 0.0, 0.0, 0.0, 0.0;
    const auto f = sample_velocity_field(build_model(s), st, grid);
    REQUIRE(f.size() == 5);
    CHECK(f[0].x == -1.35);
    CHECK(std::isfinite(f[0].u));          // fluid between the left disk and the wall
    CHECK(std::isnan(f[1].u));             // center of the left disk
    CHECK(std::isfinite(f[2].u));          // midway between the disks
    CHECK(std::abs(f[2].v) < 1e-12);       // on the symmetry axis
}

TEST_CASE("write_outputs creates the directory and the files") {
    Scenario s = two_disks();
    const auto dir = std::filesystem::temp_directory_path() / "cavityflow_test_outputs";
    std::filesystem::remove_all(dir);
    s.output.directory = (dir / "nested").string();
    const SystemModel model = build_model(s);
    const SimState init = initial_state(s);
    const RunResult r = run_simulation(model, init, integrator_settings(s));
    const auto written = write_outputs(s, model, init, r);
    CHECK(written.size() == 2);
    CHECK(std::filesystem::exists(dir / "nested" / "trajectory.csv"));
    CHECK(std::filesystem::exists(dir / "nested" / "summary.json"));
    std::filesystem::remove_all(dir);
}
