#include "cavityflow/outputs.hpp"

#include "cavityflow/errors.hpp"
#include "cavityflow/flows.hpp"

#include "json.hpp"
#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace cavityflow {
namespace {

void append_number(std::string& out, double v) { fmt::format_to(std::back_inserter(out), "{:.17g}", v); }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// A single point along an axis sits at the lower bound.
double axis(double lo, double hi, int i, int n) {
    return n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
}

}  // namespace

std::vector<FieldSample> sample_velocity_field(const SystemModel& model, const SimState& state,
                                               const FieldGridSpec& grid) {
    const auto disc = model.discretize(Configuration(state.q));
    const bool circulation = state.gamma.size() && state.gamma.cwiseAbs().maxCoeff() > 0.0;
    const FlowBasis basis(disc, state.particles, circulation);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<FieldSample> out;
    const int nx = grid.points[0], ny = grid.points[1];
    out.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        const double y = axis(grid.lower[1], grid.upper[1], j, ny);
        for (int i = 0; i < nx; ++i) {
            const double x = axis(grid.lower[0], grid.upper[0], i, nx);
            FieldSample s{x, y, nan, nan};
            if (disc->classify(Vec2(x, y)) == PointZone::interior) {
                const Vec2 u = total_velocity(basis, state.qp, state.gamma, Vec2(x, y));
                s.u = u.x();
                s.v = u.y();
            }
            out.push_back(s);
        }
    }
    return out;
}

std::string trajectory_csv(const RunResult& result, int body_count) {
    const int n = 3 * body_count;
    std::string out = "t";
    for (int k = 1; k <= n; ++k) out += fmt::format(",q{}", k);
    for (int k = 1; k <= n; ++k) out += fmt::format(",qp{}", k);
    out += ",E_kin,E_circ,E_tot,min_sep\n";
    for (const TrajectoryRow& row : result.rows) {
        append_number(out, row.t);
        for (int k = 0; k < n; ++k) {
            out += ',';
            append_number(out, row.q[k]);
        }
        for (int k = 0; k < n; ++k) {
            out += ',';
            append_number(out, row.qp[k]);
        }
        for (double v : {row.kinetic, row.circulation, row.total, row.min_separation}) {
            out += ',';
            append_number(out, v);
        }
        out += '\n';
    }
    return out;
}

std::string particles_csv(const RunResult& result) {
    std::string out = "t,particle,x,y,weight\n";
    for (const ParticleFrame& frame : result.particle_frames) {
        for (std::size_t p = 0; p < frame.particles.size(); ++p) {
            append_number(out, frame.t);
            out += fmt::format(",{},", p);
            append_number(out, frame.particles.x()[p]);
            out += ',';
            append_number(out, frame.particles.y()[p]);
            out += ',';
            append_number(out, frame.particles.weights()[p]);
            out += '\n';
        }
    }
    return out;
}

std::string field_csv(const std::vector<FieldSample>& samples) {
    std::string out = "x,y,u,v\n";
    for (const FieldSample& s : samples) {
        append_number(out, s.x);
        out += ',';
        append_number(out, s.y);
        out += ',';
        append_number(out, s.u);
        out += ',';
        append_number(out, s.v);
        out += '\n';
    }
    return out;
}

std::string summary_json(const Scenario& scenario, const RunResult& result) {
    using nlohmann::json;
    const SimState& s = result.final_state;
    json particles = json::array();
    for (std::size_t p = 0; p < s.particles.size(); ++p)
        particles.push_back({{"x", {s.particles.x()[p], s.particles.y()[p]}},
                             {"weight", s.particles.weights()[p]}});
    json j;
    j["status"] = to_string(result.status);
    j["message"] = result.message;
    j["steps"] = result.steps;
    j["final_state"] = {{"t", s.t},
                        {"q", vector_json(s.q)},
                        {"qp", vector_json(s.qp)},
                        {"gamma", vector_json(s.gamma)},
                        {"particles", particles}};
    j["drift"] = {{"energy", result.energy_drift}, {"kinetic", result.kinetic_drift}};
    const double sd = result.max_step_doubling_error;
    j["solver"] = {{"min_separation", result.min_separation},
                   {"max_added_inertia_asymmetry", result.max_added_asymmetry},
                   {"max_step_doubling_error", std::isnan(sd) ? json(nullptr) : json(sd)},
                   {"clamped_particle_states", result.clamped_states},
                   {"kernels", kernels::active_kernels().name},
                   {"nodes_per_curve", scenario.solver.nodes_per_curve},
                   {"cavity_nodes",
                    scenario.solver.cavity_nodes.value_or(scenario.solver.nodes_per_curve)}};
    j["wall_seconds"] = result.wall_seconds;
    return j.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const Scenario& scenario, const SystemModel& model,
                                       const SimState& initial, const RunResult& result) {
    namespace fs = std::filesystem;
    const fs::path dir(scenario.output.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const fs::path path = dir / name;
        write_file(path, text);
        written.push_back(path.string());
    };
    emit("trajectory.csv", trajectory_csv(result, model.body_count()));
    emit("summary.json", summary_json(scenario, result));
    if (scenario.output.particles && !result.particle_frames.empty())
        emit("particles.csv", particles_csv(result));
    if (scenario.output.field_grid) {
        emit("field_initial.csv",
             field_csv(sample_velocity_field(model, initial, *scenario.output.field_grid)));
        // A run that stopped early may end in a state where the flow cannot be evaluated.
        try {
            emit("field_final.csv", field_csv(sample_velocity_field(
                                        model, result.final_state, *scenario.output.field_grid)));
        } catch (const Error& e) {
            if (dynamic_cast<const IoError*>(&e)) throw;
        }
    }
    return written;
}

}  // namespace cavityflow
