#include "cavityflow/scenario.hpp"

#include "cavityflow/errors.hpp"

#include "json.hpp"
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace cavityflow {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ValidationError(key + ": " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void require_object(const json& j, const std::string& key) {
    if (!j.is_object()) fail(key.empty() ? "<root>" : key, "expected an object");
}

void reject_unknown(const json& j, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!names.count(key)) fail(join(prefix, key), "unknown key");
}

double read_number(const json& j, const std::string& key) {
    if (!j.is_number()) fail(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(key, "must be finite");
    return v;
}

int read_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) fail(key, "expected an integer");
    return j.get<int>();
}

bool read_bool(const json& j, const std::string& key) {
    if (!j.is_boolean()) fail(key, "expected true or false");
    return j.get<bool>();
}

std::string read_string(const json& j, const std::string& key) {
    if (!j.is_string()) fail(key, "expected a string");
    return j.get<std::string>();
}

std::array<double, 2> read_pair(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2) fail(key, "expected [x, y]");
    return {read_number(j[0], key + "[0]"), read_number(j[1], key + "[1]")};
}

std::vector<double> read_numbers(const json& j, const std::string& key) {
    if (!j.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(read_number(j[i], fmt::format("{}[{}]", key, i)));
    return out;
}

ShapeDescriptor read_shape(const json& j, const std::string& key) {
    require_object(j, key);
    if (!j.contains("type")) fail(key + ".type", "missing");
    const std::string type = read_string(j["type"], key + ".type");
    if (type == "circle") {
        reject_unknown(j, key, {"type", "radius"});
        Circle c;
        if (j.contains("radius")) c.radius = read_number(j["radius"], key + ".radius");
        return c;
    }
    if (type == "ellipse") {
        reject_unknown(j, key, {"type", "a", "b"});
        Ellipse e;
        if (j.contains("a")) e.a = read_number(j["a"], key + ".a");
        if (j.contains("b")) e.b = read_number(j["b"], key + ".b");
        return e;
    }
    if (type == "star") {
        reject_unknown(j, key, {"type", "mean_radius", "cos", "sin"});
        Star s;
        if (j.contains("mean_radius"))
            s.mean_radius = read_number(j["mean_radius"], key + ".mean_radius");
        if (j.contains("cos")) s.cos_coeffs = read_numbers(j["cos"], key + ".cos");
        if (j.contains("sin")) s.sin_coeffs = read_numbers(j["sin"], key + ".sin");
        return s;
    }
    fail(key + ".type", "expected circle, ellipse or star, got '" + type + "'");
}

json write_shape(const ShapeDescriptor& shape) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return {{"type", "circle"}, {"radius", s.radius}};
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                return {{"type", "ellipse"}, {"a", s.a}, {"b", s.b}};
            } else {
                return {{"type", "star"},
                        {"mean_radius", s.mean_radius},
                        {"cos", s.cos_coeffs},
                        {"sin", s.sin_coeffs}};
            }
        },
        shape);
}

BodySpec read_body(const json& j, const std::string& key) {
    require_object(j, key);
    reject_unknown(j, key, {"shape", "m", "J", "h", "theta", "h_dot", "theta_dot", "gamma"});
    BodySpec b;
    if (j.contains("shape")) b.shape = read_shape(j["shape"], key + ".shape");
    if (j.contains("m")) b.m = read_number(j["m"], key + ".m");
    if (j.contains("J")) b.J = read_number(j["J"], key + ".J");
    if (j.contains("h")) b.h = read_pair(j["h"], key + ".h");
    if (j.contains("theta")) b.theta = read_number(j["theta"], key + ".theta");
    if (j.contains("h_dot")) b.h_dot = read_pair(j["h_dot"], key + ".h_dot");
    if (j.contains("theta_dot")) b.theta_dot = read_number(j["theta_dot"], key + ".theta_dot");
    if (j.contains("gamma")) b.gamma = read_number(j["gamma"], key + ".gamma");
    return b;
}

ParticleSpec read_particle(const json& j, const std::string& key) {
    require_object(j, key);
    reject_unknown(j, key, {"x", "weight"});
    ParticleSpec p;
    if (!j.contains("x")) fail(key + ".x", "missing");
    if (!j.contains("weight")) fail(key + ".weight", "missing");
    p.x = read_pair(j["x"], key + ".x");
    p.weight = read_number(j["weight"], key + ".weight");
    return p;
}

SolverSpec read_solver(const json& j) {
    require_object(j, "solver");
    reject_unknown(j, "solver",
                   {"nodes_per_curve", "cavity_nodes", "delta_blob", "delta_near", "eps_sep",
                    "christoffel"});
    SolverSpec s;
    if (j.contains("nodes_per_curve"))
        s.nodes_per_curve = read_int(j["nodes_per_curve"], "solver.nodes_per_curve");
    if (j.contains("cavity_nodes"))
        s.cavity_nodes = read_int(j["cavity_nodes"], "solver.cavity_nodes");
    if (j.contains("delta_blob"))
        s.delta_blob = read_number(j["delta_blob"], "solver.delta_blob");
    if (j.contains("delta_near"))
        s.delta_near = read_number(j["delta_near"], "solver.delta_near");
    if (j.contains("eps_sep")) s.eps_sep = read_number(j["eps_sep"], "solver.eps_sep");
    if (j.contains("christoffel"))
        s.christoffel = read_string(j["christoffel"], "solver.christoffel");
    return s;
}

IntegratorSpec read_integrator(const json& j) {
    require_object(j, "integrator");
    reject_unknown(j, "integrator", {"dt", "T", "output_every", "step_doubling"});
    IntegratorSpec s;
    if (j.contains("dt")) s.dt = read_number(j["dt"], "integrator.dt");
    if (j.contains("T")) s.T = read_number(j["T"], "integrator.T");
    if (j.contains("output_every"))
        s.output_every = read_int(j["output_every"], "integrator.output_every");
    if (j.contains("step_doubling"))
        s.step_doubling = read_bool(j["step_doubling"], "integrator.step_doubling");
    return s;
}

OutputSpec read_output(const json& j) {
    require_object(j, "output");
    reject_unknown(j, "output", {"directory", "particles", "field_grid"});
    OutputSpec s;
    if (j.contains("directory")) s.directory = read_string(j["directory"], "output.directory");
    if (j.contains("particles")) s.particles = read_bool(j["particles"], "output.particles");
    if (j.contains("field_grid")) {
        const json& g = j["field_grid"];
        require_object(g, "output.field_grid");
        reject_unknown(g, "output.field_grid", {"lower", "upper", "points"});
        FieldGridSpec grid;
        if (g.contains("lower")) grid.lower = read_pair(g["lower"], "output.field_grid.lower");
        if (g.contains("upper")) grid.upper = read_pair(g["upper"], "output.field_grid.upper");
        if (g.contains("points")) {
            const json& p = g["points"];
            if (!p.is_array() || p.size() != 2)
                fail("output.field_grid.points", "expected [nx, ny]");
            grid.points = {read_int(p[0], "output.field_grid.points[0]"),
                           read_int(p[1], "output.field_grid.points[1]")};
        }
        s.field_grid = grid;
    }
    return s;
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) fail(key, fmt::format("must be positive, got {}", v));
}

void require_nodes(int n, const std::string& key) {
    if (n < 32 || n % 2 != 0) fail(key, fmt::format("must be even and at least 32, got {}", n));
}

double cavity_radius(const Scenario& s) {
    try {
        return ClosedCurve(s.cavity).max_radius();
    } catch (const ValidationError& e) {
        fail("cavity", e.what());
    }
}

}  // namespace

double uniform_density_inertia(const ShapeDescriptor& shape, double mass) {
    const ClosedCurve curve(shape);
    // Polar second moment of area from the boundary: (1/3) * loop integral of x^3 dy - y^3 dx,
    // evaluated on the raw curve and moved to the centroid with the parallel-axis rule.
    constexpr int n = 2048;
    double moment = 0.0;
    for (int j = 0; j < n; ++j) {
        const CurvePoint p = curve.eval(2.0 * std::numbers::pi * j / n);
        const Vec2 x = p.x + curve.offset();
        moment += x.x() * x.x() * x.x() * p.dx.y() - x.y() * x.y() * x.y() * p.dx.x();
    }
    moment *= 2.0 * std::numbers::pi / n / 3.0;
    const double area = curve.area();
    moment -= area * curve.raw_centroid().squaredNorm();
    return mass * moment / area;
}

Scenario parse_scenario_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    require_object(j, "");
    reject_unknown(j, "",
                   {"schema", "cavity", "bodies", "particles", "solver", "integrator", "output"});
    if (!j.contains("schema")) fail("schema", "missing (expected 1)");
    Scenario s;
    s.schema = read_int(j["schema"], "schema");
    if (s.schema != 1) fail("schema", fmt::format("unsupported version {}", s.schema));
    if (j.contains("cavity")) s.cavity = read_shape(j["cavity"], "cavity");
    if (j.contains("bodies")) {
        if (!j["bodies"].is_array()) fail("bodies", "expected an array");
        for (std::size_t i = 0; i < j["bodies"].size(); ++i)
            s.bodies.push_back(read_body(j["bodies"][i], fmt::format("bodies[{}]", i)));
    }
    if (j.contains("particles")) {
        if (!j["particles"].is_array()) fail("particles", "expected an array");
        for (std::size_t i = 0; i < j["particles"].size(); ++i)
            s.particles.push_back(
                read_particle(j["particles"][i], fmt::format("particles[{}]", i)));
    }
    if (j.contains("solver")) s.solver = read_solver(j["solver"]);
    if (j.contains("integrator")) s.integrator = read_integrator(j["integrator"]);
    if (j.contains("output")) s.output = read_output(j["output"]);
    validate_scenario(s);
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["schema"] = s.schema;
    j["cavity"] = write_shape(s.cavity);
    j["bodies"] = json::array();
    for (const BodySpec& b : s.bodies) {
        json jb{{"shape", write_shape(b.shape)},
                {"m", b.m},
                {"h", b.h},
                {"theta", b.theta},
                {"h_dot", b.h_dot},
                {"theta_dot", b.theta_dot},
                {"gamma", b.gamma}};
        if (b.J) jb["J"] = *b.J;
        j["bodies"].push_back(jb);
    }
    j["particles"] = json::array();
    for (const ParticleSpec& p : s.particles)
        j["particles"].push_back({{"x", p.x}, {"weight", p.weight}});
    json solver{{"nodes_per_curve", s.solver.nodes_per_curve},
                {"delta_near", s.solver.delta_near},
                {"christoffel", s.solver.christoffel}};
    if (s.solver.cavity_nodes) solver["cavity_nodes"] = *s.solver.cavity_nodes;
    if (s.solver.delta_blob) solver["delta_blob"] = *s.solver.delta_blob;
    if (s.solver.eps_sep) solver["eps_sep"] = *s.solver.eps_sep;
    j["solver"] = solver;
    j["integrator"] = {{"dt", s.integrator.dt},
                       {"T", s.integrator.T},
                       {"output_every", s.integrator.output_every},
                       {"step_doubling", s.integrator.step_doubling}};
    json output{{"directory", s.output.directory}, {"particles", s.output.particles}};
    if (s.output.field_grid) {
        const FieldGridSpec& g = *s.output.field_grid;
        output["field_grid"] = {{"lower", g.lower}, {"upper", g.upper}, {"points", g.points}};
    }
    j["output"] = output;
    return j.dump(2) + "\n";
}

void validate_scenario(const Scenario& s) {
    if (s.schema != 1) fail("schema", fmt::format("unsupported version {}", s.schema));
    cavity_radius(s);
    for (std::size_t i = 0; i < s.bodies.size(); ++i) {
        const BodySpec& b = s.bodies[i];
        const std::string key = fmt::format("bodies[{}]", i);
        require_positive(b.m, key + ".m");
        if (b.J) require_positive(*b.J, key + ".J");
        try {
            ClosedCurve curve(b.shape);
        } catch (const ValidationError& e) {
            fail(key + ".shape", e.what());
        }
    }
    require_nodes(s.solver.nodes_per_curve, "solver.nodes_per_curve");
    if (s.solver.cavity_nodes) require_nodes(*s.solver.cavity_nodes, "solver.cavity_nodes");
    if (s.solver.delta_blob) require_positive(*s.solver.delta_blob, "solver.delta_blob");
    require_positive(s.solver.delta_near, "solver.delta_near");
    if (s.solver.eps_sep) require_positive(*s.solver.eps_sep, "solver.eps_sep");
    if (s.solver.christoffel != "boundary" && s.solver.christoffel != "finite_difference")
        fail("solver.christoffel", "expected boundary or finite_difference, got '" +
                                       s.solver.christoffel + "'");
    require_positive(s.integrator.dt, "integrator.dt");
    require_positive(s.integrator.T, "integrator.T");
    if (s.integrator.output_every < 1) fail("integrator.output_every", "must be at least 1");
    if (s.output.directory.empty()) fail("output.directory", "must not be empty");
    if (s.output.field_grid) {
        const FieldGridSpec& g = *s.output.field_grid;
        for (int d = 0; d < 2; ++d) {
            if (!(g.upper[d] > g.lower[d]))
                fail("output.field_grid.upper", "must exceed lower in both coordinates");
            if (g.points[d] < 2) fail("output.field_grid.points", "need at least 2 per axis");
        }
    }

    const SystemModel model = build_model(s);
    const Configuration q(initial_state(s).q);
    if (!s.bodies.empty()) {
        const double sep = min_separation(model.bodies, model.cavity, q);
        if (!(sep > model.separation_margin))
            fail("min_separation", fmt::format("initial separation {:.6g} is not above eps_sep {:.6g}",
                                               sep, model.separation_margin));
    }
    if (!s.particles.empty()) {
        const auto disc = model.discretize(q);
        for (std::size_t p = 0; p < s.particles.size(); ++p) {
            const Vec2 x(s.particles[p].x[0], s.particles[p].x[1]);
            const PointZone zone = disc->classify(x);
            if (zone == PointZone::outside)
                fail(fmt::format("particles[{}].x", p), "lies outside the fluid");
            if (zone == PointZone::near_boundary)
                fail(fmt::format("particles[{}].x", p),
                     "lies inside the near-boundary band (see solver.delta_near)");
        }
    }
}

SystemModel build_model(const Scenario& s) {
    std::vector<BodyShape> bodies;
    for (std::size_t i = 0; i < s.bodies.size(); ++i) {
        const BodySpec& b = s.bodies[i];
        const double J = b.J ? *b.J : uniform_density_inertia(b.shape, b.m);
        try {
            bodies.push_back(make_body(b.shape, b.m, J));
        } catch (const ValidationError& e) {
            fail(fmt::format("bodies[{}]", i), e.what());
        }
    }
    SystemModel model{std::move(bodies), make_cavity(s.cavity),
                      NodeCounts{s.solver.nodes_per_curve,
                                 s.solver.cavity_nodes.value_or(s.solver.nodes_per_curve)}};
    model.near_spacings = s.solver.delta_near;
    model.separation_margin = s.solver.eps_sep.value_or(2e-3 * cavity_radius(s));
    model.christoffel = s.solver.christoffel == "finite_difference"
                            ? ChristoffelBackend::finite_difference
                            : ChristoffelBackend::boundary;
    return model;
}

SimState initial_state(const Scenario& s) {
    const int n = static_cast<int>(s.bodies.size());
    SimState state;
    state.q.resize(3 * n);
    state.qp.resize(3 * n);
    state.gamma.resize(n);
    for (int b = 0; b < n; ++b) {
        const BodySpec& body = s.bodies[b];
        state.q.segment<3>(3 * b) << body.h[0], body.h[1], body.theta;
        state.qp.segment<3>(3 * b) << body.h_dot[0], body.h_dot[1], body.theta_dot;
        state.gamma[b] = body.gamma;
    }
    std::vector<double> x, y, w;
    for (const ParticleSpec& p : s.particles) {
        x.push_back(p.x[0]);
        y.push_back(p.x[1]);
        w.push_back(p.weight);
    }
    const double blob = s.solver.delta_blob.value_or(0.05 * cavity_radius(s));
    state.particles = VortexParticleSet(std::move(x), std::move(y), std::move(w), blob);
    return state;
}

IntegratorSettings integrator_settings(const Scenario& s) {
    return {s.integrator.dt, s.integrator.T, s.integrator.output_every,
            s.integrator.step_doubling};
}

}  // namespace cavityflow
