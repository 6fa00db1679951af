#pragma once

#include "cavityflow/simulate.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cavityflow {

struct BodySpec {
    ShapeDescriptor shape = Circle{0.25};
    double m = 1.0;
    // Unset means uniform density: m times the polar second moment of area per unit area.
    std::optional<double> J;
    std::array<double, 2> h{0.0, 0.0};
    double theta = 0.0;
    std::array<double, 2> h_dot{0.0, 0.0};
    double theta_dot = 0.0;
    double gamma = 0.0;
    bool operator==(const BodySpec&) const = default;
};

struct ParticleSpec {
    std::array<double, 2> x{0.0, 0.0};
    double weight = 0.0;
    bool operator==(const ParticleSpec&) const = default;
};

struct SolverSpec {
    int nodes_per_curve = 64;
    // Node count on the cavity wall; unset means nodes_per_curve.
    std::optional<int> cavity_nodes;
    // Blob core radius; unset means 0.05 times the cavity's largest radius.
    std::optional<double> delta_blob;
    // Width of the near-boundary exclusion band in node spacings.
    double delta_near = 5.0;
    // Collision margin; unset means 1e-3 times the cavity diameter.
    std::optional<double> eps_sep;
    std::string christoffel = "boundary";  // or "finite_difference"
    bool operator==(const SolverSpec&) const = default;
};

struct IntegratorSpec {
    double dt = 1e-3;
    double T = 1.0;
    int output_every = 10;
    bool step_doubling = false;
    bool operator==(const IntegratorSpec&) const = default;
};

// Velocity samples on a regular grid, written at the start and end of a run.
struct FieldGridSpec {
    std::array<double, 2> lower{-1.0, -1.0};
    std::array<double, 2> upper{1.0, 1.0};
    std::array<int, 2> points{21, 21};
    bool operator==(const FieldGridSpec&) const = default;
};

struct OutputSpec {
    std::string directory = "output";
    bool particles = true;
    std::optional<FieldGridSpec> field_grid;
    bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
    int schema = 1;
    ShapeDescriptor cavity = Circle{1.0};
    std::vector<BodySpec> bodies;
    std::vector<ParticleSpec> particles;
    SolverSpec solver;
    IntegratorSpec integrator;
    OutputSpec output;
    bool operator==(const Scenario&) const = default;
};

/// Parses and validates a scenario document. Unknown keys are rejected; every
/// ValidationError names the offending key.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::string& path);

/// JSON text for the scenario, with unset optional fields omitted.
std::string scenario_to_json(const Scenario& scenario);

/// Checks values and the initial state (admissible q, particles inside the fluid).
void validate_scenario(const Scenario& scenario);

double uniform_density_inertia(const ShapeDescriptor& shape, double mass);

SystemModel build_model(const Scenario& scenario);
SimState initial_state(const Scenario& scenario);
IntegratorSettings integrator_settings(const Scenario& scenario);

}  // namespace cavityflow
