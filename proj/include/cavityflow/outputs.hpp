#pragma once

#include "cavityflow/scenario.hpp"

#include <string>
#include <vector>

namespace cavityflow {

struct FieldSample {
    double x, y;
    // NaN outside the fluid and inside the near-boundary band.
    double u, v;
};

/// Fluid velocity on a regular grid at one state, row by row in y then x.
std::vector<FieldSample> sample_velocity_field(const SystemModel& model, const SimState& state,
                                               const FieldGridSpec& grid);

/// Header t, q1..q3N, qp1..qp3N, E_kin, E_circ, E_tot, min_sep; values with 17 significant
/// digits.
std::string trajectory_csv(const RunResult& result, int body_count);
std::string particles_csv(const RunResult& result);
std::string summary_json(const Scenario& scenario, const RunResult& result);
std::string field_csv(const std::vector<FieldSample>& samples);

/// Writes trajectory.csv, summary.json, particles.csv (when enabled and particles exist)
/// and field_initial.csv / field_final.csv (when a grid is configured) into
/// scenario.output.directory, creating it if needed. Returns the written paths.
/// Throws IoError naming the path on failure.
std::vector<std::string> write_outputs(const Scenario& scenario, const SystemModel& model,
                                       const SimState& initial, const RunResult& result);

}  // namespace cavityflow
