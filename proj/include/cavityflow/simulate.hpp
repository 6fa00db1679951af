#pragma once

#include "cavityflow/dynamics.hpp"

#include <functional>
#include <string>

namespace cavityflow {

struct SimState {
    double t = 0.0;
    Eigen::VectorXd q, qp;
    VortexParticleSet particles;
    Eigen::VectorXd gamma;  // frozen circulations
    // Compensated-summation carries for q and q' so that long runs do not accumulate
    // one rounding error per step. Empty means zero.
    Eigen::VectorXd q_carry, qp_carry;
};

enum class RunStatus { completed, collision, accuracy_failure, particle_escape };

const char* to_string(RunStatus status);

struct IntegratorSettings {
    double dt = 1e-3;
    double t_end = 1.0;
    int output_every = 1;
    // Compare one step with two half steps at every output row (costs three extra steps).
    bool step_doubling = false;
};

struct TrajectoryRow {
    double t;
    Eigen::VectorXd q, qp;
    double kinetic, circulation, total, min_separation;
};

struct ParticleFrame {
    double t;
    VortexParticleSet particles;
};

struct RunResult {
    RunStatus status = RunStatus::completed;
    std::string message;
    std::vector<TrajectoryRow> rows;
    std::vector<ParticleFrame> particle_frames;
    SimState final_state;
    long steps = 0;
    // max over accepted states of |E(t) - E(0)| / |E(0)| (absolute when E(0) == 0)
    double energy_drift = 0.0;    // E_tot = E_kin - E_circ
    double kinetic_drift = 0.0;
    double min_separation = 0.0;  // infimum over accepted states
    double max_added_asymmetry = 0.0;
    double max_step_doubling_error = 0.0;  // NaN when not requested
    // Accepted states at which some particle sat in the near-boundary band.
    long clamped_states = 0;
    double wall_seconds = 0.0;
};

struct EnergyTerms {
    double kinetic, circulation, total;
};

EnergyTerms energies(const DynamicsEvaluation& ev, const SimState& state);

/// Classical RK4 on (q, q', particle positions); every stage reassembles the fluid domain.
/// `start` may carry the evaluation at `state` to save one assembly.
SimState step_rk4(const SystemModel& model, const SimState& state, double dt,
                  const DynamicsEvaluation* start = nullptr);

/// Fixed-step integration to t_end. Collisions, accuracy failures and particles leaving
/// the fluid end the run early with the corresponding status; the rows up to that point
/// are kept.
RunResult run_simulation(const SystemModel& model, const SimState& initial,
                         const IntegratorSettings& settings);

/// Reverses the motion: q' -> -q', gamma -> -gamma, particle weights -> -weights.
SimState reversed(const SimState& state);

}  // namespace cavityflow
