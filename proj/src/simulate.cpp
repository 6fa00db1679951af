#include "cavityflow/simulate.hpp"

#include "cavityflow/errors.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <limits>

namespace cavityflow {
namespace {

struct Derivative {
    Eigen::VectorXd dq, dqp;
    std::vector<Vec2> dx;
};

Derivative derivative_of(const DynamicsEvaluation& ev, const SimState& s) {
    return {s.qp, ev.accel, ev.particle_velocity};
}

SimState displaced(const SimState& s, const Derivative& d, double h) {
    SimState out = s;
    out.q = s.q + h * d.dq;
    out.qp = s.qp + h * d.dqp;
    if (!s.particles.empty()) out.particles = advect(s.particles, d.dx, h);
    return out;
}

// Kahan summation: value += increment, with the lost low-order bits kept in carry.
void compensated_add(Eigen::VectorXd& value, Eigen::VectorXd& carry,
                     const Eigen::VectorXd& increment) {
    if (carry.size() != value.size()) carry = Eigen::VectorXd::Zero(value.size());
    for (Eigen::Index i = 0; i < value.size(); ++i) {
        const double y = increment[i] - carry[i];
        const double t = value[i] + y;
        carry[i] = (t - value[i]) - y;
        value[i] = t;
    }
}

DynamicsEvaluation evaluate(const SystemModel& model, const SimState& s) {
    return evaluate_dynamics(model, Configuration(s.q), s.qp, s.gamma, s.particles);
}

double relative_change(double value, double reference) {
    const double diff = std::abs(value - reference);
    return reference != 0.0 ? diff / std::abs(reference) : diff;
}

double state_distance(const SimState& a, const SimState& b) {
    double d = std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.qp - b.qp).cwiseAbs().maxCoeff());
    for (std::size_t p = 0; p < a.particles.size(); ++p)
        d = std::max(d, (a.particles.position(p) - b.particles.position(p)).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::completed:
            return "completed";
        case RunStatus::collision:
            return "collision";
        case RunStatus::accuracy_failure:
            return "accuracy_failure";
        case RunStatus::particle_escape:
            return "particle_escape";
    }
    return "unknown";
}

EnergyTerms energies(const DynamicsEvaluation& ev, const SimState& state) {
    EnergyTerms e{};
    e.kinetic = 0.5 * state.qp.dot(ev.mass * state.qp);
    e.circulation =
        ev.circulation.size() ? 0.5 * state.gamma.dot(ev.circulation * state.gamma) : 0.0;
    e.total = e.kinetic - e.circulation;
    return e;
}

SimState step_rk4(const SystemModel& model, const SimState& state, double dt,
                  const DynamicsEvaluation* start) {
    const Derivative k1 = derivative_of(start ? *start : evaluate(model, state), state);
    const SimState s2 = displaced(state, k1, 0.5 * dt);
    const Derivative k2 = derivative_of(evaluate(model, s2), s2);
    const SimState s3 = displaced(state, k2, 0.5 * dt);
    const Derivative k3 = derivative_of(evaluate(model, s3), s3);
    const SimState s4 = displaced(state, k3, dt);
    const Derivative k4 = derivative_of(evaluate(model, s4), s4);

    SimState out = state;
    compensated_add(out.q, out.q_carry,
                    (dt / 6.0) * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq));
    compensated_add(out.qp, out.qp_carry,
                    (dt / 6.0) * (k1.dqp + 2.0 * k2.dqp + 2.0 * k3.dqp + k4.dqp));
    if (!state.particles.empty()) {
        std::vector<Vec2> v(state.particles.size());
        for (std::size_t p = 0; p < v.size(); ++p)
            v[p] = (k1.dx[p] + 2.0 * k2.dx[p] + 2.0 * k3.dx[p] + k4.dx[p]) / 6.0;
        out.particles = advect(state.particles, v, dt);
    }
    out.t = state.t + dt;
    return out;
}

SimState reversed(const SimState& state) {
    SimState out = state;
    out.qp = -state.qp;
    out.q_carry.resize(0);
    out.qp_carry.resize(0);
    out.gamma = -state.gamma;
    out.particles = state.particles.scaled(-1.0);
    return out;
}

RunResult run_simulation(const SystemModel& model, const SimState& initial,
                         const IntegratorSettings& settings) {
    if (!(settings.dt > 0.0) || !(settings.t_end >= 0.0) || settings.output_every < 1)
        throw ValidationError("integrator needs dt > 0, t_end >= 0 and output_every >= 1");
    const auto clock_start = std::chrono::steady_clock::now();
    RunResult result;
    result.final_state = initial;
    result.max_step_doubling_error =
        settings.step_doubling ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    const long total_steps = std::lround(std::ceil(settings.t_end / settings.dt - 1e-9));

    SimState state = initial;
    EnergyTerms e0{};
    auto record = [&](const DynamicsEvaluation& ev, const SimState& s) {
        const EnergyTerms e = energies(ev, s);
        result.rows.push_back({s.t, s.q, s.qp, e.kinetic, e.circulation, e.total, ev.min_separation});
        if (!s.particles.empty()) result.particle_frames.push_back({s.t, s.particles});
    };

    DynamicsEvaluation ev;
    bool have_eval = false;
    bool last_recorded = false;
    try {
        ev = evaluate(model, state);
        have_eval = true;
        e0 = energies(ev, state);
        result.min_separation = ev.min_separation;
        result.max_added_asymmetry = ev.added.asymmetry;
        record(ev, state);
        last_recorded = true;
        for (long step = 1; step <= total_steps; ++step) {
            const bool output = step % settings.output_every == 0 || step == total_steps;
            SimState next = step_rk4(model, state, settings.dt, &ev);
            next.t = step * settings.dt;
            if (settings.step_doubling && output) {
                const SimState half = step_rk4(model, state, 0.5 * settings.dt, &ev);
                const SimState two = step_rk4(model, half, 0.5 * settings.dt);
                result.max_step_doubling_error = std::max(
                    result.max_step_doubling_error, state_distance(next, two) / 15.0);
            }
            DynamicsEvaluation next_ev = evaluate(model, next);
            ev = std::move(next_ev);
            state = std::move(next);
            last_recorded = false;
            result.steps = step;
            result.final_state = state;
            const EnergyTerms e = energies(ev, state);
            result.energy_drift = std::max(result.energy_drift, relative_change(e.total, e0.total));
            result.kinetic_drift =
                std::max(result.kinetic_drift, relative_change(e.kinetic, e0.kinetic));
            result.min_separation = std::min(result.min_separation, ev.min_separation);
            result.max_added_asymmetry = std::max(result.max_added_asymmetry, ev.added.asymmetry);
            if (ev.clamped_particles > 0) {
                if (result.clamped_states == 0)
                    spdlog::warn("t = {}: {} particle(s) inside the near-boundary band; "
                                 "evaluating at the band edge",
                                 state.t, ev.clamped_particles);
                ++result.clamped_states;
            }
            if (output) {
                record(ev, state);
                last_recorded = true;
            }
        }
    } catch (const CollisionError& err) {
        result.status = RunStatus::collision;
        result.message = err.what();
        result.min_separation = std::min(result.min_separation, err.separation());
    } catch (const EvaluationZoneError& err) {
        result.status = RunStatus::particle_escape;
        result.message = err.what();
    } catch (const AccuracyError& err) {
        result.status = RunStatus::accuracy_failure;
        result.message = err.what();
    } catch (const SolverError& err) {
        result.status = RunStatus::accuracy_failure;
        result.message = err.what();
    }
    if (have_eval && !last_recorded) record(ev, state);
    if (result.status != RunStatus::completed)
        spdlog::warn("run stopped at t = {} ({}): {}", state.t, to_string(result.status),
                     result.message);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    return result;
}

}  // namespace cavityflow
