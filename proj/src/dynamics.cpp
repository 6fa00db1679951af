#include "cavityflow/dynamics.hpp"

#include "cavityflow/errors.hpp"
#include "cavityflow/oracles.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace cavityflow {
namespace {

bool is_rotation(int k) { return k % 3 == 2; }

// Per-node boundary gradients of every Kirchhoff potential and every rigid field.
struct NodeFields {
    std::vector<std::vector<Vec2>> grad;  // [k][node]
    std::vector<std::vector<Vec2>> xi;    // [k][node]
};

NodeFields node_fields(const FlowBasis& basis) {
    const DomainSnapshot& d = basis.domain();
    const int m = d.node_count();
    NodeFields f;
    f.grad.assign(basis.dof(), std::vector<Vec2>(m));
    f.xi.assign(basis.dof(), std::vector<Vec2>(m));
    for (int k = 0; k < basis.dof(); ++k) {
        for (int j = 0; j < m; ++j) {
            f.grad[k][j] = basis.kirchhoff()[k].boundary_gradient(j);
            f.xi[k][j] = rigid_field_at_node(d, k, j);
        }
    }
    return f;
}

Eigen::VectorXd force_D_from(const FlowBasis& basis, const std::vector<Vec2>& velocity) {
    const VortexParticleSet& particles = basis.vorticity().particles;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.dof());
    const std::size_t n = particles.size();
    if (n == 0) return out;
    std::vector<double> ex, ey;
    evaluation_points(basis.discretization(), particles, ex, ey);
    std::vector<double> value(n), gx(n), gy(n);
    for (int k = 0; k < basis.dof(); ++k) {
        basis.kirchhoff()[k].eval_unchecked(ex.data(), ey.data(), n, value.data(), gx.data(),
                                            gy.data());
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const Vec2 u_perp = perp(velocity[p]);
            acc += particles.weights()[p] * (u_perp.x() * gx[p] + u_perp.y() * gy[p]);
        }
        out[k] = -acc;
    }
    return out;
}

}  // namespace

std::shared_ptr<const BoundaryDiscretization> SystemModel::discretize(
    const Configuration& q) const {
    return BoundaryDiscretization::create(
        assemble_domain(bodies, cavity, q, nodes, separation_margin), near_spacings);
}

Eigen::MatrixXd genuine_inertia(const std::vector<BodyShape>& bodies) {
    const int n = static_cast<int>(bodies.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int b = 0; b < n; ++b) {
        if (!(bodies[b].mass > 0.0) || !(bodies[b].inertia > 0.0))
            throw ValidationError("body " + std::to_string(b) + ": m and J must be positive");
        out(3 * b, 3 * b) = bodies[b].mass;
        out(3 * b + 1, 3 * b + 1) = bodies[b].mass;
        out(3 * b + 2, 3 * b + 2) = bodies[b].inertia;
    }
    return out;
}

AddedInertia added_inertia(const FlowBasis& basis) {
    const int dof = basis.dof();
    const int m = basis.domain().node_count();
    Eigen::MatrixXd phi(m, dof);
    for (int k = 0; k < dof; ++k) phi.col(k) = basis.kirchhoff()[k].trace();
    const auto w = basis.domain().weight();
    const Eigen::Map<const Eigen::VectorXd> weight(w.data(), m);
    const Eigen::MatrixXd one_sided =
        basis.normal_traces().transpose() * weight.asDiagonal() * phi;
    AddedInertia out;
    out.matrix = 0.5 * (one_sided + one_sided.transpose());
    const double scale = one_sided.size() ? one_sided.cwiseAbs().maxCoeff() : 0.0;
    if (scale > 0.0)
        out.asymmetry = (one_sided - one_sided.transpose()).cwiseAbs().maxCoeff() / scale;
    if (out.asymmetry > 1e-6)
        throw AccuracyError("added inertia asymmetry " + std::to_string(out.asymmetry) +
                            " exceeds 1e-6; increase nodes_per_curve");
    return out;
}

Tensor3 grad_added_inertia(const FlowBasis& basis) {
    const DomainSnapshot& d = basis.domain();
    const int dof = basis.dof();
    const NodeFields f = node_fields(basis);
    const auto w = d.weight();
    Tensor3 out(dof, dof, dof);
    for (int k = 0; k < dof; ++k) {
        const int body = k / 3;
        const CurveBlock& c = d.curve(DomainSnapshot::curve_of_body(body));
        for (int i = 0; i < dof; ++i) {
            for (int j = i; j < dof; ++j) {
                double acc = 0.0;
                for (int p = c.offset; p < c.offset + c.count; ++p) {
                    const Vec2 a = f.xi[i][p] - f.grad[i][p];
                    const Vec2 b = f.xi[j][p] - f.grad[j][p];
                    const double bracket = a.dot(b) - f.xi[i][p].dot(f.xi[j][p]);
                    acc -= w[p] * bracket * basis.normal_traces()(p, k);
                }
                if (!is_rotation(k)) {
                    // Translating a body shifts the rotation field's center.
                    const auto shift_term = [&](int rot, int other) {
                        if (!is_rotation(rot) || rot / 3 != body) return 0.0;
                        const Eigen::VectorXd& phi = basis.kirchhoff()[other].trace();
                        double s = 0.0;
                        for (int p = c.offset; p < c.offset + c.count; ++p)
                            s += w[p] * phi[p] * f.xi[k][p].dot(d.tangent(p));
                        return s;
                    };
                    acc -= shift_term(i, j) + shift_term(j, i);
                }
                out(i, j, k) = acc;
                out(j, i, k) = acc;
            }
        }
    }
    return out;
}

Tensor3 christoffel(const Tensor3& dm) {
    const int n = dm.dim0();
    Tensor3 out(n, n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(k, i, j) = 0.5 * (dm(i, k, j) + dm(j, k, i) - dm(i, j, k));
    return out;
}

Eigen::VectorXd contract(const Tensor3& gamma, const Eigen::VectorXd& p) {
    const int n = gamma.dim0();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += gamma(k, i, j) * p[i] * p[j];
        out[k] = acc;
    }
    return out;
}

Tensor3 grad_C(const FlowBasis& basis) {
    const DomainSnapshot& d = basis.domain();
    const int nb = d.body_count();
    const int dof = basis.dof();
    const auto& streams = basis.circulation().streams;
    const auto w = d.weight();
    Tensor3 out(nb, nb, dof);
    for (int k = 0; k < dof; ++k) {
        const CurveBlock& c = d.curve(DomainSnapshot::curve_of_body(k / 3));
        for (int mu = 0; mu < nb; ++mu) {
            for (int nu = mu; nu < nb; ++nu) {
                double acc = 0.0;
                for (int p = c.offset; p < c.offset + c.count; ++p)
                    acc -= w[p] * streams[mu].normal_derivative()[p] *
                           streams[nu].normal_derivative()[p] * basis.normal_traces()(p, k);
                out(mu, nu, k) = acc;
                out(nu, mu, k) = acc;
            }
        }
    }
    return out;
}

Eigen::VectorXd force_E(const FlowBasis& basis, const Eigen::VectorXd& gamma) {
    const DomainSnapshot& d = basis.domain();
    const Eigen::VectorXd sigma = basis.stream_normal_derivative(gamma);
    const auto w = d.weight();
    Eigen::VectorXd out(basis.dof());
    for (int k = 0; k < basis.dof(); ++k) {
        const CurveBlock& c = d.curve(DomainSnapshot::curve_of_body(k / 3));
        double acc = 0.0;
        for (int p = c.offset; p < c.offset + c.count; ++p)
            acc += w[p] * sigma[p] * sigma[p] * basis.normal_traces()(p, k);
        out[k] = -0.5 * acc;
    }
    return out;
}

Eigen::MatrixXd force_A(const FlowBasis& basis, const Eigen::VectorXd& gamma) {
    const DomainSnapshot& d = basis.domain();
    const int dof = basis.dof();
    const int m = d.node_count();
    const Eigen::VectorXd sigma = basis.stream_normal_derivative(gamma);
    const auto w = d.weight();
    Eigen::MatrixXd weighted_k(m, dof), dtau(m, dof);
    for (int k = 0; k < dof; ++k) {
        dtau.col(k) = basis.kirchhoff()[k].tangential_derivative();
        for (int p = 0; p < m; ++p) weighted_k(p, k) = w[p] * sigma[p] * basis.normal_traces()(p, k);
    }
    const Eigen::MatrixXd half = weighted_k.transpose() * dtau;
    return half - half.transpose();
}

Eigen::VectorXd force_D(const FlowBasis& basis, const Eigen::VectorXd& qp,
                        const Eigen::VectorXd& gamma) {
    const VortexParticleSet& particles = basis.vorticity().particles;
    if (particles.empty()) return Eigen::VectorXd::Zero(basis.dof());
    return force_D_from(basis, particle_velocity(basis, qp, gamma, particles));
}

DynamicsEvaluation evaluate_dynamics(const SystemModel& model, const Configuration& q,
                                     const Eigen::VectorXd& qp, const Eigen::VectorXd& gamma,
                                     const VortexParticleSet& particles) {
    if (q.bodies() != model.body_count() || qp.size() != q.size() ||
        gamma.size() != model.body_count())
        throw ValidationError("state dimensions do not match the body count");
    const auto disc = model.discretize(q);
    const bool circulating = !gamma.isZero(0.0);
    const FlowBasis basis(disc, particles, circulating);

    DynamicsEvaluation ev;
    ev.min_separation = disc->domain().min_separation();
    ev.added = added_inertia(basis);
    ev.mass = genuine_inertia(model.bodies) + ev.added.matrix;

    Tensor3 dm;
    if (model.christoffel == ChristoffelBackend::boundary) {
        dm = grad_added_inertia(basis);
    } else {
        dm = oracles::fd_gradient(
            [&](const Configuration& c) {
                return added_inertia(FlowBasis(model.discretize(c), {}, false)).matrix;
            },
            q, {model.fd_step, true});
    }
    ev.geodesic = contract(christoffel(dm), qp);
    if (circulating) ev.circulation = basis.circulation().constants;

    ev.e = force_E(basis, gamma);
    ev.a = force_A(basis, gamma);
    if (!particles.empty()) {
        ev.particle_velocity =
            particle_velocity(basis, qp, gamma, particles, &ev.clamped_particles);
        ev.d = force_D_from(basis, ev.particle_velocity);
    } else {
        ev.d = Eigen::VectorXd::Zero(q.size());
    }
    ev.force = ev.e + ev.a * qp + ev.d;

    const Eigen::LLT<Eigen::MatrixXd> llt(ev.mass);
    if (llt.info() != Eigen::Success)
        throw AccuracyError("mass matrix is not positive definite");
    ev.accel = llt.solve(ev.force - ev.geodesic);
    return ev;
}

}  // namespace cavityflow
