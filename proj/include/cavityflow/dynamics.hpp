#pragma once

#include "cavityflow/flows.hpp"

namespace cavityflow {

enum class ChristoffelBackend { boundary, finite_difference };

/// Everything needed to turn a configuration into a discretized fluid domain.
struct SystemModel {
    std::vector<BodyShape> bodies;
    CavityShape cavity;
    NodeCounts nodes;
    double near_spacings = 5.0;
    double separation_margin = 0.0;
    ChristoffelBackend christoffel = ChristoffelBackend::boundary;
    double fd_step = 1e-4;

    int body_count() const { return static_cast<int>(bodies.size()); }
    std::shared_ptr<const BoundaryDiscretization> discretize(const Configuration& q) const;
};

/// Block diagonal diag(m_1, m_1, J_1, ..., m_N, m_N, J_N).
Eigen::MatrixXd genuine_inertia(const std::vector<BodyShape>& bodies);

struct AddedInertia {
    Eigen::MatrixXd matrix;  // symmetrized
    // ||S - S^T||_inf / ||S||_inf for the one-sided boundary integrals S.
    double asymmetry = 0.0;
};

/// (M^a)_{kl} = boundary integral of phi_l dphi_k/dn. Throws AccuracyError when the two
/// one-sided values disagree by more than 1e-6 relative.
AddedInertia added_inertia(const FlowBasis& basis);

/// dM(i, j, k) = d(M^a)_{ij} / dq_k from the curvature-free boundary formula.
Tensor3 grad_added_inertia(const FlowBasis& basis);

/// Gamma(k, i, j) = (dM(i,k,j) + dM(j,k,i) - dM(i,j,k)) / 2.
Tensor3 christoffel(const Tensor3& dm);

/// <Gamma, p, p>_k = sum_ij Gamma(k, i, j) p_i p_j.
Eigen::VectorXd contract(const Tensor3& gamma, const Eigen::VectorXd& p);

/// dC(mu, nu, k) = dC_{mu nu} / dq_k. Needs the circulation basis.
Tensor3 grad_C(const FlowBasis& basis);

Eigen::VectorXd force_E(const FlowBasis& basis, const Eigen::VectorXd& gamma);
Eigen::MatrixXd force_A(const FlowBasis& basis, const Eigen::VectorXd& gamma);
/// Uses the particles the basis was built with.
Eigen::VectorXd force_D(const FlowBasis& basis, const Eigen::VectorXd& qp,
                        const Eigen::VectorXd& gamma);

struct DynamicsEvaluation {
    Eigen::MatrixXd mass;         // M = M^g + M^a
    AddedInertia added;
    Eigen::MatrixXd circulation;  // C(q); empty when gamma vanishes
    Eigen::VectorXd geodesic;     // <Gamma, q', q'>
    Eigen::VectorXd e, d;
    Eigen::MatrixXd a;
    Eigen::VectorXd force;        // E + A q' + D
    Eigen::VectorXd accel;        // q''
    std::vector<Vec2> particle_velocity;
    int clamped_particles = 0;  // particles evaluated at the near-boundary band edge
    double min_separation = 0.0;
};

/// Assembles the whole right-hand side at one state. Throws CollisionError for
/// inadmissible q, AccuracyError when M is not positive definite or M^a is too
/// asymmetric, EvaluationZoneError when a particle leaves the fluid.
DynamicsEvaluation evaluate_dynamics(const SystemModel& model, const Configuration& q,
                                     const Eigen::VectorXd& qp, const Eigen::VectorXd& gamma,
                                     const VortexParticleSet& particles);

inline Eigen::VectorXd accel(const SystemModel& model, const Configuration& q,
                             const Eigen::VectorXd& qp, const VortexParticleSet& particles,
                             const Eigen::VectorXd& gamma) {
    return evaluate_dynamics(model, q, qp, gamma, particles).accel;
}

}  // namespace cavityflow
