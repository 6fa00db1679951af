#pragma once

#include "cavityflow/laplace.hpp"
#include "cavityflow/vorticity.hpp"

#include <optional>
#include <vector>

namespace cavityflow {

/// K_k = xi_k . n at every node, one column per body coordinate (M x 3N).
Eigen::MatrixXd rigid_normal_traces(const DomainSnapshot& domain);

/// xi_k at node j, zero off body k / 3.
Vec2 rigid_field_at_node(const DomainSnapshot& domain, int k, int node);

/// Kirchhoff potentials phi_k with d(phi_k)/dn = K_k.
std::vector<HarmonicSolution> kirchhoff_basis(
    const std::shared_ptr<const BoundaryDiscretization>& disc);

struct CirculationBasis {
    std::vector<HarmonicSolution> streams;  // psi_kappa, flux -delta over each body
    Eigen::MatrixXd constants;              // C(q), entry (kappa, nu) = psi_kappa on body nu
};

CirculationBasis circulation_basis(const std::shared_ptr<const BoundaryDiscretization>& disc);

/// psi_omega = (blob field of the particles) + correction. The correction is harmonic
/// and carries the boundary conditions; on the boundary the particles act through the
/// unregularized point-vortex kernel.
struct VorticityStream {
    VortexParticleSet particles;
    HarmonicSolution correction;
    Eigen::VectorXd constants;       // C_{omega, nu}
    Eigen::VectorXd normal_derivative;  // d(psi_omega)/dn at every node
};

VorticityStream vorticity_stream(const std::shared_ptr<const BoundaryDiscretization>& disc,
                                 const VortexParticleSet& particles);

/// Every elementary flow for one configuration. The circulation basis is optional
/// (skipped when all circulations vanish); the vorticity stream is built even for an
/// empty particle set, in which case it is identically zero.
class FlowBasis {
public:
    FlowBasis(std::shared_ptr<const BoundaryDiscretization> disc,
              const VortexParticleSet& particles, bool with_circulation = true);

    const BoundaryDiscretization& discretization() const { return *disc_; }
    std::shared_ptr<const BoundaryDiscretization> discretization_ptr() const { return disc_; }
    const DomainSnapshot& domain() const { return disc_->domain(); }
    int dof() const { return 3 * domain().body_count(); }

    const std::vector<HarmonicSolution>& kirchhoff() const { return kirchhoff_; }
    const Eigen::MatrixXd& normal_traces() const { return normal_traces_; }

    bool has_circulation() const { return circulation_.has_value(); }
    /// Throws std::logic_error when built without the circulation basis.
    const CirculationBasis& circulation() const;
    const VorticityStream& vorticity() const { return vorticity_; }

    /// d(psi_{omega,gamma})/dn at every node, psi_{omega,gamma} = psi_omega + sum gamma_k psi_k.
    Eigen::VectorXd stream_normal_derivative(const Eigen::VectorXd& gamma) const;

    /// Harmonic part of a velocity field: sum qp_k grad phi_k plus the perpendicular gradient
    /// of sum gamma_k psi_k + correction. Evaluated without the zone check.
    void harmonic_velocity(const Eigen::VectorXd& qp, const Eigen::VectorXd& gamma,
                           const double* x, const double* y, std::size_t n, double* ux,
                           double* uy) const;

private:
    std::shared_ptr<const BoundaryDiscretization> disc_;
    std::vector<HarmonicSolution> kirchhoff_;
    Eigen::MatrixXd normal_traces_;
    std::optional<CirculationBasis> circulation_;
    VorticityStream vorticity_;
};

/// u(x) = sum qp_k grad phi_k + perp grad (psi_omega + sum gamma_k psi_k) at an interior point.
Vec2 total_velocity(const FlowBasis& basis, const Eigen::VectorXd& qp,
                    const Eigen::VectorXd& gamma, const Vec2& x);

}  // namespace cavityflow
