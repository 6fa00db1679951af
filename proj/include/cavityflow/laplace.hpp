#pragma once

#include "cavityflow/geometry.hpp"
#include "cavityflow/kernels.hpp"

#include <Eigen/LU>

#include <memory>
#include <mutex>

namespace cavityflow {

struct FieldValue {
    double value = 0.0;
    Vec2 gradient = Vec2::Zero();
};

enum class PointZone { interior, near_boundary, outside };

/// Nystrom discretization of the Laplace layer operators on one DomainSnapshot.
///
/// Unknowns are boundary traces u and normal derivatives sigma = du/dn at the nodes,
/// tied together by the boundary Green identity (1/2) u - K u + S sigma = 0.
/// S carries log-singular product quadrature on each curve's own block, K carries the
/// curvature limit on its diagonal. Factorizations are built on first use and shared.
class BoundaryDiscretization {
public:
    static std::shared_ptr<const BoundaryDiscretization> create(
        std::shared_ptr<const DomainSnapshot> domain, double near_spacings = 5.0,
        const kernels::KernelTable& table = kernels::active_kernels());

    const DomainSnapshot& domain() const { return *domain_; }
    std::shared_ptr<const DomainSnapshot> domain_ptr() const { return domain_; }
    const kernels::KernelTable& kernel_table() const { return *table_; }
    int size() const { return domain_->node_count(); }

    const Eigen::MatrixXd& single_layer() const { return single_; }
    const Eigen::MatrixXd& double_layer() const { return double_; }

    /// LU of (1/2) I - K + P, where P u is the boundary mean of u.
    const Eigen::PartialPivLU<Eigen::MatrixXd>& neumann_factor() const;
    /// LU of the densities-plus-constants system; see solve_dirichlet_with_constants.
    const Eigen::PartialPivLU<Eigen::MatrixXd>& dirichlet_factor() const;

    /// d/dtau of nodal values on one curve (spectral in the curve parameter).
    Eigen::VectorXd tangential_derivative(const Eigen::Ref<const Eigen::VectorXd>& values,
                                          int curve) const;

    /// Integral of nodal values over one curve, or over the whole boundary for curve < 0.
    double integrate(const Eigen::Ref<const Eigen::VectorXd>& values, int curve = -1) const;

    double near_spacings() const { return near_spacings_; }
    /// Distance from x to the nearest node and the nearest node's index.
    std::pair<double, int> nearest_node(const Vec2& x) const;
    PointZone classify(const Vec2& x) const;
    /// Throws EvaluationZoneError unless classify(x) is interior.
    void require_interior(const Vec2& x) const;
    /// x itself when interior. A point inside the near-boundary band is moved along the
    /// nearest node's normal to the band edge and `clamped` is set. Throws
    /// EvaluationZoneError for points outside the fluid.
    Vec2 evaluation_point(const Vec2& x, bool* clamped = nullptr) const;

private:
    BoundaryDiscretization(std::shared_ptr<const DomainSnapshot> domain, double near_spacings,
                           const kernels::KernelTable& table);

    std::shared_ptr<const DomainSnapshot> domain_;
    const kernels::KernelTable* table_;
    double near_spacings_;
    Eigen::MatrixXd single_, double_;

    mutable std::once_flag neumann_once_, dirichlet_once_;
    mutable Eigen::PartialPivLU<Eigen::MatrixXd> neumann_lu_, dirichlet_lu_;
};

/// A harmonic field on F(q) represented by its boundary trace and normal derivative.
class HarmonicSolution {
public:
    HarmonicSolution(std::shared_ptr<const BoundaryDiscretization> disc, Eigen::VectorXd trace,
                     Eigen::VectorXd normal_derivative, Eigen::VectorXd constants = {});

    const BoundaryDiscretization& discretization() const { return *disc_; }
    std::shared_ptr<const BoundaryDiscretization> discretization_ptr() const { return disc_; }
    const Eigen::VectorXd& trace() const { return trace_; }
    const Eigen::VectorXd& normal_derivative() const { return flux_; }
    /// Solved per-body constants (empty for Neumann solutions).
    const Eigen::VectorXd& constants() const { return constants_; }

    /// d/dtau of the trace at every node, curve by curve.
    const Eigen::VectorXd& tangential_derivative() const { return dtau_; }

    /// Throws EvaluationZoneError outside F(q) or inside the near-boundary band.
    FieldValue eval(const Vec2& x) const;
    /// Batch evaluation without the zone check.
    void eval_unchecked(const double* x, const double* y, std::size_t n, double* value,
                        double* gx, double* gy) const;

    /// Boundary gradient at a node, rebuilt from the normal and tangential traces.
    Vec2 boundary_gradient(int node) const;

private:
    std::shared_ptr<const BoundaryDiscretization> disc_;
    Eigen::VectorXd trace_, flux_, constants_;
    Eigen::VectorXd weighted_trace_, weighted_flux_, dtau_;
};

/// Neumann problem du/dn = g. The additive constant is fixed by a zero boundary mean.
/// Throws ValidationError when the integral of g is not negligible.
HarmonicSolution solve_neumann(const std::shared_ptr<const BoundaryDiscretization>& disc,
                               const Eigen::VectorXd& flux);

/// u = cavity_value on the cavity, u = C_nu + inhomogeneity on body nu, with the flux of
/// du/dn over each body curve prescribed. cavity_value and inhomogeneity are nodal
/// vectors over the whole boundary (entries off their curves are ignored); empty
/// vectors mean zero.
HarmonicSolution solve_dirichlet_with_constants(
    const std::shared_ptr<const BoundaryDiscretization>& disc, const Eigen::VectorXd& fluxes,
    const Eigen::VectorXd& cavity_value = {}, const Eigen::VectorXd& inhomogeneity = {});

/// Green representation of the field with the given nodal trace and normal derivative,
/// evaluated without the zone check. Used to evaluate superpositions without building
/// a HarmonicSolution for them.
void evaluate_layers(const BoundaryDiscretization& disc, const Eigen::VectorXd& trace,
                     const Eigen::VectorXd& normal_derivative, const double* x, const double* y,
                     std::size_t n, double* value, double* gx, double* gy);

inline FieldValue eval_field(const HarmonicSolution& sol, const Vec2& x) { return sol.eval(x); }

Eigen::VectorXd tangential_derivative(const HarmonicSolution& sol, int curve);

}  // namespace cavityflow
