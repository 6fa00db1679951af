#pragma once

#include "cavityflow/types.hpp"

#include <vector>

namespace cavityflow {

class BoundaryDiscretization;
class FlowBasis;

/// Vorticity carried by regularized point vortices. Weights never change after
/// construction; only positions move.
class VortexParticleSet {
public:
    VortexParticleSet() = default;
    VortexParticleSet(std::vector<double> x, std::vector<double> y, std::vector<double> weights,
                      double blob_radius);

    std::size_t size() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }
    const std::vector<double>& weights() const { return w_; }
    Vec2 position(std::size_t p) const { return {x_[p], y_[p]}; }
    double blob_radius() const { return blob_radius_; }
    double total_weight() const { return total_; }

    /// Same weights at new positions.
    VortexParticleSet with_positions(std::vector<double> x, std::vector<double> y) const;
    /// Same positions with every weight multiplied by factor.
    VortexParticleSet scaled(double factor) const;

private:
    std::vector<double> x_, y_, w_;
    double blob_radius_ = 0.0;
    double total_ = 0.0;
};

/// Velocity at every particle: Kirchhoff part, circulation part and the vortex field,
/// with each particle's own blob contribution left out. Particles inside the
/// near-boundary band see the harmonic part at the band edge (see
/// BoundaryDiscretization::evaluation_point); `clamped` receives their count. Throws
/// EvaluationZoneError when a particle is outside the fluid.
std::vector<Vec2> particle_velocity(const FlowBasis& basis, const Eigen::VectorXd& qp,
                                    const Eigen::VectorXd& gamma,
                                    const VortexParticleSet& particles, int* clamped = nullptr);

/// Positions at which the boundary-integral fields are evaluated for each particle.
void evaluation_points(const BoundaryDiscretization& disc, const VortexParticleSet& particles,
                       std::vector<double>& x, std::vector<double>& y, int* clamped = nullptr);

/// Forward-Euler kick x + dt * v; the RK stages in simulate are built from it.
VortexParticleSet advect(const VortexParticleSet& particles, const std::vector<Vec2>& velocity,
                         double dt);

}  // namespace cavityflow
