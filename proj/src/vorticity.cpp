#include "cavityflow/vorticity.hpp"

#include "cavityflow/errors.hpp"
#include "cavityflow/flows.hpp"

#include <numeric>

namespace cavityflow {

VortexParticleSet::VortexParticleSet(std::vector<double> x, std::vector<double> y,
                                     std::vector<double> weights, double blob_radius)
    : x_(std::move(x)), y_(std::move(y)), w_(std::move(weights)), blob_radius_(blob_radius) {
    if (x_.size() != w_.size() || y_.size() != w_.size())
        throw ValidationError("particle coordinate and weight counts differ");
    if (!(blob_radius_ >= 0.0)) throw ValidationError("blob_radius must be non-negative");
    total_ = std::accumulate(w_.begin(), w_.end(), 0.0);
}

VortexParticleSet VortexParticleSet::with_positions(std::vector<double> x,
                                                    std::vector<double> y) const {
    VortexParticleSet out = *this;
    if (x.size() != size() || y.size() != size())
        throw ValidationError("particle count changed during advection");
    out.x_ = std::move(x);
    out.y_ = std::move(y);
    return out;
}

VortexParticleSet VortexParticleSet::scaled(double factor) const {
    VortexParticleSet out = *this;
    for (double& w : out.w_) w *= factor;
    out.total_ = std::accumulate(out.w_.begin(), out.w_.end(), 0.0);
    return out;
}

void evaluation_points(const BoundaryDiscretization& disc, const VortexParticleSet& particles,
                       std::vector<double>& x, std::vector<double>& y, int* clamped) {
    const std::size_t n = particles.size();
    x.resize(n);
    y.resize(n);
    int count = 0;
    for (std::size_t p = 0; p < n; ++p) {
        bool moved = false;
        const Vec2 e = disc.evaluation_point(particles.position(p), &moved);
        x[p] = e.x();
        y[p] = e.y();
        count += moved;
    }
    if (clamped) *clamped = count;
}

std::vector<Vec2> particle_velocity(const FlowBasis& basis, const Eigen::VectorXd& qp,
                                    const Eigen::VectorXd& gamma,
                                    const VortexParticleSet& particles, int* clamped) {
    const std::size_t n = particles.size();
    std::vector<Vec2> out(n, Vec2::Zero());
    if (clamped) *clamped = 0;
    if (n == 0) return out;
    std::vector<double> ex, ey;
    evaluation_points(basis.discretization(), particles, ex, ey, clamped);
    std::vector<double> hx(n), hy(n), bx(n), by(n);
    basis.harmonic_velocity(qp, gamma, ex.data(), ey.data(), n, hx.data(), hy.data());
    // The blob kernel gives a particle no velocity from itself.
    const double d = particles.blob_radius();
    basis.discretization().kernel_table().blob_velocity(
        {particles.x().data(), particles.y().data(), n}, particles.x().data(),
        particles.y().data(), particles.weights().data(), n, d * d, bx.data(), by.data());
    for (std::size_t p = 0; p < n; ++p) out[p] = {hx[p] + bx[p], hy[p] + by[p]};
    return out;
}

VortexParticleSet advect(const VortexParticleSet& particles, const std::vector<Vec2>& velocity,
                         double dt) {
    if (velocity.size() != particles.size())
        throw ValidationError("one velocity per particle is required");
    std::vector<double> x = particles.x(), y = particles.y();
    for (std::size_t p = 0; p < x.size(); ++p) {
        x[p] += dt * velocity[p].x();
        y[p] += dt * velocity[p].y();
    }
    return particles.with_positions(std::move(x), std::move(y));
}

}  // namespace cavityflow
