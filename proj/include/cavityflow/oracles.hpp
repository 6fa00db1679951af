#pragma once

// Independent reference computations: finite-difference shape derivatives and
// closed-form fields in an annulus and a disk cavity.

#include "cavityflow/geometry.hpp"

#include <functional>

namespace cavityflow::oracles {

struct FdOptions {
    double step = 1e-4;
    // Combine steps h and h/2 as (4 D(h/2) - D(h)) / 3.
    bool richardson = true;
};

/// Central-difference gradient of a matrix-valued function of q. Entry (i, j, k) of the
/// result is d f(q)_{ij} / d q_k. When a perturbed configuration collides the step is
/// halved once before the CollisionError propagates.
Tensor3 fd_gradient(const std::function<Eigen::MatrixXd(const Configuration&)>& f,
                    const Configuration& q, const FdOptions& options = {});

/// Scalar convenience wrapper.
Eigen::VectorXd fd_gradient_scalar(const std::function<double(const Configuration&)>& f,
                                   const Configuration& q, const FdOptions& options = {});

/// Disk of radius a centered in a circular cavity of radius R.
class AnnulusSeries {
public:
    AnnulusSeries(double a, double big_r);

    double inner() const { return a_; }
    double outer() const { return r_; }

    /// Added mass pi a^2 (R^2 + a^2) / (R^2 - a^2) of the translation potential.
    double added_mass() const;
    /// Translation potential (A r + B / r) cos(theta) for unit velocity along x.
    double translation_potential(const Vec2& x) const;
    Vec2 translation_gradient(const Vec2& x) const;

    /// Circulation stream (1/2pi) ln(r / R) and its constant on the disk.
    double circulation_stream(const Vec2& x) const;
    double circulation_constant() const;

    /// Stream of a unit point vortex at (rho, 0) with zero on both circles and zero
    /// flux through the disk, minus the free-space part (1/2pi) ln|x - x_p|, summed as a
    /// Fourier series to `order` modes. Also returns its gradient.
    std::pair<double, Vec2> vortex_regular_part(double rho, const Vec2& x, int order = 400) const;
    /// Constant value of that vortex stream on the disk.
    double vortex_disk_constant(double rho) const;

private:
    double a_, r_;
};

struct ImageVortex {
    double speed;
    double period;
};

/// Unit point vortex at distance d from the center of a disk cavity of radius b.
ImageVortex image_vortex_disk(double d, double cavity_radius);

}  // namespace cavityflow::oracles
