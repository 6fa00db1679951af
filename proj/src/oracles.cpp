#include "cavityflow/oracles.hpp"

#include "cavityflow/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cavityflow::oracles {
namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

Eigen::MatrixXd central_difference(const std::function<Eigen::MatrixXd(const Configuration&)>& f,
                                   const Configuration& q, int k, double h) {
    Eigen::VectorXd plus = q.vector(), minus = q.vector();
    plus[k] += h;
    minus[k] -= h;
    return (f(Configuration(plus)) - f(Configuration(minus))) / (2.0 * h);
}

Eigen::MatrixXd derivative(const std::function<Eigen::MatrixXd(const Configuration&)>& f,
                           const Configuration& q, int k, double h, bool richardson) {
    const Eigen::MatrixXd coarse = central_difference(f, q, k, h);
    if (!richardson) return coarse;
    return (4.0 * central_difference(f, q, k, 0.5 * h) - coarse) / 3.0;
}

}  // namespace

Tensor3 fd_gradient(const std::function<Eigen::MatrixXd(const Configuration&)>& f,
                    const Configuration& q, const FdOptions& options) {
    if (!(options.step > 0.0)) throw ValidationError("finite-difference step must be positive");
    const Eigen::MatrixXd f0 = f(q);
    Tensor3 out(static_cast<int>(f0.rows()), static_cast<int>(f0.cols()), q.size());
    for (int k = 0; k < q.size(); ++k) {
        Eigen::MatrixXd d;
        try {
            d = derivative(f, q, k, options.step, options.richardson);
        } catch (const CollisionError&) {
            d = derivative(f, q, k, 0.5 * options.step, options.richardson);
        }
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j) out(i, j, k) = d(i, j);
    }
    return out;
}

Eigen::VectorXd fd_gradient_scalar(const std::function<double(const Configuration&)>& f,
                                   const Configuration& q, const FdOptions& options) {
    const Tensor3 t = fd_gradient(
        [&](const Configuration& c) { return Eigen::MatrixXd::Constant(1, 1, f(c)); }, q,
        options);
    Eigen::VectorXd out(q.size());
    for (int k = 0; k < q.size(); ++k) out[k] = t(0, 0, k);
    return out;
}

AnnulusSeries::AnnulusSeries(double a, double big_r) : a_(a), r_(big_r) {
    if (!(a > 0.0) || !(big_r > a))
        throw ValidationError("annulus requires 0 < a < R");
}

double AnnulusSeries::added_mass() const {
    const double a2 = a_ * a_, r2 = r_ * r_;
    return std::numbers::pi * a2 * (r2 + a2) / (r2 - a2);
}

// phi = (A r + B / r) cos(theta) with d(phi)/dr = cos(theta) at r = a and 0 at r = R.
double AnnulusSeries::translation_potential(const Vec2& x) const {
    const double a2 = a_ * a_, r2 = r_ * r_;
    const double ca = -a2 / (r2 - a2), cb = -a2 * r2 / (r2 - a2);
    const double rr = x.squaredNorm();
    return (ca + cb / rr) * x.x();
}

Vec2 AnnulusSeries::translation_gradient(const Vec2& x) const {
    const double a2 = a_ * a_, r2 = r_ * r_;
    const double ca = -a2 / (r2 - a2), cb = -a2 * r2 / (r2 - a2);
    const double rr = x.squaredNorm();
    const double r4 = rr * rr;
    return {ca + cb * (rr - 2.0 * x.x() * x.x()) / r4, -2.0 * cb * x.x() * x.y() / r4};
}

double AnnulusSeries::circulation_stream(const Vec2& x) const {
    return kInvTwoPi * std::log(x.norm() / r_);
}

double AnnulusSeries::circulation_constant() const { return kInvTwoPi * std::log(a_ / r_); }

std::pair<double, Vec2> AnnulusSeries::vortex_regular_part(double rho, const Vec2& x,
                                                           int order) const {
    if (!(rho > a_ && rho < r_)) throw ValidationError("vortex must lie inside the annulus");
    const double r = x.norm();
    const double theta = std::atan2(x.y(), x.x());
    const double a2 = a_ * a_, big2 = r_ * r_;
    // Mode 0 carries -ln R; mode m >= 1 has alpha r^m + beta r^-m in closed, overflow-free form.
    double value = -std::log(r_);
    double dr = 0.0, dtheta = 0.0;
    for (int m = 1; m <= order; ++m) {
        const double t = std::pow(a_ / r_, m);
        const double denom = m * (1.0 - t * t);
        const double grow = (std::pow(rho * r / big2, m) - std::pow(a2 * r / (rho * big2), m)) / denom;
        const double decay =
            (std::pow(a2 / (rho * r), m) - std::pow(a2 * rho / (r * big2), m)) / denom;
        const double c = std::cos(m * theta), s = std::sin(m * theta);
        value += (grow + decay) * c;
        dr += (m / r) * (grow - decay) * c;
        dtheta += -(m / r) * (grow + decay) * s;
    }
    const Vec2 er{std::cos(theta), std::sin(theta)};
    const Vec2 et{-er.y(), er.x()};
    return {kInvTwoPi * value, kInvTwoPi * (dr * er + dtheta * et)};
}

double AnnulusSeries::vortex_disk_constant(double rho) const {
    if (!(rho > a_ && rho < r_)) throw ValidationError("vortex must lie inside the annulus");
    return kInvTwoPi * std::log(rho / r_);
}

ImageVortex image_vortex_disk(double d, double cavity_radius) {
    if (!(d >= 0.0) || !(d < cavity_radius))
        throw ValidationError("image vortex requires 0 <= d < cavity radius");
    const double speed = kInvTwoPi * d / (cavity_radius * cavity_radius - d * d);
    const double period =
        d > 0.0 ? 2.0 * std::numbers::pi * d / speed : std::numeric_limits<double>::infinity();
    return {speed, period};
}

}  // namespace cavityflow::oracles
