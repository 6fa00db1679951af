#pragma once

#include "cavityflow/shapes.hpp"
#include "cavityflow/types.hpp"

#include <memory>
#include <span>
#include <vector>

namespace cavityflow {

/// Body positions and angles q = (h_1x, h_1y, theta_1, ..., h_Nx, h_Ny, theta_N).
///
/// Internally indices are 0-based: entry k belongs to body k / 3 and coordinate k % 3.
/// solid_number() and coordinate() give the 1-based labels [k] and (k).
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(Eigen::VectorXd q);

    int bodies() const { return static_cast<int>(q_.size() / 3); }
    int size() const { return static_cast<int>(q_.size()); }

    const Eigen::VectorXd& vector() const { return q_; }
    double operator[](int k) const { return q_[k]; }

    Vec2 position(int body) const { return {q_[3 * body], q_[3 * body + 1]}; }
    double angle(int body) const { return q_[3 * body + 2]; }

    /// [k] for a 1-based index k in 1..3N.
    static int solid_number(int k) { return (k - 1) / 3 + 1; }
    /// (k) in {1, 2, 3} for a 1-based index k.
    static int coordinate(int k) { return k - 3 * ((k - 1) / 3); }

private:
    Eigen::VectorXd q_;
};

struct CurveBlock {
    int offset = 0;
    int count = 0;
    int body = -1;  // -1 for the cavity
    double perimeter = 0.0;
    Vec2 center = Vec2::Zero();  // h_body, or the origin for the cavity
    // +1 when tau follows increasing parameter (bodies), -1 on the cavity.
    double tangent_sign = 1.0;
};

struct NodeCounts {
    int bodies = 64;
    int cavity = 64;
};

/// The discretized fluid boundary for one configuration. Immutable after assembly.
///
/// Curve 0 is the cavity, curve b + 1 is body b. Every curve is sampled at
/// equispaced parameters t_j = 2*pi*j/n of its counterclockwise parameterization.
/// Normals point out of the fluid and n = tau^perp, so tau runs counterclockwise
/// on bodies and clockwise on the cavity.
class DomainSnapshot {
public:
    const Configuration& configuration() const { return q_; }
    int body_count() const { return q_.bodies(); }
    int curve_count() const { return static_cast<int>(curves_.size()); }
    const CurveBlock& curve(int c) const { return curves_[c]; }
    const std::vector<CurveBlock>& curves() const { return curves_; }
    static int curve_of_body(int body) { return body + 1; }
    int node_count() const { return static_cast<int>(x_.size()); }

    std::span<const double> x() const { return x_; }
    std::span<const double> y() const { return y_; }
    std::span<const double> nx() const { return nx_; }
    std::span<const double> ny() const { return ny_; }
    std::span<const double> tx() const { return tx_; }
    std::span<const double> ty() const { return ty_; }
    std::span<const double> speed() const { return speed_; }
    std::span<const double> curvature() const { return curvature_; }
    std::span<const double> weight() const { return weight_; }
    // x''(t) . n, used by the double-layer diagonal limit.
    std::span<const double> normal_acceleration() const { return normal_acc_; }
    std::span<const double> parameter() const { return param_; }

    Vec2 node(int j) const { return {x_[j], y_[j]}; }
    Vec2 normal(int j) const { return {nx_[j], ny_[j]}; }
    Vec2 tangent(int j) const { return {tx_[j], ty_[j]}; }

    /// Arc length per node on curve c (perimeter / count).
    double spacing(int c) const { return curves_[c].perimeter / curves_[c].count; }

    /// Length scale inside the logarithmic kernel; larger than the cavity diameter.
    double log_scale() const { return log_scale_; }

    double min_separation() const { return min_separation_; }

    friend std::shared_ptr<const DomainSnapshot> assemble_domain(
        const std::vector<BodyShape>& bodies, const CavityShape& cavity,
        const Configuration& q, const NodeCounts& nodes, double separation_margin);

private:
    Configuration q_;
    std::vector<CurveBlock> curves_;
    std::vector<double> x_, y_, nx_, ny_, tx_, ty_, speed_, curvature_, weight_, normal_acc_,
        param_;
    double log_scale_ = 1.0;
    double min_separation_ = 0.0;
};

/// Places every body at its configuration and samples all curves.
/// Throws CollisionError when min_separation(q) <= separation_margin (margin >= 0),
/// ValidationError for bad node counts or a body count mismatch.
std::shared_ptr<const DomainSnapshot> assemble_domain(const std::vector<BodyShape>& bodies,
                                                      const CavityShape& cavity,
                                                      const Configuration& q,
                                                      const NodeCounts& nodes,
                                                      double separation_margin = 0.0);

inline std::shared_ptr<const DomainSnapshot> assemble_domain(
    const std::vector<BodyShape>& bodies, const CavityShape& cavity, const Configuration& q,
    int nodes_per_curve) {
    return assemble_domain(bodies, cavity, q, NodeCounts{nodes_per_curve, nodes_per_curve});
}

/// xi_k(q, x) for 0-based k, evaluated at a point on boundary curve `curve`
/// (0 = cavity, b + 1 = body b). Zero unless the point lies on body k / 3.
Vec2 rigid_field(const Configuration& q, int k, int curve, const Vec2& x);

/// Smallest signed distance between the placed bodies and between each body and
/// the cavity wall. Negative values measure overlap depth.
double min_separation(const std::vector<BodyShape>& bodies, const CavityShape& cavity,
                      const Configuration& q);

/// Signed distance from p to a placed curve: positive outside the enclosed region.
double signed_distance_to_curve(const ClosedCurve& curve, const Eigen::Matrix2d& rot,
                                const Vec2& shift, const Vec2& p);

}  // namespace cavityflow
