#include "cavityflow/geometry.hpp"

#include "cavityflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cavityflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PlacedCurve {
    const ClosedCurve* curve;
    Eigen::Matrix2d rot;
    Vec2 shift;

    CurvePoint eval(double t) const {
        const CurvePoint p = curve->eval(t);
        return {rot * p.x + shift, rot * p.dx, rot * p.ddx};
    }
};

struct Foot {
    double t;
    double distance;  // signed, positive outside the enclosed region
};

// Index of the cached sample of c nearest to p.
int nearest_sample(const PlacedCurve& c, const Vec2& p) {
    const Vec2 local = c.rot.transpose() * (p - c.shift);
    const auto& xs = c.curve->sample_points();
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
        const double d = (xs[i] - local).squaredNorm();
        if (d < best) {
            best = d;
            arg = i;
        }
    }
    return arg;
}

// Newton on f(t) = (x(t) - p) . x'(t) from t, each step kept within one sample cell.
Foot newton_foot(const PlacedCurve& c, const Vec2& p, double t) {
    const double max_step = kTwoPi / ClosedCurve::kSampleCount;
    for (int it = 0; it < 30; ++it) {
        const CurvePoint cp = c.eval(t);
        const Vec2 r = cp.x - p;
        const double f = r.dot(cp.dx);
        const double df = cp.dx.squaredNorm() + r.dot(cp.ddx);
        double step = df > 0.0 ? -f / df : (f > 0.0 ? -max_step : max_step);
        step = std::clamp(step, -max_step, max_step);
        t += step;
        if (std::abs(step) < 1e-15) break;
    }
    const CurvePoint cp = c.eval(t);
    const double d = (p - cp.x).norm();
    return {t, (p - cp.x).dot(perp(cp.dx)) > 0.0 ? -d : d};
}

Foot foot_of(const PlacedCurve& c, const Vec2& p) {
    return newton_foot(c, p, kTwoPi * nearest_sample(c, p) / ClosedCurve::kSampleCount);
}

// min over s of signed distance from a(s) to curve b (outside b positive).
double directed_separation(const PlacedCurve& a, const PlacedCurve& b, double sign_b) {
    constexpr int stride = 4;
    constexpr int coarse = ClosedCurve::kSampleCount / stride;
    const auto& xa = a.curve->sample_points();
    const auto& xb = b.curve->sample_points();
    const auto& nb = b.curve->sample_normals();
    // Placed samples of b in a common frame.
    std::vector<Vec2> pb(xb.size()), nbp(xb.size());
    for (std::size_t j = 0; j < xb.size(); ++j) {
        pb[j] = b.rot * xb[j] + b.shift;
        nbp[j] = b.rot * nb[j];
    }
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < coarse; ++i) {
        const Vec2 p = a.rot * xa[stride * i] + a.shift;
        double near = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < pb.size(); ++j) {
            const double d = (p - pb[j]).squaredNorm();
            if (d < near) {
                near = d;
                arg = j;
            }
        }
        const double dist = std::sqrt(near);
        const double d = sign_b * ((p - pb[arg]).dot(nbp[arg]) >= 0.0 ? dist : -dist);
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    // Golden-section refinement around the best coarse sample; each evaluation starts
    // Newton from the previous foot point.
    const double best_s = kTwoPi * best_i / coarse;
    double foot_t = foot_of(b, a.eval(best_s).x).t;
    auto g = [&](double s) {
        const Foot f = newton_foot(b, a.eval(s).x, foot_t);
        foot_t = f.t;
        return sign_b * f.distance;
    };
    const double width = 1.5 * kTwoPi / coarse;
    double lo = best_s - width, hi = best_s + width;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = g(x2);
        }
    }
    return std::min({f1, f2, sign_b * foot_of(b, a.eval(best_s).x).distance});
}

PlacedCurve place_body(const BodyShape& body, const Configuration& q, int b) {
    return {&body.curve, rotation(q.angle(b)), q.position(b)};
}

}  // namespace

Configuration::Configuration(Eigen::VectorXd q) : q_(std::move(q)) {
    if (q_.size() % 3 != 0)
        throw ValidationError("configuration length must be a multiple of 3, got " +
                              std::to_string(q_.size()));
}

double signed_distance_to_curve(const ClosedCurve& curve, const Eigen::Matrix2d& rot,
                                const Vec2& shift, const Vec2& p) {
    return foot_of(PlacedCurve{&curve, rot, shift}, p).distance;
}

double min_separation(const std::vector<BodyShape>& bodies, const CavityShape& cavity,
                      const Configuration& q) {
    if (static_cast<int>(bodies.size()) != q.bodies())
        throw ValidationError("configuration has " + std::to_string(q.bodies()) +
                              " bodies but " + std::to_string(bodies.size()) + " shapes");
    const PlacedCurve wall{&cavity.curve, Eigen::Matrix2d::Identity(), Vec2::Zero()};
    double result = std::numeric_limits<double>::infinity();
    for (int b = 0; b < q.bodies(); ++b) {
        const PlacedCurve pb = place_body(bodies[b], q, b);
        result = std::min(result, directed_separation(pb, wall, -1.0));
        for (int c = b + 1; c < q.bodies(); ++c) {
            const PlacedCurve pc = place_body(bodies[c], q, c);
            result = std::min(result, directed_separation(pb, pc, 1.0));
            result = std::min(result, directed_separation(pc, pb, 1.0));
        }
    }
    return result;
}

std::shared_ptr<const DomainSnapshot> assemble_domain(const std::vector<BodyShape>& bodies,
                                                      const CavityShape& cavity,
                                                      const Configuration& q,
                                                      const NodeCounts& nodes,
                                                      double separation_margin) {
    for (int n : {nodes.bodies, nodes.cavity}) {
        if (n < 32 || n % 2 != 0)
            throw ValidationError("nodes_per_curve must be even and at least 32, got " +
                                  std::to_string(n));
    }
    auto snap = std::make_shared<DomainSnapshot>();
    snap->q_ = q;
    snap->min_separation_ = q.bodies() > 0 ? min_separation(bodies, cavity, q)
                                           : std::numeric_limits<double>::infinity();
    if (snap->min_separation_ <= separation_margin)
        throw CollisionError("configuration is not admissible: min_separation " +
                                 std::to_string(snap->min_separation_) + " <= " +
                                 std::to_string(separation_margin),
                             snap->min_separation_);

    snap->log_scale_ = 4.0 * cavity.curve.max_radius();

    auto add_curve = [&](const PlacedCurve& pc, int n, int body, double tsign) {
        CurveBlock block;
        block.offset = static_cast<int>(snap->x_.size());
        block.count = n;
        block.body = body;
        block.tangent_sign = tsign;
        block.center = pc.shift;
        const double h = kTwoPi / n;
        for (int j = 0; j < n; ++j) {
            const double t = h * j;
            const CurvePoint p = pc.eval(t);
            const double speed = p.dx.norm();
            const Vec2 tau = tsign * p.dx / speed;
            const Vec2 nrm = perp(tau);
            snap->x_.push_back(p.x.x());
            snap->y_.push_back(p.x.y());
            snap->tx_.push_back(tau.x());
            snap->ty_.push_back(tau.y());
            snap->nx_.push_back(nrm.x());
            snap->ny_.push_back(nrm.y());
            snap->speed_.push_back(speed);
            snap->curvature_.push_back((p.dx.x() * p.ddx.y() - p.dx.y() * p.ddx.x()) /
                                       (speed * speed * speed));
            snap->weight_.push_back(h * speed);
            snap->normal_acc_.push_back(p.ddx.dot(nrm));
            snap->param_.push_back(t);
            block.perimeter += h * speed;
        }
        snap->curves_.push_back(block);
    };

    add_curve({&cavity.curve, Eigen::Matrix2d::Identity(), Vec2::Zero()}, nodes.cavity, -1, -1.0);
    for (int b = 0; b < q.bodies(); ++b) add_curve(place_body(bodies[b], q, b), nodes.bodies, b, 1.0);
    return snap;
}

Vec2 rigid_field(const Configuration& q, int k, int curve, const Vec2& x) {
    if (k < 0 || k >= q.size()) throw ValidationError("rigid_field index out of range");
    const int body = k / 3;
    if (curve != DomainSnapshot::curve_of_body(body)) return Vec2::Zero();
    switch (k % 3) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, 1.0};
        default:
            return perp(x - q.position(body));
    }
}

}  // namespace cavityflow
