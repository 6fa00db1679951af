#include "cavityflow/shapes.hpp"

#include "cavityflow/errors.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

namespace cavityflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Radial {
    double r, dr, ddr;
};

Radial star_radius(const Star& s, double t) {
    Radial out{s.mean_radius, 0.0, 0.0};
    for (std::size_t i = 0; i < s.cos_coeffs.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double c = std::cos(k * t), sn = std::sin(k * t);
        out.r += s.cos_coeffs[i] * c;
        out.dr -= s.cos_coeffs[i] * k * sn;
        out.ddr -= s.cos_coeffs[i] * k * k * c;
    }
    for (std::size_t i = 0; i < s.sin_coeffs.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double c = std::cos(k * t), sn = std::sin(k * t);
        out.r += s.sin_coeffs[i] * sn;
        out.dr += s.sin_coeffs[i] * k * c;
        out.ddr -= s.sin_coeffs[i] * k * k * sn;
    }
    return out;
}

CurvePoint raw_eval(const ShapeDescriptor& d, double t) {
    const double c = std::cos(t), s = std::sin(t);
    return std::visit(
        [&](const auto& shape) -> CurvePoint {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Circle>) {
                const double r = shape.radius;
                return {{r * c, r * s}, {-r * s, r * c}, {-r * c, -r * s}};
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                return {{shape.a * c, shape.b * s},
                        {-shape.a * s, shape.b * c},
                        {-shape.a * c, -shape.b * s}};
            } else {
                const Radial r = star_radius(shape, t);
                const Vec2 er{c, s}, et{-s, c};
                return {r.r * er, r.dr * er + r.r * et,
                        r.ddr * er + 2.0 * r.dr * et - r.r * er};
            }
        },
        d);
}

void validate_descriptor(const ShapeDescriptor& d) {
    std::visit(
        [](const auto& shape) {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Circle>) {
                if (!(shape.radius > 0.0) || !std::isfinite(shape.radius))
                    throw ValidationError("circle radius must be positive");
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                if (!(shape.a > 0.0) || !(shape.b > 0.0) || !std::isfinite(shape.a) ||
                    !std::isfinite(shape.b))
                    throw ValidationError("ellipse semi_axes must be positive");
            } else {
                if (!(shape.mean_radius > 0.0))
                    throw ValidationError("star mean_radius must be positive");
                // A polar graph is simple exactly when r(t) stays positive.
                constexpr int samples = 4096;
                for (int i = 0; i < samples; ++i) {
                    const double t = kTwoPi * i / samples;
                    if (star_radius(shape, t).r <= 1e-9 * shape.mean_radius)
                        throw ValidationError(
                            "star descriptor is self-intersecting (radius reaches zero)");
                }
            }
        },
        d);
}

}  // namespace

ClosedCurve::ClosedCurve(ShapeDescriptor descriptor) : descriptor_(std::move(descriptor)) {
    validate_descriptor(descriptor_);
    // Green's theorem with the periodic trapezoid rule.
    constexpr int samples = 2048;
    double area2 = 0.0, mx = 0.0, my = 0.0;
    for (int i = 0; i < samples; ++i) {
        const CurvePoint p = raw_eval(descriptor_, kTwoPi * i / samples);
        area2 += p.x.x() * p.dx.y() - p.x.y() * p.dx.x();
        mx += 0.5 * p.x.x() * p.x.x() * p.dx.y();
        my -= 0.5 * p.x.y() * p.x.y() * p.dx.x();
    }
    const double h = kTwoPi / samples;
    area_ = 0.5 * area2 * h;
    raw_centroid_ = Vec2(mx * h, my * h) / area_;
    refresh_samples();
}

void ClosedCurve::set_offset(const Vec2& offset) {
    offset_ = offset;
    refresh_samples();
}

void ClosedCurve::refresh_samples() {
    sample_x_.resize(kSampleCount);
    sample_n_.resize(kSampleCount);
    for (int i = 0; i < kSampleCount; ++i) {
        const CurvePoint p = eval(kTwoPi * i / kSampleCount);
        sample_x_[i] = p.x;
        sample_n_[i] = -perp(p.dx).normalized();
    }
    constexpr int fine = 1024;
    max_radius_ = 0.0;
    for (int i = 0; i < fine; ++i)
        max_radius_ = std::max(max_radius_, eval(kTwoPi * i / fine).x.norm());
}

CurvePoint ClosedCurve::eval(double t) const {
    CurvePoint p = raw_eval(descriptor_, t);
    p.x -= offset_;
    return p;
}

double ClosedCurve::curvature(double t) const {
    const CurvePoint p = eval(t);
    const double cross = p.dx.x() * p.ddx.y() - p.dx.y() * p.ddx.x();
    return cross / std::pow(p.dx.norm(), 3);
}

BodyShape make_body(const ShapeDescriptor& descriptor, double mass, double inertia) {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ValidationError("body mass m must be positive");
    if (!(inertia > 0.0) || !std::isfinite(inertia))
        throw ValidationError("body moment of inertia J must be positive");
    ClosedCurve curve(descriptor);
    const Vec2 c = curve.raw_centroid();
    const double size = curve.max_radius();
    if (c.norm() > 1e-12 * size) {
        spdlog::info("body reference curve centroid ({:.3e}, {:.3e}) is off the origin; recentering",
                     c.x(), c.y());
        curve.set_offset(c);
    }
    return BodyShape{std::move(curve), mass, inertia};
}

CavityShape make_cavity(const ShapeDescriptor& descriptor) {
    return CavityShape{ClosedCurve(descriptor)};
}

}  // namespace cavityflow
