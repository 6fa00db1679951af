#pragma once

#include "cavityflow/types.hpp"

#include <variant>
#include <vector>

namespace cavityflow {

struct Circle {
    double radius = 1.0;
    bool operator==(const Circle&) const = default;
};

// Semi-axes along the body-frame x and y directions.
struct Ellipse {
    double a = 1.0;
    double b = 1.0;
    bool operator==(const Ellipse&) const = default;
};

// Polar graph r(t) = mean_radius + sum_k cos_coeffs[k-1] cos(kt) + sin_coeffs[k-1] sin(kt).
struct Star {
    double mean_radius = 1.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
    bool operator==(const Star&) const = default;
};

using ShapeDescriptor = std::variant<Circle, Ellipse, Star>;

struct CurvePoint {
    Vec2 x;    // position
    Vec2 dx;   // d/dt
    Vec2 ddx;  // d2/dt2
};

/// Analytic, counterclockwise, 2*pi-periodic closed curve built from a descriptor.
///
/// The constructor rejects descriptors that do not describe a simple smooth curve
/// (non-positive radii, star radius functions that touch zero). An optional offset
/// is subtracted from every point; bodies use it to move their centroid to the origin.
class ClosedCurve {
public:
    explicit ClosedCurve(ShapeDescriptor descriptor);

    const ShapeDescriptor& descriptor() const { return descriptor_; }

    CurvePoint eval(double t) const;

    /// Enclosed area and centroid of the curve as described (before the offset).
    double area() const { return area_; }
    Vec2 raw_centroid() const { return raw_centroid_; }

    Vec2 offset() const { return offset_; }
    void set_offset(const Vec2& offset);

    /// Largest distance from the origin to a curve point (after the offset).
    double max_radius() const { return max_radius_; }

    /// Points and outward unit normals at t_i = 2*pi*i/kSampleCount (after the offset),
    /// used as starting guesses by the distance queries.
    static constexpr int kSampleCount = 384;
    const std::vector<Vec2>& sample_points() const { return sample_x_; }
    const std::vector<Vec2>& sample_normals() const { return sample_n_; }

    /// Curvature of the counterclockwise curve; positive where convex.
    double curvature(double t) const;

private:
    ShapeDescriptor descriptor_;
    Vec2 offset_ = Vec2::Zero();
    double area_ = 0.0;
    Vec2 raw_centroid_ = Vec2::Zero();
    double max_radius_ = 0.0;
    std::vector<Vec2> sample_x_, sample_n_;

    void refresh_samples();
};

struct BodyShape {
    ClosedCurve curve;
    double mass;
    double inertia;
};

struct CavityShape {
    ClosedCurve curve;
};

/// Validates mass/inertia and recenters the reference curve on its centroid,
/// logging a note when the descriptor's centroid is off the origin.
BodyShape make_body(const ShapeDescriptor& descriptor, double mass, double inertia);

CavityShape make_cavity(const ShapeDescriptor& descriptor);

}  // namespace cavityflow
