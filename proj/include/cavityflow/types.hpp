#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace cavityflow {

using Vec2 = Eigen::Vector2d;

/// Rotation by +90 degrees: (a, b) -> (-b, a).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline Eigen::Matrix2d rotation(double theta) {
    Eigen::Matrix2d r;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    r << c, -s, s, c;
    return r;
}

// Dense rank-3 array, row-major in (i, j, k).
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int n0, int n1, int n2)
        : n0_(n0), n1_(n1), n2_(n2), data_(static_cast<std::size_t>(n0) * n1 * n2, 0.0) {}

    double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

    int dim0() const { return n0_; }
    int dim1() const { return n1_; }
    int dim2() const { return n2_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n1_ + j) * n2_ + k;
    }

    int n0_ = 0, n1_ = 0, n2_ = 0;
    std::vector<double> data_;
};

}  // namespace cavityflow
