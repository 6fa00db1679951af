#include "cavityflow/kernels.hpp"

#include <cmath>
#include <numbers>

namespace cavityflow::kernels {
namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

void assemble_scalar(Targets t, BoundarySources s, double log_scale, double* single,
                     double* dbl, std::size_t ld) {
    const double log_l0 = std::log(log_scale);
    for (std::size_t i = 0; i < t.n; ++i) {
        const double xi = t.x[i], yi = t.y[i];
        double* srow = single + i * ld;
        double* drow = dbl + i * ld;
        for (std::size_t j = 0; j < s.n; ++j) {
            const double rx = s.x[j] - xi, ry = s.y[j] - yi;
            const double r2 = rx * rx + ry * ry;
            if (r2 > 0.0) {
                const double inv = 1.0 / r2;
                drow[j] = s.w[j] * ((rx * s.nx[j] + ry * s.ny[j]) * inv) * kInvTwoPi;
                srow[j] = s.w[j] * (0.5 * std::log(r2) - log_l0) * kInvTwoPi;
            } else {
                drow[j] = 0.0;
                srow[j] = 0.0;
            }
        }
    }
}

void green_eval_scalar(Targets t, BoundarySources s, const double* a, const double* b,
                       double log_scale, double* value, double* gx, double* gy) {
    const double log_l0 = std::log(log_scale);
    for (std::size_t i = 0; i < t.n; ++i) {
        const double xi = t.x[i], yi = t.y[i];
        double v = 0.0, dx = 0.0, dy = 0.0;
        for (std::size_t j = 0; j < s.n; ++j) {
            const double rx = s.x[j] - xi, ry = s.y[j] - yi;
            const double r2 = rx * rx + ry * ry;
            if (!(r2 > 0.0)) continue;
            const double inv = 1.0 / r2;
            const double rn = rx * s.nx[j] + ry * s.ny[j];
            v += a[j] * rn * inv - b[j] * (0.5 * std::log(r2) - log_l0);
            const double c = 2.0 * a[j] * rn * inv * inv + b[j] * inv;
            dx += c * rx - a[j] * s.nx[j] * inv;
            dy += c * ry - a[j] * s.ny[j] * inv;
        }
        value[i] = v * kInvTwoPi;
        gx[i] = dx * kInvTwoPi;
        gy[i] = dy * kInvTwoPi;
    }
}

void blob_velocity_scalar(Targets t, const double* px, const double* py, const double* pw,
                          std::size_t np, double delta2, double* ux, double* uy) {
    for (std::size_t i = 0; i < t.n; ++i) {
        const double xi = t.x[i], yi = t.y[i];
        double u = 0.0, v = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double dx = xi - px[j], dy = yi - py[j];
            const double den = dx * dx + dy * dy + delta2;
            if (!(den > 0.0)) continue;
            const double c = pw[j] / den;
            u -= c * dy;
            v += c * dx;
        }
        ux[i] = u * kInvTwoPi;
        uy[i] = v * kInvTwoPi;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", &assemble_scalar, &green_eval_scalar,
                                   &blob_velocity_scalar};
    return table;
}

}  // namespace cavityflow::kernels
