#pragma once

// Dense pairwise kernels behind the boundary-integral solver and the vortex
// particle velocities. Every entry point has a scalar reference implementation and,
// on x86-64, an AVX2/FMA variant. The variant is chosen once at startup from the
// CPU features; CAVITYFLOW_KERNELS=scalar|avx2 overrides the choice.
//
// Conventions: r = source - target, Green's function (1/2pi) ln(|r| / L0).

#include <cstddef>

namespace cavityflow::kernels {

struct Targets {
    const double* x;
    const double* y;
    std::size_t n;
};

struct BoundarySources {
    const double* x;
    const double* y;
    const double* nx;
    const double* ny;
    const double* w;  // quadrature weights
    std::size_t n;
};

// Plain trapezoid rows of the single- and double-layer operators, r == 0 entries zero:
//   single[i*ld + j] = w_j (ln|r| - ln L0) / (2 pi)
//   dbl[i*ld + j]    = w_j (r . n_j) / (2 pi |r|^2)
using AssembleFn = void (*)(Targets targets, BoundarySources src, double log_scale,
                            double* single, double* dbl, std::size_t ld);

// Green representation u(x) = sum_j [a_j (r . n_j)/|r|^2 - b_j (ln|r| - ln L0)] / (2 pi)
// and its gradient with respect to the target, where a_j = trace_j w_j and
// b_j = flux_j w_j are supplied pre-weighted.
using GreenEvalFn = void (*)(Targets targets, BoundarySources src, const double* a,
                             const double* b, double log_scale, double* value, double* gx,
                             double* gy);

// Algebraic blob velocity u(x) = sum_j w_j (x - p_j)^perp / (2 pi (|x - p_j|^2 + delta^2)).
// A target that coincides with a blob receives no contribution from it.
using BlobVelocityFn = void (*)(Targets targets, const double* px, const double* py,
                                const double* pw, std::size_t np, double delta2, double* ux,
                                double* uy);

struct KernelTable {
    const char* name;
    AssembleFn assemble;
    GreenEvalFn green_eval;
    BlobVelocityFn blob_velocity;
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

const KernelTable& active_kernels();

}  // namespace cavityflow::kernels
