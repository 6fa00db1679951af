// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "cavityflow/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <numbers>

namespace cavityflow::kernels {
namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

// Natural log for positive normal doubles: split off the binary exponent, reduce the
// mantissa to [sqrt(1/2), sqrt(2)) and sum 2 atanh(s) with s = (m - 1)/(m + 1).
inline __m256d log_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    const __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(exp_bits, pack));
    __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(e32), _mm256_set1_pd(1023.0));

    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(std::numbers::sqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z = _mm256_mul_pd(s, s);
    // 1 + z/3 + z^2/5 + ... + z^12/25; |z| < 0.0295 so the tail is below 1e-19.
    __m256d p = _mm256_set1_pd(1.0 / 25.0);
    for (int k = 11; k >= 0; --k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / (2 * k + 1)));
    const __m256d logm = _mm256_mul_pd(_mm256_add_pd(s, s), p);

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, logm));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void assemble_avx2(Targets t, BoundarySources s, double log_scale, double* single,
                   double* dbl, std::size_t ld) {
    const double log_l0 = std::log(log_scale);
    const __m256d vlog_l0 = _mm256_set1_pd(log_l0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d inv2pi = _mm256_set1_pd(kInvTwoPi);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t nv = s.n & ~std::size_t{3};
    for (std::size_t i = 0; i < t.n; ++i) {
        const double xi = t.x[i], yi = t.y[i];
        const __m256d vx = _mm256_set1_pd(xi), vy = _mm256_set1_pd(yi);
        double* srow = single + i * ld;
        double* drow = dbl + i * ld;
        std::size_t j = 0;
        for (; j < nv; j += 4) {
            const __m256d rx = _mm256_sub_pd(_mm256_loadu_pd(s.x + j), vx);
            const __m256d ry = _mm256_sub_pd(_mm256_loadu_pd(s.y + j), vy);
            const __m256d r2 = _mm256_fmadd_pd(rx, rx, _mm256_mul_pd(ry, ry));
            const __m256d ok = _mm256_cmp_pd(r2, zero, _CMP_GT_OQ);
            const __m256d r2s = _mm256_blendv_pd(one, r2, ok);
            const __m256d inv = _mm256_div_pd(one, r2s);
            const __m256d w = _mm256_loadu_pd(s.w + j);
            const __m256d rn = _mm256_fmadd_pd(rx, _mm256_loadu_pd(s.nx + j),
                                               _mm256_mul_pd(ry, _mm256_loadu_pd(s.ny + j)));
            const __m256d d = _mm256_mul_pd(_mm256_mul_pd(w, _mm256_mul_pd(rn, inv)), inv2pi);
            const __m256d lg = _mm256_fmsub_pd(half, log_pd(r2s), vlog_l0);
            const __m256d sl = _mm256_mul_pd(_mm256_mul_pd(w, lg), inv2pi);
            _mm256_storeu_pd(drow + j, _mm256_and_pd(d, ok));
            _mm256_storeu_pd(srow + j, _mm256_and_pd(sl, ok));
        }
        for (; j < s.n; ++j) {
            const double rx = s.x[j] - xi, ry = s.y[j] - yi;
            const double r2 = rx * rx + ry * ry;
            if (r2 > 0.0) {
                drow[j] = s.w[j] * ((rx * s.nx[j] + ry * s.ny[j]) / r2) * kInvTwoPi;
                srow[j] = s.w[j] * (0.5 * std::log(r2) - log_l0) * kInvTwoPi;
            } else {
                drow[j] = 0.0;
                srow[j] = 0.0;
            }
        }
    }
}

void green_eval_avx2(Targets t, BoundarySources s, const double* a, const double* b,
                     double log_scale, double* value, double* gx, double* gy) {
    const double log_l0 = std::log(log_scale);
    const __m256d vlog_l0 = _mm256_set1_pd(log_l0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t nv = s.n & ~std::size_t{3};
    for (std::size_t i = 0; i < t.n; ++i) {
        const double xi = t.x[i], yi = t.y[i];
        const __m256d vx = _mm256_set1_pd(xi), vy = _mm256_set1_pd(yi);
        __m256d acc_v = zero, acc_x = zero, acc_y = zero;
        std::size_t j = 0;
        for (; j < nv; j += 4) {
            const __m256d rx = _mm256_sub_pd(_mm256_loadu_pd(s.x + j), vx);
            const __m256d ry = _mm256_sub_pd(_mm256_loadu_pd(s.y + j), vy);
            const __m256d r2 = _mm256_fmadd_pd(rx, rx, _mm256_mul_pd(ry, ry));
            const __m256d ok = _mm256_cmp_pd(r2, zero, _CMP_GT_OQ);
            const __m256d r2s = _mm256_blendv_pd(one, r2, ok);
            const __m256d inv = _mm256_div_pd(one, r2s);
            const __m256d nxv = _mm256_loadu_pd(s.nx + j), nyv = _mm256_loadu_pd(s.ny + j);
            const __m256d av = _mm256_and_pd(_mm256_loadu_pd(a + j), ok);
            const __m256d bv = _mm256_and_pd(_mm256_loadu_pd(b + j), ok);
            const __m256d rn = _mm256_fmadd_pd(rx, nxv, _mm256_mul_pd(ry, nyv));
            const __m256d ai = _mm256_mul_pd(av, inv);
            const __m256d lg = _mm256_fmsub_pd(half, log_pd(r2s), vlog_l0);
            acc_v = _mm256_add_pd(acc_v, _mm256_fnmadd_pd(bv, lg, _mm256_mul_pd(ai, rn)));
            const __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(two, _mm256_mul_pd(ai, rn)), inv,
                                              _mm256_mul_pd(bv, inv));
            acc_x = _mm256_add_pd(acc_x, _mm256_fnmadd_pd(ai, nxv, _mm256_mul_pd(c, rx)));
            acc_y = _mm256_add_pd(acc_y, _mm256_fnmadd_pd(ai, nyv, _mm256_mul_pd(c, ry)));
        }
        double v = hsum(acc_v), dx = hsum(acc_x), dy = hsum(acc_y);
        for (; j < s.n; ++j) {
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

void blob_velocity_avx2(Targets t, const double* px, const double* py, const double* pw,
                        std::size_t np, double delta2, double* ux, double* uy) {
    const __m256d vd2 = _mm256_set1_pd(delta2);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t nv = np & ~std::size_t{3};
    for (std::size_t i = 0; i < t.n; ++i) {
        const double xi = t.x[i], yi = t.y[i];
        const __m256d vx = _mm256_set1_pd(xi), vy = _mm256_set1_pd(yi);
        __m256d acc_u = zero, acc_v = zero;
        std::size_t j = 0;
        for (; j < nv; j += 4) {
            const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(px + j));
            const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(py + j));
            const __m256d den = _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, vd2));
            const __m256d ok = _mm256_cmp_pd(den, zero, _CMP_GT_OQ);
            const __m256d c = _mm256_and_pd(
                _mm256_div_pd(_mm256_loadu_pd(pw + j), _mm256_blendv_pd(one, den, ok)), ok);
            acc_u = _mm256_fnmadd_pd(c, dy, acc_u);
            acc_v = _mm256_fmadd_pd(c, dx, acc_v);
        }
        double u = hsum(acc_u), v = hsum(acc_v);
        for (; j < np; ++j) {
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

const KernelTable& avx2_table() {
    static const KernelTable table{"avx2", &assemble_avx2, &green_eval_avx2,
                                   &blob_velocity_avx2};
    return table;
}

}  // namespace cavityflow::kernels
