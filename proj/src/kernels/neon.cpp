// NEON variants (AArch64, two doubles per register). NEON is part of the
// AArch64 baseline, so no runtime check is needed beyond the build guard.

#include "kernels/kernel_decls.hpp"

#include <arm_neon.h>

#include <cmath>

namespace graphtrack::kernels::neon {

void convolve_row(const double* padded, std::size_t n, const double* taps, std::size_t n_taps, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc = vfmaq_n_f64(acc, vld1q_f64(padded + i + k), taps[k]);
        }
        vst1q_f64(out + i, acc);
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc = std::fma(taps[k], padded[i + k], acc);
        }
        out[i] = acc;
    }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), a));
    }
    for (; i < n; ++i) {
        y[i] = std::fma(a, x[i], y[i]);
    }
}

void sobel_row(const double* above, const double* middle, const double* below, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t a0 = vld1q_f64(above + i);
        const float64x2_t a1 = vld1q_f64(above + i + 1);
        const float64x2_t a2 = vld1q_f64(above + i + 2);
        const float64x2_t m0 = vld1q_f64(middle + i);
        const float64x2_t m2 = vld1q_f64(middle + i + 2);
        const float64x2_t b0 = vld1q_f64(below + i);
        const float64x2_t b1 = vld1q_f64(below + i + 1);
        const float64x2_t b2 = vld1q_f64(below + i + 2);
        const float64x2_t gx = vsubq_f64(vaddq_f64(vfmaq_n_f64(a2, m2, 2.0), b2),
                                         vaddq_f64(vfmaq_n_f64(a0, m0, 2.0), b0));
        const float64x2_t gy = vsubq_f64(vaddq_f64(vfmaq_n_f64(b0, b1, 2.0), b2),
                                         vaddq_f64(vfmaq_n_f64(a0, a1, 2.0), a2));
        vst1q_f64(out + i, vsqrtq_f64(vfmaq_f64(vmulq_f64(gy, gy), gx, gx)));
    }
    for (; i < n; ++i) {
        const double gx = (above[i + 2] + 2.0 * middle[i + 2] + below[i + 2]) -
                          (above[i] + 2.0 * middle[i] + below[i]);
        const double gy = (below[i] + 2.0 * below[i + 1] + below[i + 2]) -
                          (above[i] + 2.0 * above[i + 1] + above[i + 2]);
        out[i] = std::sqrt(gx * gx + gy * gy);
    }
}

void diff_clamp(const double* a, const double* b, std::size_t n, double* out) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vmaxq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), zero));
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out[i] = d > 0.0 ? d : 0.0;
    }
}

}  // namespace graphtrack::kernels::neon
