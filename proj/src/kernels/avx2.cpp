// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include "kernels/kernel_decls.hpp"

#include <immintrin.h>

#include <cmath>

namespace graphtrack::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void convolve_row(const double* padded, std::size_t n, const double* taps, std::size_t n_taps, double* out) {
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (std::size_t k = 0; k < n_taps; ++k) {
            const __m256d w = _mm256_broadcast_sd(taps + k);
            acc0 = _mm256_fmadd_pd(w, _mm256_loadu_pd(padded + i + k), acc0);
            acc1 = _mm256_fmadd_pd(w, _mm256_loadu_pd(padded + i + k + kLanes), acc1);
        }
        _mm256_storeu_pd(out + i, acc0);
        _mm256_storeu_pd(out + i + kLanes, acc1);
    }
    for (; i + kLanes <= n; i += kLanes) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc = _mm256_fmadd_pd(_mm256_broadcast_sd(taps + k), _mm256_loadu_pd(padded + i + k), acc);
        }
        _mm256_storeu_pd(out + i, acc);
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
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) {
        y[i] = std::fma(a, x[i], y[i]);
    }
}

void sobel_row(const double* above, const double* middle, const double* below, std::size_t n, double* out) {
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d a0 = _mm256_loadu_pd(above + i);
        const __m256d a1 = _mm256_loadu_pd(above + i + 1);
        const __m256d a2 = _mm256_loadu_pd(above + i + 2);
        const __m256d m0 = _mm256_loadu_pd(middle + i);
        const __m256d m2 = _mm256_loadu_pd(middle + i + 2);
        const __m256d b0 = _mm256_loadu_pd(below + i);
        const __m256d b1 = _mm256_loadu_pd(below + i + 1);
        const __m256d b2 = _mm256_loadu_pd(below + i + 2);

        const __m256d right = _mm256_add_pd(_mm256_fmadd_pd(two, m2, a2), b2);
        const __m256d left = _mm256_add_pd(_mm256_fmadd_pd(two, m0, a0), b0);
        const __m256d gx = _mm256_sub_pd(right, left);
        const __m256d down = _mm256_add_pd(_mm256_fmadd_pd(two, b1, b0), b2);
        const __m256d up = _mm256_add_pd(_mm256_fmadd_pd(two, a1, a0), a2);
        const __m256d gy = _mm256_sub_pd(down, up);
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_fmadd_pd(gx, gx, _mm256_mul_pd(gy, gy))));
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
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_max_pd(d, zero));
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out[i] = d > 0.0 ? d : 0.0;
    }
}

}  // namespace graphtrack::kernels::avx2
