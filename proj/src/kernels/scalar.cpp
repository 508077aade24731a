#include "kernels/kernel_decls.hpp"

#include <cmath>

namespace graphtrack::kernels::scalar {

void convolve_row(const double* padded, std::size_t n, const double* taps, std::size_t n_taps, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc += taps[k] * padded[i + k];
        }
        out[i] = acc;
    }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void sobel_row(const double* above, const double* middle, const double* below, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        // Column i of the output sits at padded index i + 1.
        const double gx = (above[i + 2] + 2.0 * middle[i + 2] + below[i + 2]) -
                          (above[i] + 2.0 * middle[i] + below[i]);
        const double gy = (below[i] + 2.0 * below[i + 1] + below[i + 2]) -
                          (above[i] + 2.0 * above[i + 1] + above[i + 2]);
        out[i] = std::sqrt(gx * gx + gy * gy);
    }
}

void diff_clamp(const double* a, const double* b, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        out[i] = d > 0.0 ? d : 0.0;
    }
}

}  // namespace graphtrack::kernels::scalar
