#pragma once

#include "graphtrack/kernels.hpp"

namespace graphtrack::kernels {

namespace scalar {
void convolve_row(const double* padded, std::size_t n, const double* taps, std::size_t n_taps, double* out);
void axpy(double a, const double* x, double* y, std::size_t n);
void sobel_row(const double* above, const double* middle, const double* below, std::size_t n, double* out);
void diff_clamp(const double* a, const double* b, std::size_t n, double* out);
}  // namespace scalar

#if defined(GRAPHTRACK_HAVE_AVX2)
namespace avx2 {
void convolve_row(const double* padded, std::size_t n, const double* taps, std::size_t n_taps, double* out);
void axpy(double a, const double* x, double* y, std::size_t n);
void sobel_row(const double* above, const double* middle, const double* below, std::size_t n, double* out);
void diff_clamp(const double* a, const double* b, std::size_t n, double* out);
}  // namespace avx2
#endif

#if defined(GRAPHTRACK_HAVE_NEON)
namespace neon {
void convolve_row(const double* padded, std::size_t n, const double* taps, std::size_t n_taps, double* out);
void axpy(double a, const double* x, double* y, std::size_t n);
void sobel_row(const double* above, const double* middle, const double* below, std::size_t n, double* out);
void diff_clamp(const double* a, const double* b, std::size_t n, double* out);
}  // namespace neon
#endif

}  // namespace graphtrack::kernels
