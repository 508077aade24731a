#pragma once
// Pixel inner loops used by the band-pass filter and the Sobel operator.
//
// Every kernel exists as a scalar reference and, where the build and CPU allow,
// as a vectorized variant. Variants are selected at runtime through a table of
// function pointers; tests compare each available table against the scalar one.

#include <cstddef>
#include <string_view>
#include <vector>

namespace graphtrack::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;

    // out[i] = sum_k taps[k] * padded[i + k], i in [0, n). `padded` holds n + n_taps - 1 values.
    void (*convolve_row)(const double* padded, std::size_t n, const double* taps, std::size_t n_taps,
                         double* out);

    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    // 3x3 Sobel magnitude of the middle row. All three rows hold n + 2 values
    // (one replicated border sample on each side); out holds n values.
    void (*sobel_row)(const double* above, const double* middle, const double* below, std::size_t n,
                      double* out);

    // out[i] = max(a[i] - b[i], 0)
    void (*diff_clamp)(const double* a, const double* b, std::size_t n, double* out);
};

const KernelTable& scalar_table() noexcept;

/// Table for `isa`, or nullptr when it was not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa) noexcept;

/// Every table usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// Best available table. GRAPHTRACK_KERNELS=scalar|avx2|neon forces a choice
/// (falling back to scalar when the forced one is unavailable).
const KernelTable& active() noexcept;

}  // namespace graphtrack::kernels
