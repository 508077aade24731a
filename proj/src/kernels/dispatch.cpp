#include "kernels/kernel_decls.hpp"

#include <cstdlib>
#include <string>

namespace graphtrack::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, scalar::convolve_row, scalar::axpy, scalar::sobel_row,
                              scalar::diff_clamp};

#if defined(GRAPHTRACK_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, avx2::convolve_row, avx2::axpy, avx2::sobel_row, avx2::diff_clamp};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(GRAPHTRACK_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, neon::convolve_row, neon::axpy, neon::sobel_row, neon::diff_clamp};
#endif

const KernelTable& select_table() noexcept {
    const KernelTable* best = &kScalar;
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (const KernelTable* t = table_for(isa)) {
            best = t;
        }
    }
    if (const char* forced = std::getenv("GRAPHTRACK_KERNELS")) {
        const std::string name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == to_string(isa)) {
                const KernelTable* t = table_for(isa);
                return t ? *t : kScalar;
            }
        }
    }
    return *best;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return &kScalar;
        case Isa::avx2:
#if defined(GRAPHTRACK_HAVE_AVX2)
            return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
            return nullptr;
#endif
        case Isa::neon:
#if defined(GRAPHTRACK_HAVE_NEON)
            return &kNeon;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (table_for(isa) != nullptr) {
            out.push_back(isa);
        }
    }
    return out;
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select_table();
    return table;
}

}  // namespace graphtrack::kernels
