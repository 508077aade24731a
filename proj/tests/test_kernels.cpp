#include "graphtrack/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace gk = graphtrack::kernels;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i], b[i], tol * std::max(1.0, std::abs(b[i]))) << "index " << i;
    }
}

}  // namespace

TEST(Kernels, ScalarIsAlwaysAvailableAndFirst) {
    const auto isas = gk::available_isas();
    ASSERT_FALSE(isas.empty());
    EXPECT_EQ(isas.front(), gk::Isa::scalar);
    EXPECT_NE(gk::table_for(gk::Isa::scalar), nullptr);
}

// Every compiled variant against the scalar reference, on lengths that cover
// full vectors, tails and the empty case.
TEST(Kernels, VariantsMatchScalar) {
    const auto& ref = gk::scalar_table();
    std::mt19937_64 rng(11);
    for (auto isa : gk::available_isas()) {
        const auto* t = gk::table_for(isa);
        ASSERT_NE(t, nullptr);
        SCOPED_TRACE(std::string(gk::to_string(isa)));
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 13u, 64u, 101u}) {
            for (std::size_t taps : {1u, 3u, 7u, 11u}) {
                const auto padded = random_values(rng, n + taps - 1);
                const auto k = random_values(rng, taps);
                std::vector<double> a(n), b(n);
                ref.convolve_row(padded.data(), n, k.data(), taps, a.data());
                t->convolve_row(padded.data(), n, k.data(), taps, b.data());
                expect_close(b, a, 1e-12);
            }
            const auto x = random_values(rng, n);
            auto y1 = random_values(rng, n);
            auto y2 = y1;
            ref.axpy(0.37, x.data(), y1.data(), n);
            t->axpy(0.37, x.data(), y2.data(), n);
            expect_close(y2, y1, 1e-12);

            const auto r0 = random_values(rng, n + 2, 0.0, 1.0);
            const auto r1 = random_values(rng, n + 2, 0.0, 1.0);
            const auto r2 = random_values(rng, n + 2, 0.0, 1.0);
            std::vector<double> s1(n), s2(n);
            ref.sobel_row(r0.data(), r1.data(), r2.data(), n, s1.data());
            t->sobel_row(r0.data(), r1.data(), r2.data(), n, s2.data());
            expect_close(s2, s1, 1e-12);

            std::vector<double> d1(n), d2(n);
            ref.diff_clamp(r0.data(), r1.data(), n, d1.data());
            t->diff_clamp(r0.data(), r1.data(), n, d2.data());
            EXPECT_EQ(d1, d2);
        }
    }
}

TEST(Kernels, ScalarSobelRowOnStepEdge) {
    // Columns 0..2 are 0, columns 3.. are 1; interior edge columns see 4.
    std::vector<double> row{0, 0, 0, 0, 1, 1, 1, 1};
    std::vector<double> out(6);
    gk::scalar_table().sobel_row(row.data(), row.data(), row.data(), 6, out.data());
    EXPECT_DOUBLE_EQ(out[2], 4.0);
    EXPECT_DOUBLE_EQ(out[3], 4.0);
    EXPECT_DOUBLE_EQ(out[0], 0.0);
    EXPECT_DOUBLE_EQ(out[5], 0.0);
}
