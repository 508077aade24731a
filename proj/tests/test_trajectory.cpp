#include "graphtrack/errors.hpp"
#include "graphtrack/trajectory.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace gt = graphtrack::trajectory;
using graphtrack::detection::DetectedObject;
using oracle::object_at;

namespace {

std::vector<DetectedObject> walk(const std::vector<double>& headings_deg, const std::vector<double>& steps,
                                 const std::vector<double>& radii) {
    std::vector<DetectedObject> out;
    double x = 100, y = 100;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        out.push_back(object_at(static_cast<int>(i), 0, x, y, radii[i]));
        if (i < steps.size()) {
            x += steps[i] * std::cos(headings_deg[i] * std::numbers::pi / 180.0);
            y += steps[i] * std::sin(headings_deg[i] * std::numbers::pi / 180.0);
        }
    }
    return out;
}

// Independent re-measurement of the four limits on a finished trajectory.
void expect_within_limits(const gt::Trajectory& t, const gt::PlausibilityLimits& lim) {
    const auto& o = t.objects;
    std::vector<double> s, phi, r;
    for (std::size_t i = 0; i < o.size(); ++i) {
        r.push_back(o[i].radius);
        if (i + 1 < o.size()) {
            const double dx = o[i + 1].centroid.x - o[i].centroid.x;
            const double dy = o[i + 1].centroid.y - o[i].centroid.y;
            s.push_back(std::hypot(dx, dy));
            phi.push_back(std::atan2(dy, dx));
        }
        if (i > 0) {
            EXPECT_EQ(o[i].frame_index, o[i - 1].frame_index + 1);
        }
    }
    auto rel_std = [](const std::vector<double>& v) {
        double m = 0, q = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        for (double x : v) q += (x - m) * (x - m);
        return std::sqrt(q / static_cast<double>(v.size())) / m;
    };
    EXPECT_LE(rel_std(r), lim.max_radius_std + 1e-12);
    EXPECT_LE(rel_std(s), lim.max_distance_std + 1e-12);
    double cs = 0, sn = 0;
    for (double a : phi) {
        cs += std::cos(a);
        sn += std::sin(a);
    }
    const double mean = std::atan2(sn, cs);
    double q = 0;
    for (double a : phi) {
        double d = std::abs(std::remainder(a - mean, 2 * std::numbers::pi)) * 180.0 / std::numbers::pi;
        EXPECT_LE(d, lim.max_angle_dev + 1e-9);
        q += d * d;
    }
    EXPECT_LE(std::sqrt(q / static_cast<double>(phi.size())), lim.max_angle_std + 1e-9);
}

}  // namespace

TEST(Split, StraightPathUnchanged) {
    const auto path = walk(std::vector<double>(19, 0.0), std::vector<double>(19, 5.0), std::vector<double>(20, 2.5));
    const auto parts = gt::plausibility_split(path, {}, 5);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_EQ(parts[0].objects.size(), 20u);
    EXPECT_EQ(parts[0].segment_distances.size(), 19u);
}

TEST(Split, NinetyDegreeKinkAtFrameTen) {
    std::vector<double> heading(19, 0.0);
    for (std::size_t i = 10; i < heading.size(); ++i) heading[i] = 90.0;
    const auto parts = gt::plausibility_split(walk(heading, std::vector<double>(19, 5.0), std::vector<double>(20, 2.5)),
                                              {}, 5);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].objects.front().frame_index, 0);
    EXPECT_EQ(parts[0].objects.back().frame_index, 10);
    EXPECT_EQ(parts[1].objects.front().frame_index, 11);
    EXPECT_EQ(parts[1].objects.back().frame_index, 19);
}

TEST(Split, RadiusTripledMidway) {
    std::vector<double> radii(20, 2.5);
    for (std::size_t i = 10; i < radii.size(); ++i) radii[i] = 7.5;
    const auto parts = gt::plausibility_split(walk(std::vector<double>(19, 0.0), std::vector<double>(19, 5.0), radii),
                                              {}, 5);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].objects.back().frame_index, 9);
    EXPECT_EQ(parts[1].objects.front().frame_index, 10);
}

TEST(Split, FullyImplausibleGivesNothing) {
    std::vector<double> heading;
    for (int i = 0; i < 9; ++i) heading.push_back(i % 2 ? 0.0 : 180.0);
    EXPECT_TRUE(gt::plausibility_split(walk(heading, std::vector<double>(9, 5.0), std::vector<double>(10, 2.5)), {}, 3)
                    .empty());
}

// Random wobbly paths: every fragment meets the limits, keeps order, and
// consists of objects of the input path.
TEST(Split, SoundnessAndOrder) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> turn(0.0, 20.0);
    std::uniform_real_distribution<double> step(1.0, 9.0);
    std::uniform_real_distribution<double> rad(1.5, 5.0);
    std::bernoulli_distribution jump(0.1);
    const gt::PlausibilityLimits lim;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 5 + trial % 30;
        std::vector<double> h, s, r;
        double heading = 0;
        for (int i = 0; i < n; ++i) {
            heading += jump(rng) ? 120.0 : turn(rng);
            h.push_back(heading);
            s.push_back(step(rng));
            r.push_back(jump(rng) ? 3 * rad(rng) : rad(rng));
        }
        r.push_back(rad(rng));
        const auto path = walk(h, s, r);
        std::size_t cursor = 0;
        for (const auto& part : gt::plausibility_split(path, lim, 3)) {
            EXPECT_GE(part.objects.size(), 3u);
            EXPECT_TRUE(gt::is_plausible(part, lim));
            expect_within_limits(part, lim);
            const int first = part.objects.front().frame_index;
            ASSERT_GE(first, static_cast<int>(cursor));
            for (std::size_t i = 0; i < part.objects.size(); ++i)
                EXPECT_EQ(part.objects[i].centroid, path[static_cast<std::size_t>(first) + i].centroid);
            cursor = static_cast<std::size_t>(part.objects.back().frame_index) + 1;
        }
    }
}

TEST(Kinematics, Examples) {
    const auto t = oracle::track_from({5, 5, 5}, {2, 2, 2, 2});
    const auto k = gt::kinematics(t, 10.0, 1.0);
    EXPECT_DOUBLE_EQ(k.mean_velocity, 50.0);
    EXPECT_DOUBLE_EQ(k.velocity_std, 0.0);
    EXPECT_DOUBLE_EQ(k.mean_diameter, 4.0);
    const auto scaled = gt::kinematics(t, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(scaled.mean_velocity, 5.0);
    EXPECT_DOUBLE_EQ(scaled.mean_diameter, 2.0);
    EXPECT_THROW(gt::kinematics(t, 0.0, 1.0), graphtrack::InvalidInputError);
}

TEST(Mobility, SingleSegmentClosedForm) {
    const auto m = gt::estimate_mobility(oracle::track_from({10}, {2, 2}), 1.0, 1.0);
    EXPECT_DOUBLE_EQ(m.mu, 20.0);
    EXPECT_DOUBLE_EQ(m.sigma_mu, 12.0);
    EXPECT_EQ(m.n_segments, 1);
}

TEST(Mobility, IdenticalSegments) {
    for (int n : {1, 4, 9, 16}) {
        std::vector<double> steps(static_cast<std::size_t>(n), 6.0);
        std::vector<double> radii(static_cast<std::size_t>(n + 1), 3.0);
        const auto m = gt::estimate_mobility(oracle::track_from(steps, radii), 2.0, 1.0);
        EXPECT_NEAR(m.mu, 9.0, 1e-12);
        EXPECT_NEAR(m.sigma_mu, 9.0 / 2.0 / std::sqrt(n), 1e-12);
    }
}

TEST(Mobility, DegenerateAndInvalid) {
    gt::Trajectory t = oracle::track_from({0.0}, {0.0, 0.0});
    EXPECT_THROW(gt::estimate_mobility(t), graphtrack::DegenerateErrorModelError);
    const std::vector<gt::Observation> obs{{1.0, 1.0}};
    EXPECT_THROW(gt::fit_mobility(obs, 0.0), graphtrack::InvalidInputError);
}

TEST(Mobility, ClosedFormMinimizesChiSquared) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> y(-20, 80), sig(0.5, 12), c(-3, 3);
    std::uniform_int_distribution<int> count(1, 25);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<gt::Observation> obs(static_cast<std::size_t>(count(rng)));
        for (auto& o : obs) o = {y(rng), sig(rng)};
        double cc = c(rng);
        if (std::abs(cc) < 0.1) cc = 1.0;
        const auto fit = gt::fit_mobility(obs, cc);
        const double best = oracle::chi_squared(obs, fit.mu, cc);
        EXPECT_NEAR(gt::chi_squared(obs, fit.mu, cc), best, 1e-9 * (1 + best));
        for (double f : {1 - 1e-6, 1 + 1e-6, 0.99, 1.01}) EXPECT_GE(oracle::chi_squared(obs, fit.mu * f, cc), best);
    }
}

TEST(Mobility, DuplicatedSegmentWithInflatedErrorIsNeutral) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> y(0, 50), sig(0.5, 10);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<gt::Observation> obs(6);
        for (auto& o : obs) o = {y(rng), sig(rng)};
        auto split = obs;
        const auto k = static_cast<std::size_t>(trial % 6);
        split[k].sigma *= std::sqrt(2.0);
        split.push_back(split[k]);
        const auto a = gt::fit_mobility(obs, 1.5);
        const auto b = gt::fit_mobility(split, 1.5);
        EXPECT_NEAR(a.mu, b.mu, 1e-12 * std::abs(a.mu));
        EXPECT_NEAR(a.sigma_mu, b.sigma_mu, 1e-12 * a.sigma_mu);
    }
}

// Planted mu with independent 1 px errors on s and R: coverage of 2 sigma.
TEST(Mobility, MonteCarloCoverage) {
    std::mt19937_64 rng(52);
    std::normal_distribution<double> err(0.0, 1.0);
    const double mu = 25.0, c = 2.0, radius = 5.0;
    const double step = mu * c / radius;
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> steps, radii;
        for (int m = 0; m < 19; ++m) {
            steps.push_back(step + err(rng));
            radii.push_back(radius + err(rng));
        }
        radii.push_back(radius);
        const auto fit = gt::estimate_mobility(oracle::track_from(steps, radii), c, 1.0);
        covered += std::abs(fit.mu - mu) <= 2 * fit.sigma_mu;
    }
    EXPECT_GE(covered, 90);
}
