#include "graphtrack/trajectory.hpp"

#include "graphtrack/errors.hpp"
#include "graphtrack/linking.hpp"

#include <cmath>
#include <numbers>

namespace graphtrack::trajectory {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(std::span<const double> v) {
    if (v.empty()) {
        return {};
    }
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    const double mean = sum / static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) {
        sq += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(sq / static_cast<double>(v.size()))};
}

double circular_mean(std::span<const double> angles) {
    double c = 0.0;
    double s = 0.0;
    for (double a : angles) {
        c += std::cos(a / kDeg);
        s += std::sin(a / kDeg);
    }
    double deg = std::atan2(s, c) * kDeg;
    return deg < 0.0 ? deg + 360.0 : deg;
}

double relative(const MeanStd& m) { return m.mean > 0.0 ? m.std / m.mean : 0.0; }

}  // namespace

void PlausibilityLimits::validate() const {
    if (!(max_angle_dev > 0.0 && max_angle_std > 0.0 && max_radius_std > 0.0 && max_distance_std > 0.0)) {
        throw InvalidInputError("plausibility limits must be > 0");
    }
}

double angle_difference(double a_deg, double b_deg) noexcept {
    const double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

Trajectory make_trajectory(std::vector<DetectedObject> objects) {
    Trajectory t;
    t.objects = std::move(objects);
    std::vector<double> radii;
    radii.reserve(t.objects.size());
    for (std::size_t i = 0; i < t.objects.size(); ++i) {
        radii.push_back(t.objects[i].radius);
        if (i + 1 < t.objects.size()) {
            t.segment_distances.push_back(distance(t.objects[i].centroid, t.objects[i + 1].centroid));
            t.segment_angles.push_back(linking::direction_deg(t.objects[i].centroid, t.objects[i + 1].centroid));
        }
    }
    const auto r = mean_std(radii);
    t.mean_radius = r.mean;
    t.radius_std = r.std;
    const auto s = mean_std(t.segment_distances);
    t.mean_distance = s.mean;
    t.distance_std = s.std;
    if (!t.segment_angles.empty()) {
        t.mean_angle = circular_mean(t.segment_angles);
        double sq = 0.0;
        for (double a : t.segment_angles) {
            const double d = angle_difference(a, t.mean_angle);
            sq += d * d;
        }
        t.angle_std = std::sqrt(sq / static_cast<double>(t.segment_angles.size()));
    }
    return t;
}

bool is_plausible(const Trajectory& traj, const PlausibilityLimits& limits) {
    for (double a : traj.segment_angles) {
        if (angle_difference(a, traj.mean_angle) > limits.max_angle_dev) {
            return false;
        }
    }
    return traj.angle_std <= limits.max_angle_std &&
           relative({traj.mean_radius, traj.radius_std}) <= limits.max_radius_std &&
           relative({traj.mean_distance, traj.distance_std}) <= limits.max_distance_std;
}

std::vector<Trajectory> plausibility_split(std::span<const DetectedObject> path, const PlausibilityLimits& limits,
                                           int min_track_length) {
    limits.validate();
    std::vector<Trajectory> out;
    if (path.empty()) {
        return out;
    }
    auto emit = [&](std::vector<DetectedObject>& objects) {
        if (static_cast<int>(objects.size()) >= min_track_length) {
            out.push_back(make_trajectory(std::move(objects)));
        }
        objects.clear();
    };

    std::vector<DetectedObject> current{path.front()};
    Trajectory stats = make_trajectory(current);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const auto& last = current.back();
        const auto& next = path[k];
        const double s = distance(last.centroid, next.centroid);
        const double phi = linking::direction_deg(last.centroid, next.centroid);

        bool ok = std::abs(next.radius - stats.mean_radius) <= limits.max_radius_std * stats.mean_radius;
        if (ok && !stats.segment_angles.empty()) {
            ok = angle_difference(phi, stats.mean_angle) <= limits.max_angle_dev &&
                 std::abs(s - stats.mean_distance) <= limits.max_distance_std * stats.mean_distance;
        }
        if (ok) {
            current.push_back(next);
            Trajectory candidate = make_trajectory(current);
            if (is_plausible(candidate, limits)) {
                stats = std::move(candidate);
                continue;
            }
            current.pop_back();
        }
        emit(current);
        current.push_back(next);
        stats = make_trajectory(current);
    }
    emit(current);
    return out;
}

Kinematics kinematics(const Trajectory& traj, double frame_rate, double scale) {
    if (!(frame_rate > 0.0) || !(scale > 0.0)) {
        throw InvalidInputError("frame rate and scale must be > 0");
    }
    std::vector<double> v;
    v.reserve(traj.segment_distances.size());
    for (double s : traj.segment_distances) {
        v.push_back(s * scale * frame_rate);
    }
    std::vector<double> d;
    d.reserve(traj.objects.size());
    for (const auto& o : traj.objects) {
        d.push_back(2.0 * o.radius * scale);
    }
    const auto vs = mean_std(v);
    const auto ds = mean_std(d);
    return {vs.mean, vs.std, ds.mean, ds.std};
}

std::vector<Observation> mobility_observations(const Trajectory& traj, double pixel_sigma) {
    if (!(pixel_sigma > 0.0)) {
        throw InvalidInputError("pixel sigma must be > 0");
    }
    std::vector<Observation> obs;
    obs.reserve(traj.segment_distances.size());
    for (std::size_t m = 0; m < traj.segment_distances.size(); ++m) {
        const double s = traj.segment_distances[m];
        const double r = traj.objects[m].radius;
        if (s + r == 0.0) {
            throw DegenerateErrorModelError("segment " + std::to_string(m) + " has s + R = 0");
        }
        obs.push_back({r * s, pixel_sigma * (s + r)});
    }
    return obs;
}

MobilityEstimate fit_mobility(std::span<const Observation> obs, double c_constant) {
    if (obs.empty()) {
        throw InvalidInputError("mobility fit needs at least one segment");
    }
    if (c_constant == 0.0 || !std::isfinite(c_constant)) {
        throw InvalidInputError("constant C must be finite and nonzero");
    }
    double wy = 0.0;
    double w = 0.0;
    for (const auto& o : obs) {
        if (!(o.sigma > 0.0)) {
            throw DegenerateErrorModelError("observation with sigma <= 0");
        }
        const double inv = 1.0 / (o.sigma * o.sigma);
        wy += o.y * inv;
        w += inv;
    }
    MobilityEstimate est;
    est.mu = wy / w / c_constant;
    est.sigma_mu = 1.0 / (std::abs(c_constant) * std::sqrt(w));
    est.c_constant = c_constant;
    est.n_segments = static_cast<int>(obs.size());
    return est;
}

double chi_squared(std::span<const Observation> obs, double mu, double c_constant) {
    double chi2 = 0.0;
    for (const auto& o : obs) {
        const double r = (o.y - mu * c_constant) / o.sigma;
        chi2 += r * r;
    }
    return chi2;
}

MobilityEstimate estimate_mobility(const Trajectory& traj, double c_constant, double pixel_sigma) {
    const auto obs = mobility_observations(traj, pixel_sigma);
    return fit_mobility(obs, c_constant);
}

}  // namespace graphtrack::trajectory
