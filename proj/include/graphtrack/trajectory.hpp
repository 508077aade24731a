#pragma once

#include "graphtrack/detection.hpp"

#include <span>
#include <vector>

namespace graphtrack::trajectory {

using detection::DetectedObject;

struct PlausibilityLimits {
    double max_angle_dev = 30.0;    ///< degrees from the fragment's mean direction
    double max_angle_std = 45.0;    ///< degrees
    double max_radius_std = 0.5;    ///< std / mean
    double max_distance_std = 0.5;  ///< std / mean

    void validate() const;
};

struct Trajectory {
    std::vector<DetectedObject> objects;
    std::vector<double> segment_distances;  ///< px, one per consecutive pair
    std::vector<double> segment_angles;     ///< degrees in [0, 360)

    double mean_radius = 0.0;
    double radius_std = 0.0;
    double mean_distance = 0.0;
    double distance_std = 0.0;
    double mean_angle = 0.0;  ///< circular mean, degrees in [0, 360)
    double angle_std = 0.0;   ///< RMS deviation from the circular mean, degrees
};

/// Builds segments and statistics (population std) from consecutive objects.
Trajectory make_trajectory(std::vector<DetectedObject> objects);

/// Absolute difference of two directions, degrees in [0, 180].
double angle_difference(double a_deg, double b_deg) noexcept;

/// True when every limit holds for the trajectory as a whole.
bool is_plausible(const Trajectory& traj, const PlausibilityLimits& limits);

/**
 * Splits a linked path wherever the next object breaks the running fragment.
 *
 * The candidate object is first compared against the fragment so far: its
 * segment direction against the mean direction, its step and radius against
 * the mean step and radius (relative limits). The extended fragment must then
 * still pass is_plausible. On failure the fragment ends and a new one starts
 * at the candidate; the connecting segment is dropped. Fragments shorter than
 * min_track_length are discarded.
 */
std::vector<Trajectory> plausibility_split(std::span<const DetectedObject> path, const PlausibilityLimits& limits,
                                           int min_track_length);

struct Kinematics {
    double mean_velocity = 0.0;  ///< scale units per second
    double velocity_std = 0.0;
    double mean_diameter = 0.0;  ///< scale units
    double diameter_std = 0.0;
};

Kinematics kinematics(const Trajectory& traj, double frame_rate, double scale);

/// One fitted value y with its standard error.
struct Observation {
    double y = 0.0;
    double sigma = 0.0;
};

struct MobilityEstimate {
    double mu = 0.0;
    double sigma_mu = 0.0;
    double c_constant = 1.0;
    int n_segments = 0;
};

/// y_m = R_m s_m with sigma_y = pixel_sigma (s_m + R_m), R_m taken at the
/// segment's first object. Throws DegenerateErrorModelError when s + R = 0.
std::vector<Observation> mobility_observations(const Trajectory& traj, double pixel_sigma = 1.0);

/// Minimizer of chi_squared over mu: the error-weighted mean of y divided by C.
MobilityEstimate fit_mobility(std::span<const Observation> obs, double c_constant);

double chi_squared(std::span<const Observation> obs, double mu, double c_constant);

MobilityEstimate estimate_mobility(const Trajectory& traj, double c_constant = 1.0, double pixel_sigma = 1.0);

}  // namespace graphtrack::trajectory
