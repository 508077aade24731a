#pragma once

#include "graphtrack/detection.hpp"
#include "graphtrack/linking.hpp"
#include "graphtrack/trajectory.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace graphtrack {

struct TrackingParams {
    detection::DetectionParams detection;
    linking::GraphWeights graph;
    trajectory::PlausibilityLimits limits;
    std::size_t threads = 0;  ///< per-frame detection workers, 0 = all cores

    /// Defaults for objects of approximate size w px: W = w, R in [w/4, w],
    /// maximum distance 10 w, minimum diameter w/2.
    static TrackingParams for_object_size(int w);
    void validate() const;
};

struct TrackResult {
    linking::FrameObjects objects;
    std::vector<linking::LinkEdge> edges;
    std::optional<linking::DominantAngle> dominant;
    std::vector<linking::Path> paths;
    std::vector<trajectory::Trajectory> trajectories;
};

/// Detection per frame (concurrently), then linking and plausibility splitting.
TrackResult track_frames(std::span<const GrayFrame> frames, const TrackingParams& params);

/// Linking and splitting for already detected objects.
TrackResult track_objects(linking::FrameObjects objects, const TrackingParams& params);

/// Loads the frames (concurrently) in the given order.
std::vector<GrayFrame> load_frames(std::span<const std::filesystem::path> paths, std::size_t threads = 0);

}  // namespace graphtrack
