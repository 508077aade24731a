#pragma once

#include "graphtrack/frame.hpp"
#include "graphtrack/pipeline.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphtrack::synthbench {

enum class VariationMode { identical, between_tracks, within_track };

std::string_view to_string(VariationMode mode) noexcept;
VariationMode parse_mode(std::string_view text);

struct SynthConfig {
    int frame_width = 125;
    int frame_height = 125;
    int n_objects = 16;  ///< expected objects per frame
    int n_frames = 20;
    double mean_diameter = 5.0;  ///< px
    double step_multiple = 1.0;  ///< mean step in units of mean_diameter
    VariationMode mode = VariationMode::identical;
    double property_std_fraction = 0.2;
    double noise_sigma = 0.0;  ///< additive Gaussian noise on rendered frames
    std::uint64_t seed = 1;
    int max_attempts = 2000;  ///< placement retries per track

    double density() const noexcept;
    double mean_step() const noexcept { return step_multiple * mean_diameter; }
    void validate() const;
};

/// Square frame and object count for a target density: up to 80 objects,
/// side between 125 and 400 px.
SynthConfig config_for_density(double density, double mean_diameter = 5.0);

struct TrueObject {
    int frame = 0;
    int track = 0;
    Point center;
    double radius = 0.0;
};

struct TrueTrack {
    int id = 0;
    double diameter = 0.0;       ///< planted mean for the track, px
    double speed = 0.0;          ///< px per frame
    double direction_deg = 0.0;  ///< degrees, 0 = +x
    int first_frame = 0;
    int length = 0;  ///< visible frames
};

struct GroundTruth {
    std::vector<std::vector<TrueObject>> frames;
    std::vector<TrueTrack> tracks;  ///< visible tracks only, ids 0..n-1
};

struct Sequence {
    std::vector<GrayFrame> frames;
    GroundTruth truth;
};

/**
 * Renders straight-moving discs over a steady stream of tracks.
 *
 * Tracks start anywhere in the frame padded by the longest possible travel, so
 * objects keep entering through the borders and the in-frame count stays near
 * n_objects. An object is drawn only while its disc lies inside the frame with
 * a 2 px margin; a track that leaves is retired. Overlap in any frame is
 * rejected by resampling; GenerationError reports the density reached when a
 * track cannot be placed within max_attempts.
 */
Sequence generate_sequence(const SynthConfig& config);

/// Intensity-1 disc with 2x2 supersampled coverage, combined with max.
void render_disc(GrayFrame& frame, const Point& center, double radius);

/// Smallest center distance minus radius sum over same-frame pairs (>= 0 means no overlap).
double overlap_margin(const GroundTruth& truth);

struct MatchResult {
    double object_ratio = 0.0;
    double false_positive_ratio = 0.0;
    std::size_t n_true = 0;
    std::size_t n_matched = 0;
    std::size_t n_detected = 0;
    /// For each frame and detected id: index into truth.frames[frame], or -1.
    std::vector<std::vector<int>> detected_to_truth;
};

/// Greedy one-to-one nearest-neighbor matching per frame within `tolerance` px.
MatchResult match_objects(const linking::FrameObjects& detected, const GroundTruth& truth, double tolerance);

struct TrajectoryScore {
    double trajectory_ratio = 0.0;
    double fragmentation = 0.0;
    std::size_t n_scored = 0;     ///< true tracks long enough to be found
    std::size_t n_recovered = 0;  ///< of those, with at least one mapped fragment
};

/// A found track as detected-object references (frame, id).
using FoundTrack = std::vector<linking::ObjectRef>;

/**
 * Largest-fragment coverage of each true track.
 *
 * A found track belongs to the true track owning most of its matched objects
 * (ties to the smaller id). Only true tracks visible for at least
 * min_track_length frames are scored.
 */
TrajectoryScore score_trajectories(std::span<const FoundTrack> found, const GroundTruth& truth,
                                   const MatchResult& match, int min_track_length);

struct RecognitionReport {
    double object_recognition_ratio = 0.0;
    double false_positive_ratio = 0.0;
    double trajectory_recognition_ratio = 0.0;
    double fragmentation_score = 0.0;
};

/// Generate, track and score one sequence. Detection runs single-threaded.
RecognitionReport run_replicate(const SynthConfig& config, const TrackingParams& params);

/// Tracks of a tracking result as object references, in output order.
std::vector<FoundTrack> found_tracks(const TrackResult& result);

struct SweepSpec {
    std::vector<double> densities{0.001, 0.01, 0.05, 0.1};
    std::vector<double> step_multiples{1.0, 2.0};
    std::vector<VariationMode> modes{VariationMode::identical, VariationMode::between_tracks,
                                     VariationMode::within_track};
    int replicates = 20;
    int n_frames = 20;
    double mean_diameter = 5.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    std::size_t threads = 0;

    void validate() const;
};

struct SweepRow {
    double density = 0.0;
    double step_multiple = 0.0;
    VariationMode mode = VariationMode::identical;
    int replicate_count = 0;
    double obj_ratio_mean = 0.0;
    double obj_ratio_std = 0.0;
    double fp_ratio_mean = 0.0;
    double traj_ratio_mean = 0.0;
    double traj_ratio_std = 0.0;
    double fragmentation_mean = 0.0;
    std::vector<RecognitionReport> replicates;
};

/// Seed of one replicate. Step multiples and modes share seeds, so cells of
/// one density differ only in the swept setting.
std::uint64_t replicate_seed(std::uint64_t base, std::size_t density_index, int replicate);

/// Every cell of the grid in density, step, mode order. Sample std (n - 1).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const TrackingParams& params);

/// Mean and sample std of the replicate reports; std is 0 for one replicate.
void summarize(SweepRow& row);

}  // namespace graphtrack::synthbench
