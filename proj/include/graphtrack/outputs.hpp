#pragma once

#include "graphtrack/config.hpp"
#include "graphtrack/pipeline.hpp"
#include "graphtrack/synthbench.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace graphtrack::outputs {

/// Writes to a temporary sibling, then renames over `target`.
void atomic_write(const std::filesystem::path& target, std::string_view content);

// CSV tables: header row, '.' decimals, shortest round-trip numbers.

/// frame,x,y,radius_px,pixel_count,match_index
std::string objects_csv(const linking::FrameObjects& objects);

/// track_id,frame,x,y,radius_px,segment_distance_px,segment_angle_deg.
/// Segment fields describe the step to the next object and stay empty on a
/// track's last row.
std::string trajectories_csv(std::span<const trajectory::Trajectory> trajectories);

/// frame,from_id,to_id,s,dR,phi,cost
std::string edges_csv(std::span<const linking::LinkEdge> edges);

/// The trajectory schema for the planted tracks plus track_id_true.
std::string truth_csv(const synthbench::GroundTruth& truth);

/// One row per sweep cell.
std::string report_csv(std::span<const synthbench::SweepRow> rows);

/// Config echo, input list, counts and per-track kinematics and mobility.
nlohmann::ordered_json summary_json(const config::RunConfig& config, std::span<const std::filesystem::path> inputs,
                            const TrackResult& result);

struct CellCheck {
    const synthbench::SweepRow* row = nullptr;
    bool obj_ok = true;
    bool traj_ok = true;

    bool passed() const noexcept { return obj_ok && traj_ok; }
};

/// Cells of the identical mode with density and step inside the thresholds.
std::vector<CellCheck> check_sweep(std::span<const synthbench::SweepRow> rows,
                                   const config::CheckThresholds& thresholds);

std::string cell_name(const synthbench::SweepRow& row);

nlohmann::ordered_json check_json(std::span<const CellCheck> cells, const config::CheckThresholds& thresholds);

}  // namespace graphtrack::outputs
