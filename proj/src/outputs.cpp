#include "graphtrack/outputs.hpp"

#include "graphtrack/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <unistd.h>

namespace graphtrack::outputs {

namespace fs = std::filesystem;

void atomic_write(const fs::path& target, std::string_view content) {
    const fs::path temp = target.string() + fmt::format(".tmp{}", ::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IngestionError(temp, "cannot open for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IngestionError(temp, "write failed");
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IngestionError(target, "cannot rename temporary file into place");
    }
}

std::string objects_csv(const linking::FrameObjects& objects) {
    std::string out = "frame,x,y,radius_px,pixel_count,match_index\n";
    for (const auto& frame : objects) {
        for (const auto& o : frame) {
            out += fmt::format("{},{},{},{},{},{}\n", o.frame_index, o.centroid.x, o.centroid.y, o.radius,
                               o.pixel_count, o.match_index);
        }
    }
    return out;
}

std::string trajectories_csv(std::span<const trajectory::Trajectory> trajectories) {
    std::string out = "track_id,frame,x,y,radius_px,segment_distance_px,segment_angle_deg\n";
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
        const auto& traj = trajectories[t];
        for (std::size_t i = 0; i < traj.objects.size(); ++i) {
            const auto& o = traj.objects[i];
            out += fmt::format("{},{},{},{},{},", t, o.frame_index, o.centroid.x, o.centroid.y, o.radius);
            if (i < traj.segment_distances.size()) {
                out += fmt::format("{},{}\n", traj.segment_distances[i], traj.segment_angles[i]);
            } else {
                out += ",\n";
            }
        }
    }
    return out;
}

std::string edges_csv(std::span<const linking::LinkEdge> edges) {
    std::string out = "frame,from_id,to_id,s,dR,phi,cost\n";
    for (const auto& e : edges) {
        out += fmt::format("{},{},{},{},{},{},{}\n", e.from.frame, e.from.id, e.to.id, e.distance_s, e.radius_cost,
                           e.angle_phi, e.total_cost);
    }
    return out;
}

std::string truth_csv(const synthbench::GroundTruth& truth) {
    std::vector<std::vector<synthbench::TrueObject>> tracks(truth.tracks.size());
    for (const auto& frame : truth.frames) {
        for (const auto& o : frame) {
            tracks.at(static_cast<std::size_t>(o.track)).push_back(o);
        }
    }
    std::string out = "track_id,frame,x,y,radius_px,segment_distance_px,segment_angle_deg,track_id_true\n";
    for (const auto& track : tracks) {
        for (std::size_t i = 0; i < track.size(); ++i) {
            const auto& o = track[i];
            out += fmt::format("{},{},{},{},{},", o.track, o.frame, o.center.x, o.center.y, o.radius);
            if (i + 1 < track.size()) {
                const auto& next = track[i + 1].center;
                out += fmt::format("{},{},", distance(o.center, next), linking::direction_deg(o.center, next));
            } else {
                out += ",,";
            }
            out += fmt::format("{}\n", o.track);
        }
    }
    return out;
}

std::string report_csv(std::span<const synthbench::SweepRow> rows) {
    std::string out =
        "density,step_multiple,mode,replicate_count,obj_ratio_mean,obj_ratio_std,fp_ratio_mean,"
        "traj_ratio_mean,traj_ratio_std,fragmentation_mean\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.density, r.step_multiple, synthbench::to_string(r.mode),
                           r.replicate_count, r.obj_ratio_mean, r.obj_ratio_std, r.fp_ratio_mean, r.traj_ratio_mean,
                           r.traj_ratio_std, r.fragmentation_mean);
    }
    return out;
}

nlohmann::ordered_json summary_json(const config::RunConfig& config, std::span<const fs::path> inputs,
                            const TrackResult& result) {
    nlohmann::ordered_json j;
    auto& echo = j["config"];
    for (const auto& [info, value] : config::resolved_values(config)) {
        echo[info.section][info.key] = value;
    }
    auto& files = j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& p : inputs) {
        files.push_back(p.string());
    }

    std::size_t n_objects = 0;
    for (const auto& frame : result.objects) {
        n_objects += frame.size();
    }
    std::size_t n_rows = 0;
    for (const auto& t : result.trajectories) {
        n_rows += t.objects.size();
    }
    j["frames"] = result.objects.size();
    j["objects"] = n_objects;
    j["edges"] = result.edges.size();
    j["dominant_angle_deg"] = result.dominant ? nlohmann::ordered_json(result.dominant->phi_deg) : nlohmann::ordered_json(nullptr);
    j["trajectory_count"] = result.trajectories.size();
    j["trajectory_rows"] = n_rows;

    auto& tracks = j["trajectories"] = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < result.trajectories.size(); ++t) {
        const auto& traj = result.trajectories[t];
        const auto k = trajectory::kinematics(traj, config.frame_rate, config.scale);
        nlohmann::ordered_json row{
            {"track_id", t},
            {"first_frame", traj.objects.front().frame_index},
            {"length", traj.objects.size()},
            {"mean_radius_px", traj.mean_radius},
            {"mean_step_px", traj.mean_distance},
            {"mean_angle_deg", traj.mean_angle},
            {"angle_std_deg", traj.angle_std},
            {"mean_velocity", k.mean_velocity},
            {"velocity_std", k.velocity_std},
            {"mean_diameter", k.mean_diameter},
            {"diameter_std", k.diameter_std},
        };
        try {
            const auto m = trajectory::estimate_mobility(traj, config.c_constant, config.pixel_sigma);
            row["mu"] = m.mu;
            row["sigma_mu"] = m.sigma_mu;
            row["n_segments"] = m.n_segments;
        } catch (const DegenerateErrorModelError&) {
            row["mu"] = nullptr;
            row["sigma_mu"] = nullptr;
            row["n_segments"] = traj.segment_distances.size();
        }
        tracks.push_back(std::move(row));
    }
    return j;
}

std::vector<CellCheck> check_sweep(std::span<const synthbench::SweepRow> rows,
                                   const config::CheckThresholds& thresholds) {
    std::vector<CellCheck> cells;
    for (const auto& r : rows) {
        if (r.mode != synthbench::VariationMode::identical || r.density > thresholds.max_density ||
            r.step_multiple > thresholds.max_step_multiple) {
            continue;
        }
        cells.push_back({&r, r.obj_ratio_mean >= thresholds.min_obj_ratio,
                         r.traj_ratio_mean >= thresholds.min_traj_ratio});
    }
    return cells;
}

std::string cell_name(const synthbench::SweepRow& row) {
    return fmt::format("density={} step_multiple={} mode={}", row.density, row.step_multiple,
                       synthbench::to_string(row.mode));
}

nlohmann::ordered_json check_json(std::span<const CellCheck> cells, const config::CheckThresholds& thresholds) {
    nlohmann::ordered_json j;
    j["thresholds"] = {{"min_obj_ratio", thresholds.min_obj_ratio},
                       {"min_traj_ratio", thresholds.min_traj_ratio},
                       {"max_density", thresholds.max_density},
                       {"max_step_multiple", thresholds.max_step_multiple}};
    bool all = !cells.empty();
    auto& list = j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        all = all && c.passed();
        list.push_back({{"density", c.row->density},
                        {"step_multiple", c.row->step_multiple},
                        {"mode", synthbench::to_string(c.row->mode)},
                        {"obj_ratio_mean", c.row->obj_ratio_mean},
                        {"traj_ratio_mean", c.row->traj_ratio_mean},
                        {"obj_ratio_ok", c.obj_ok},
                        {"traj_ratio_ok", c.traj_ok},
                        {"passed", c.passed()}});
    }
    j["passed"] = all;
    return j;
}

}  // namespace graphtrack::outputs
