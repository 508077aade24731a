#include "graphtrack/pipeline.hpp"

#include "graphtrack/imaging.hpp"
#include "graphtrack/parallel.hpp"

#include <map>
#include <utility>

namespace graphtrack {

TrackingParams TrackingParams::for_object_size(int w) {
    TrackingParams p;
    p.detection.bandpass.object_size_w = w;
    p.detection.shape.r_min = 0.25 * w;
    p.detection.shape.r_max = w;
    p.graph = linking::GraphWeights::for_object_size(w);
    return p;
}

void TrackingParams::validate() const {
    detection.validate();
    graph.validate();
    limits.validate();
}

TrackResult track_objects(linking::FrameObjects objects, const TrackingParams& params) {
    params.validate();
    TrackResult result;
    result.objects = std::move(objects);
    result.edges = linking::build_edges(result.objects, params.graph);
    result.dominant = linking::assign_costs(result.edges, params.graph);

    std::map<std::pair<linking::ObjectRef, linking::ObjectRef>, double> cost;
    for (const auto& e : result.edges) {
        cost.emplace(std::pair{e.from, e.to}, e.total_cost);
    }
    // Plausibility splitting runs inside the claiming loop. Only the piece that
    // starts at the source is kept; objects after a split point stay available
    // and are found again from their own sources.
    auto refine = [&](const linking::Path& raw) {
        std::vector<detection::DetectedObject> chain;
        chain.reserve(raw.objects.size());
        for (const auto& ref : raw.objects) {
            chain.push_back(result.objects[static_cast<std::size_t>(ref.frame)][static_cast<std::size_t>(ref.id)]);
        }
        std::vector<linking::Path> pieces;
        for (auto& t : trajectory::plausibility_split(chain, params.limits, params.graph.min_track_length)) {
            if (t.objects.front().frame_index != raw.objects.front().frame) {
                break;
            }
            linking::Path piece;
            for (const auto& o : t.objects) {
                const linking::ObjectRef ref{o.frame_index, o.id};
                if (!piece.objects.empty()) {
                    piece.cost += cost.at({piece.objects.back(), ref});
                }
                piece.objects.push_back(ref);
            }
            pieces.push_back(std::move(piece));
            result.trajectories.push_back(std::move(t));
        }
        return pieces;
    };
    result.paths = linking::link_dijkstra(result.objects, result.edges, params.graph, refine);
    return result;
}

TrackResult track_frames(std::span<const GrayFrame> frames, const TrackingParams& params) {
    params.validate();
    for (const auto& f : frames) {
        params.detection.bandpass.validate_for(f);
    }
    linking::FrameObjects objects(frames.size());
    const auto& table = kernels::active();
    parallel_for(frames.size(), params.threads, [&](std::size_t i) {
        objects[i] = detection::detect_objects(frames[i], static_cast<int>(i), params.detection, table);
    });
    return track_objects(std::move(objects), params);
}

std::vector<GrayFrame> load_frames(std::span<const std::filesystem::path> paths, std::size_t threads) {
    std::vector<std::optional<GrayFrame>> slots(paths.size());
    parallel_for(paths.size(), threads, [&](std::size_t i) { slots[i] = imaging::load_frame(paths[i]); });
    std::vector<GrayFrame> frames;
    frames.reserve(paths.size());
    for (auto& s : slots) {
        frames.push_back(std::move(*s));
    }
    return frames;
}

}  // namespace graphtrack
