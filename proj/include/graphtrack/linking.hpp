#pragma once

#include "graphtrack/detection.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace graphtrack::linking {

using detection::DetectedObject;

/// Objects of frame m live at index m; within a frame, object ids are indices.
using FrameObjects = std::vector<std::vector<DetectedObject>>;

struct GraphWeights {
    double g_s = 1.0;
    double g_r = 1.0;
    double g_phi = 2.0;
    double max_distance = 50.0;  ///< px, 10 w
    double min_diameter = 2.5;   ///< px, 0.5 w; smaller objects never enter the graph
    int min_track_length = 5;    ///< objects

    /// Table defaults scaled to an approximate object size w (px).
    static GraphWeights for_object_size(double w);
    void validate() const;
};

struct ObjectRef {
    int frame = 0;
    int id = 0;

    friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
    friend auto operator<=>(const ObjectRef&, const ObjectRef&) = default;
};

struct LinkEdge {
    ObjectRef from;
    ObjectRef to;  ///< to.frame == from.frame + 1
    double distance_s = 0.0;
    double radius_cost = 0.0;  ///< |R_from / R_to - 1|
    double angle_phi = 0.0;    ///< direction of to - from, degrees in [0, 360)
    double angle_cost = 0.0;   ///< |dphi - 1|, 0 when the angle term is disabled
    double total_cost = 0.0;
};

inline constexpr double kAngleBinDeg = 2.0;
inline constexpr std::size_t kAngleBins = 180;  // covers [0, 360)

struct DominantAngle {
    double phi_deg = 0.0;  ///< [0, 180)
    std::array<double, kAngleBins> histogram{};
};

/// Direction of (to - from) in degrees, [0, 360).
double direction_deg(const Point& from, const Point& to) noexcept;

/// All adjacent-frame pairs within max_distance, costs left at zero.
std::vector<LinkEdge> build_edges(const FrameObjects& objects, const GraphWeights& weights);

/// Distance-weighted 2 degree histogram of edge directions; throws
/// NoDominantAngleError on an empty list.
DominantAngle dominant_angle(std::span<const LinkEdge> edges);

/// |(phi mod 180) / Phi - 1|. Within 5 degrees of the 0/180 cut both angles
/// are rotated by 90 degrees first so the ratio stays finite.
double angle_deviation(double phi_deg, double dominant_deg) noexcept;

double edge_cost(const LinkEdge& edge, std::optional<double> dominant_deg, const GraphWeights& weights);

/// The shortest outgoing edge of every object that has one (ties to the lower
/// target id), in input order. Long edges between unrelated objects would
/// otherwise dominate a distance-weighted histogram.
std::vector<LinkEdge> nearest_edges(std::span<const LinkEdge> edges);

/// Fills angle_cost and total_cost of every edge. The dominant angle is taken
/// over nearest_edges and only when G_phi > 0 and there is at least one edge.
std::optional<DominantAngle> assign_costs(std::vector<LinkEdge>& edges, const GraphWeights& weights);

struct Path {
    std::vector<ObjectRef> objects;  ///< consecutive frames
    double cost = 0.0;
};

/**
 * Forward layered graph over all objects, with per-node outgoing edges.
 *
 * Nodes are numbered frame by frame; `node(ref)` maps an object reference to
 * its number.
 */
class LinkGraph {
public:
    LinkGraph(const FrameObjects& objects, std::span<const LinkEdge> edges);

    std::size_t node_count() const noexcept { return refs_.size(); }
    std::size_t node(ObjectRef ref) const { return offsets_.at(static_cast<std::size_t>(ref.frame)) + ref.id; }
    ObjectRef ref(std::size_t node) const { return refs_[node]; }

    struct Arc {
        std::size_t to;
        double cost;
    };
    std::span<const Arc> out(std::size_t node) const {
        return {arcs_.data() + arc_begin_[node], arc_begin_[node + 1] - arc_begin_[node]};
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<ObjectRef> refs_;
    std::vector<std::size_t> arc_begin_;
    std::vector<Arc> arcs_;
};

/**
 * Minimum-cost path from `source` to the farthest reachable frame.
 *
 * Nodes flagged in `claimed` are not entered. Equal-cost paths are resolved by
 * the lexicographically smaller object id sequence; among end nodes the one in
 * the latest frame wins, then the cheaper one.
 */
Path best_path(const LinkGraph& graph, std::size_t source, const std::vector<char>& claimed);

/// Cuts a raw path into the pieces worth keeping.
using PathRefiner = std::function<std::vector<Path>(const Path&)>;

/**
 * Paths of at least min_track_length objects.
 *
 * Sources are the first-frame objects, then every still unclaimed object in
 * frame order. Each raw path is passed through `refine` when given; only the
 * objects of returned pieces of at least min_track_length are claimed, the rest
 * stay available to later sources.
 */
std::vector<Path> link_dijkstra(const FrameObjects& objects, std::span<const LinkEdge> edges,
                                const GraphWeights& weights, const PathRefiner& refine = {});

}  // namespace graphtrack::linking
