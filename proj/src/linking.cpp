#include "graphtrack/linking.hpp"

#include "graphtrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <string>
#include <tuple>

namespace graphtrack::linking {

GraphWeights GraphWeights::for_object_size(double w) {
    GraphWeights g;
    g.max_distance = 10.0 * w;
    g.min_diameter = 0.5 * w;
    return g;
}

void GraphWeights::validate() const {
    if (!(g_s >= 0.0 && g_r >= 0.0 && g_phi >= 0.0)) {
        throw InvalidInputError("graph weights must be >= 0");
    }
    if (!(g_s > 0.0 || g_r > 0.0 || g_phi > 0.0)) {
        throw InvalidInputError("at least one graph weight must be > 0");
    }
    if (!(max_distance > 0.0) || !std::isfinite(max_distance)) {
        throw InvalidInputError("maximum distance must be > 0");
    }
    if (!(min_diameter >= 0.0)) {
        throw InvalidInputError("minimum diameter must be >= 0");
    }
    if (min_track_length < 2) {
        throw InvalidInputError("minimum track length must be >= 2, got " + std::to_string(min_track_length));
    }
}

double direction_deg(const Point& from, const Point& to) noexcept {
    double deg = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
    if (deg < 0.0) {
        deg += 360.0;
    }
    return deg >= 360.0 ? deg - 360.0 : deg;
}

std::vector<LinkEdge> build_edges(const FrameObjects& objects, const GraphWeights& weights) {
    weights.validate();
    std::vector<LinkEdge> edges;
    for (std::size_t m = 0; m + 1 < objects.size(); ++m) {
        const auto& here = objects[m];
        const auto& next = objects[m + 1];
        for (std::size_t n = 0; n < here.size(); ++n) {
            if (2.0 * here[n].radius < weights.min_diameter) {
                continue;
            }
            for (std::size_t p = 0; p < next.size(); ++p) {
                if (2.0 * next[p].radius < weights.min_diameter) {
                    continue;
                }
                const double s = distance(here[n].centroid, next[p].centroid);
                if (s > weights.max_distance) {
                    continue;
                }
                LinkEdge e;
                e.from = {static_cast<int>(m), static_cast<int>(n)};
                e.to = {static_cast<int>(m + 1), static_cast<int>(p)};
                e.distance_s = s;
                e.radius_cost = std::abs(here[n].radius / next[p].radius - 1.0);
                e.angle_phi = direction_deg(here[n].centroid, next[p].centroid);
                edges.push_back(e);
            }
        }
    }
    return edges;
}

DominantAngle dominant_angle(std::span<const LinkEdge> edges) {
    if (edges.empty()) {
        throw NoDominantAngleError("no edges to take a dominant angle from");
    }
    DominantAngle result;
    for (const auto& e : edges) {
        // Bin b is centered on b * 2 degrees.
        const auto bin = static_cast<std::size_t>(std::floor((e.angle_phi + kAngleBinDeg / 2) / kAngleBinDeg)) % kAngleBins;
        result.histogram[bin] += e.distance_s;
    }
    const auto best = std::max_element(result.histogram.begin(), result.histogram.end());
    const double center = static_cast<double>(best - result.histogram.begin()) * kAngleBinDeg;
    result.phi_deg = std::fmod(center, 180.0);
    return result;
}

double angle_deviation(double phi_deg, double dominant_deg) noexcept {
    double phi = std::fmod(phi_deg, 180.0);
    double ref = dominant_deg;
    if (ref < 5.0 || ref > 175.0) {
        phi = std::fmod(phi + 90.0, 180.0);
        ref = std::fmod(ref + 90.0, 180.0);
    }
    return std::abs(phi / ref - 1.0);
}

double edge_cost(const LinkEdge& edge, std::optional<double> dominant_deg, const GraphWeights& weights) {
    double cost = weights.g_s * (edge.distance_s / weights.max_distance) + weights.g_r * edge.radius_cost;
    if (weights.g_phi > 0.0 && dominant_deg) {
        cost += weights.g_phi * angle_deviation(edge.angle_phi, *dominant_deg);
    }
    return cost;
}

std::vector<LinkEdge> nearest_edges(std::span<const LinkEdge> edges) {
    std::map<ObjectRef, std::size_t> best;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [it, inserted] = best.emplace(edges[i].from, i);
        if (!inserted) {
            const auto& cur = edges[it->second];
            if (edges[i].distance_s < cur.distance_s ||
                (edges[i].distance_s == cur.distance_s && edges[i].to < cur.to)) {
                it->second = i;
            }
        }
    }
    std::vector<std::size_t> keep;
    keep.reserve(best.size());
    for (const auto& [ref, i] : best) {
        keep.push_back(i);
    }
    std::sort(keep.begin(), keep.end());
    std::vector<LinkEdge> out;
    out.reserve(keep.size());
    for (std::size_t i : keep) {
        out.push_back(edges[i]);
    }
    return out;
}

std::optional<DominantAngle> assign_costs(std::vector<LinkEdge>& edges, const GraphWeights& weights) {
    std::optional<DominantAngle> phi;
    if (weights.g_phi > 0.0 && !edges.empty()) {
        phi = dominant_angle(nearest_edges(edges));
    }
    for (auto& e : edges) {
        e.angle_cost = phi ? angle_deviation(e.angle_phi, phi->phi_deg) : 0.0;
        e.total_cost = edge_cost(e, phi ? std::optional<double>(phi->phi_deg) : std::nullopt, weights);
    }
    return phi;
}

LinkGraph::LinkGraph(const FrameObjects& objects, std::span<const LinkEdge> edges) {
    offsets_.reserve(objects.size());
    for (std::size_t m = 0; m < objects.size(); ++m) {
        offsets_.push_back(refs_.size());
        for (std::size_t i = 0; i < objects[m].size(); ++i) {
            refs_.push_back({static_cast<int>(m), static_cast<int>(i)});
        }
    }
    std::vector<std::size_t> count(refs_.size() + 1, 0);
    for (const auto& e : edges) {
        ++count[node(e.from) + 1];
    }
    arc_begin_.assign(refs_.size() + 1, 0);
    for (std::size_t i = 0; i < refs_.size(); ++i) {
        arc_begin_[i + 1] = arc_begin_[i] + count[i + 1];
    }
    arcs_.resize(edges.size());
    std::vector<std::size_t> fill(arc_begin_.begin(), arc_begin_.end() - 1);
    for (const auto& e : edges) {
        arcs_[fill[node(e.from)]++] = {node(e.to), e.total_cost};
    }
    // Arcs in target order keep relaxation order independent of edge input order.
    for (std::size_t i = 0; i < refs_.size(); ++i) {
        std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(arc_begin_[i]),
                  arcs_.begin() + static_cast<std::ptrdiff_t>(arc_begin_[i + 1]),
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> chain(const std::vector<std::size_t>& pred, std::size_t node) {
    std::vector<std::size_t> seq;
    for (; node != kNone; node = pred[node]) {
        seq.push_back(node);
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

// Node numbers grow with object id inside a frame, so comparing node chains of
// equal length compares object id sequences.
bool chain_less(const std::vector<std::size_t>& pred, std::size_t a, std::size_t b) {
    return chain(pred, a) < chain(pred, b);
}

}  // namespace

Path best_path(const LinkGraph& graph, std::size_t source, const std::vector<char>& claimed) {
    const std::size_t n = graph.node_count();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> pred(n, kNone);
    std::vector<char> done(n, 0);

    using Key = std::tuple<double, int, std::size_t>;  // cost, frame, node
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, graph.ref(source).frame, source);

    std::size_t target = source;
    while (!queue.empty()) {
        const auto [d, frame, u] = queue.top();
        queue.pop();
        if (done[u] || d > dist[u]) {
            continue;
        }
        done[u] = 1;
        const int best_frame = graph.ref(target).frame;
        if (frame > best_frame || (frame == best_frame && (d < dist[target] || (d == dist[target] && chain_less(pred, u, target))))) {
            target = u;
        }
        for (const auto& arc : graph.out(u)) {
            if (claimed[arc.to] || done[arc.to]) {
                continue;
            }
            const double nd = d + arc.cost;
            if (nd < dist[arc.to]) {
                dist[arc.to] = nd;
                pred[arc.to] = u;
                queue.emplace(nd, graph.ref(arc.to).frame, arc.to);
            } else if (nd == dist[arc.to] && chain_less(pred, u, pred[arc.to])) {
                pred[arc.to] = u;
            }
        }
    }

    Path path;
    path.cost = dist[target];
    for (std::size_t node : chain(pred, target)) {
        path.objects.push_back(graph.ref(node));
    }
    return path;
}

std::vector<Path> link_dijkstra(const FrameObjects& objects, std::span<const LinkEdge> edges,
                                const GraphWeights& weights, const PathRefiner& refine) {
    weights.validate();
    const LinkGraph graph(objects, edges);
    std::vector<char> claimed(graph.node_count(), 0);
    std::vector<Path> paths;
    for (std::size_t source = 0; source < graph.node_count(); ++source) {
        if (claimed[source] || graph.out(source).empty()) {
            continue;
        }
        Path raw = best_path(graph, source, claimed);
        if (static_cast<int>(raw.objects.size()) < weights.min_track_length) {
            continue;
        }
        std::vector<Path> pieces;
        if (refine) {
            pieces = refine(raw);
        } else {
            pieces.push_back(std::move(raw));
        }
        for (auto& piece : pieces) {
            if (static_cast<int>(piece.objects.size()) < weights.min_track_length) {
                continue;
            }
            for (const auto& ref : piece.objects) {
                claimed[graph.node(ref)] = 1;
            }
            paths.push_back(std::move(piece));
        }
    }
    return paths;
}

}  // namespace graphtrack::linking
