#include "graphtrack/detection.hpp"

#include "graphtrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace graphtrack::detection {

std::string_view to_string(Shape shape) noexcept {
    return shape == Shape::circle ? "circle" : "ring";
}

Shape parse_shape(std::string_view text) {
    if (text == "circle") return Shape::circle;
    if (text == "ring") return Shape::ring;
    throw InvalidInputError("unknown shape '" + std::string(text) + "' (expected circle or ring)");
}

std::string_view to_string(Rejection reason) noexcept {
    switch (reason) {
        case Rejection::none: return "none";
        case Rejection::border: return "border";
        case Rejection::degenerate: return "degenerate";
        case Rejection::radius_undefined: return "radius_undefined";
        case Rejection::size: return "size";
        case Rejection::circularity: return "circularity";
        case Rejection::ring_center: return "ring_center";
        case Rejection::match_index: return "match_index";
    }
    return "unknown";
}

void ShapeFilterParams::validate() const {
    if (!(r_min > 0.0 && r_min < r_max)) {
        throw InvalidInputError("radius range requires 0 < R_min < R_max");
    }
    if (!(delta_a > 0.0) || !(delta_c > 0.0)) {
        throw InvalidInputError("delta_A and delta_C must be positive");
    }
    if (!(delta_i > -1.0 && delta_i < 1.0)) {
        throw InvalidInputError("delta_I must lie in (-1, 1)");
    }
}

void DetectionParams::validate() const {
    bandpass.validate();
    shape.validate();
    if (!(edge_margin >= 0.0)) {
        throw InvalidInputError("edge margin must be >= 0");
    }
}

std::vector<PixelSet> label_components(const GrayFrame& frame) {
    const int w = static_cast<int>(frame.width());
    const int h = static_cast<int>(frame.height());
    std::vector<char> visited(frame.size(), 0);
    std::vector<PixelSet> sets;
    std::vector<std::pair<int, int>> queue;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto start = static_cast<std::size_t>(y) * w + x;
            if (visited[start] || frame(x, y) <= 0.0) {
                continue;
            }
            PixelSet set;
            set.label = static_cast<int>(sets.size());
            queue.clear();
            queue.emplace_back(x, y);
            visited[start] = 1;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const auto [px, py] = queue[head];
                set.pixels.push_back({px, py, frame(px, py)});
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = px + dx[k];
                    const int ny = py + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
                        continue;
                    }
                    const auto idx = static_cast<std::size_t>(ny) * w + nx;
                    if (!visited[idx] && frame(nx, ny) > 0.0) {
                        visited[idx] = 1;
                        queue.emplace_back(nx, ny);
                    }
                }
            }
            sets.push_back(std::move(set));
        }
    }
    return sets;
}

Centroid compute_centroid(const PixelSet& pixels) {
    double total = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& p : pixels.pixels) {
        total += p.intensity;
        sx += p.intensity * p.x;
        sy += p.intensity * p.y;
    }
    if (!(total > 0.0)) {
        throw DegenerateObjectError("object " + std::to_string(pixels.label) + " has zero total intensity");
    }
    Centroid c;
    c.center = {sx / total, sy / total};
    c.distances.reserve(pixels.pixels.size());
    for (const auto& p : pixels.pixels) {
        c.distances.push_back(std::hypot(c.center.x - p.x, c.center.y - p.y));
    }
    return c;
}

SobelFrame sobel(const GrayFrame& frame, const kernels::KernelTable& table) {
    const std::size_t w = frame.width();
    const std::size_t h = frame.height();
    if (w < 3 || h < 3) {
        throw InvalidInputError("Sobel needs a frame of at least 3x3");
    }
    // Replicate-padded copies of every row, width w + 2.
    std::vector<double> padded((w + 2) * h);
    for (std::size_t y = 0; y < h; ++y) {
        const auto row = frame.row(y);
        double* dst = padded.data() + y * (w + 2);
        dst[0] = row.front();
        std::copy(row.begin(), row.end(), dst + 1);
        dst[w + 1] = row.back();
    }
    std::vector<double> out(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        const std::size_t above = y == 0 ? 0 : y - 1;
        const std::size_t below = y + 1 == h ? y : y + 1;
        table.sobel_row(padded.data() + above * (w + 2), padded.data() + y * (w + 2),
                        padded.data() + below * (w + 2), w, out.data() + y * w);
    }
    return SobelFrame(w, h, std::move(out));
}

double compute_radius(const Centroid& centroid, const SobelFrame& sobel, double edge_margin) {
    if (centroid.distances.empty()) {
        throw RadiusUndefinedError("object has no pixels");
    }
    const double mean = std::accumulate(centroid.distances.begin(), centroid.distances.end(), 0.0) /
                        static_cast<double>(centroid.distances.size());
    const double outer = *std::max_element(centroid.distances.begin(), centroid.distances.end()) + edge_margin;

    const auto& c = centroid.center;
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - outer)));
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - outer)));
    const int x1 = std::min(static_cast<int>(sobel.width()) - 1, static_cast<int>(std::ceil(c.x + outer)));
    const int y1 = std::min(static_cast<int>(sobel.height()) - 1, static_cast<int>(std::ceil(c.y + outer)));

    double weight = 0.0;
    double weighted = 0.0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double r = std::hypot(c.x - x, c.y - y);
            if (r > mean && r < outer) {
                const double s = sobel(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
                weight += s;
                weighted += s * r;
            }
        }
    }
    if (!(weight > 0.0)) {
        throw RadiusUndefinedError("no Sobel response in the edge annulus");
    }
    return weighted / weight;
}

double compute_match_index(const PixelSet& pixels, const Point& center, double radius, const GrayFrame& filtered,
                           Shape shape) {
    if (pixels.pixels.empty()) {
        return -1.0;
    }
    int bx0 = pixels.pixels.front().x;
    int bx1 = bx0;
    int by0 = pixels.pixels.front().y;
    int by1 = by0;
    double object_sum = 0.0;
    for (const auto& p : pixels.pixels) {
        bx0 = std::min(bx0, p.x);
        bx1 = std::max(bx1, p.x);
        by0 = std::min(by0, p.y);
        by1 = std::max(by1, p.y);
        object_sum += p.intensity;
    }
    const double object_mean = object_sum / static_cast<double>(pixels.pixels.size());

    const int pad = static_cast<int>(std::ceil(radius));
    const int x0 = std::max(0, bx0 - pad);
    const int y0 = std::max(0, by0 - pad);
    const int x1 = std::min(static_cast<int>(filtered.width()) - 1, bx1 + pad);
    const int y1 = std::min(static_cast<int>(filtered.height()) - 1, by1 + pad);
    const int box_w = x1 - x0 + 1;

    // Membership mask of the object inside the dilated box.
    std::vector<char> member(static_cast<std::size_t>(box_w) * (y1 - y0 + 1), 0);
    for (const auto& p : pixels.pixels) {
        if (p.intensity > 0.0) {
            member[static_cast<std::size_t>(p.y - y0) * box_w + (p.x - x0)] = 1;
        }
    }

    const double inner = shape == Shape::ring ? radius / 4.0 : -1.0;
    double in_sum = 0.0;
    std::size_t in_count = 0;
    std::size_t empty_in = 0;
    double out_sum = 0.0;
    std::size_t out_count = 0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double r = std::hypot(center.x - x, center.y - y);
            const double v = filtered(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
            if (r < radius) {
                if (r > inner) {
                    if (member[static_cast<std::size_t>(y - y0) * box_w + (x - x0)]) {
                        in_sum += v;
                        ++in_count;
                    } else {
                        ++empty_in;
                    }
                }
            } else if (v <= 0.0 || member[static_cast<std::size_t>(y - y0) * box_w + (x - x0)]) {
                // Nonzero pixels outside P_n belong to other objects and are skipped.
                out_sum += v;
                ++out_count;
            }
        }
    }
    const double in_mean = in_count ? in_sum / static_cast<double>(in_count) : 0.0;
    const double out_mean = out_count ? out_sum / static_cast<double>(out_count) : 0.0;
    const double penalty = static_cast<double>(empty_in) * object_mean;
    const double denom = in_mean + out_mean + penalty;
    if (!(denom > 0.0)) {
        return -1.0;
    }
    return (in_mean - out_mean - penalty) / denom;
}

FilterResult shape_filter(const DetectedObject& object, const ShapeFilterParams& params) {
    const double r = object.radius;
    if (!(r >= params.r_min && r <= params.r_max)) {
        return {false, Rejection::size};
    }
    if (params.shape == Shape::circle) {
        const double area = r * r * std::numbers::pi;
        if (!(std::abs(area / static_cast<double>(object.pixel_count) - 1.0) < params.delta_a)) {
            return {false, Rejection::circularity};
        }
    } else {
        const auto& d = object.pixel_distances;
        if (d.empty()) {
            return {false, Rejection::ring_center};
        }
        const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
        const double closest = *std::min_element(d.begin(), d.end());
        if (!(closest > 0.0) || !(mean / closest < params.delta_c)) {
            return {false, Rejection::ring_center};
        }
    }
    if (!(object.match_index > params.delta_i)) {
        return {false, Rejection::match_index};
    }
    return {true, Rejection::none};
}

bool touches_border(const PixelSet& pixels, std::size_t width, std::size_t height) noexcept {
    const int last_x = static_cast<int>(width) - 1;
    const int last_y = static_cast<int>(height) - 1;
    return std::any_of(pixels.pixels.begin(), pixels.pixels.end(), [&](const Pixel& p) {
        return p.x == 0 || p.y == 0 || p.x == last_x || p.y == last_y;
    });
}

std::vector<Candidate> analyze_frame(const GrayFrame& frame, int frame_index, const DetectionParams& params,
                                     const kernels::KernelTable& table) {
    params.validate();
    const GrayFrame source = params.bandpass.invert ? imaging::invert(frame) : frame;
    const GrayFrame filtered = imaging::filter_frame(source, params.bandpass, table);
    const SobelFrame gradient = sobel(source, table);

    std::vector<Candidate> out;
    for (const auto& set : label_components(filtered)) {
        Candidate cand;
        cand.object.frame_index = frame_index;
        cand.object.id = set.label;
        cand.object.pixel_count = set.pixels.size();
        if (params.discard_border_objects && touches_border(set, frame.width(), frame.height())) {
            cand.verdict = {false, Rejection::border};
            out.push_back(std::move(cand));
            continue;
        }
        try {
            auto centroid = compute_centroid(set);
            cand.object.centroid = centroid.center;
            cand.object.radius = compute_radius(centroid, gradient, params.edge_margin);
            cand.object.match_index =
                compute_match_index(set, centroid.center, cand.object.radius, filtered, params.shape.shape);
            cand.object.pixel_distances = std::move(centroid.distances);
            cand.verdict = shape_filter(cand.object, params.shape);
        } catch (const DegenerateObjectError&) {
            cand.verdict = {false, Rejection::degenerate};
        } catch (const RadiusUndefinedError&) {
            cand.verdict = {false, Rejection::radius_undefined};
        }
        out.push_back(std::move(cand));
    }
    return out;
}

std::vector<DetectedObject> detect_objects(const GrayFrame& frame, int frame_index, const DetectionParams& params,
                                           const kernels::KernelTable& table) {
    std::vector<DetectedObject> out;
    for (auto& cand : analyze_frame(frame, frame_index, params, table)) {
        if (cand.verdict.accepted) {
            cand.object.id = static_cast<int>(out.size());
            out.push_back(std::move(cand.object));
        }
    }
    return out;
}

}  // namespace graphtrack::detection
