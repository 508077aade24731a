#pragma once
// Independent reference implementations and random generators shared by the
// unit tests and the acceptance runner. Nothing here calls the library code it
// is compared against.

#include "graphtrack/frame.hpp"
#include "graphtrack/linking.hpp"
#include "graphtrack/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using graphtrack::GrayFrame;

inline GrayFrame random_frame(std::mt19937_64& rng, std::size_t w, std::size_t h) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(w * h);
    for (auto& x : v) {
        x = u(rng);
    }
    return GrayFrame(w, h, std::move(v));
}

inline GrayFrame random_binary(std::mt19937_64& rng, std::size_t w, std::size_t h, double p) {
    std::bernoulli_distribution on(p);
    std::uniform_real_distribution<double> level(0.1, 1.0);
    GrayFrame f(w, h);
    for (auto& x : f.values()) {
        x = on(rng) ? level(rng) : 0.0;
    }
    return f;
}

inline double at_clamped(const GrayFrame& f, long x, long y) {
    x = std::clamp<long>(x, 0, static_cast<long>(f.width()) - 1);
    y = std::clamp<long>(y, 0, static_cast<long>(f.height()) - 1);
    return f(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
}

// Direct 2-D convolution with a (2r+1)^2 kernel, replicate borders.
inline std::vector<double> direct_convolve(const GrayFrame& f, const std::vector<std::vector<double>>& k) {
    const long r = static_cast<long>(k.size() / 2);
    std::vector<double> out(f.size());
    for (long y = 0; y < static_cast<long>(f.height()); ++y) {
        for (long x = 0; x < static_cast<long>(f.width()); ++x) {
            double acc = 0.0;
            for (long j = -r; j <= r; ++j) {
                for (long i = -r; i <= r; ++i) {
                    acc += k[static_cast<std::size_t>(j + r)][static_cast<std::size_t>(i + r)] * at_clamped(f, x + i, y + j);
                }
            }
            out[static_cast<std::size_t>(y) * f.width() + static_cast<std::size_t>(x)] = acc;
        }
    }
    return out;
}

inline std::vector<std::vector<double>> gaussian_kernel_2d(double sigma) {
    const long r = static_cast<long>(std::ceil(3.0 * sigma));
    std::vector<std::vector<double>> k(static_cast<std::size_t>(2 * r + 1), std::vector<double>(2 * r + 1));
    double sum = 0.0;
    for (long j = -r; j <= r; ++j) {
        for (long i = -r; i <= r; ++i) {
            const double v = std::exp(-static_cast<double>(i * i + j * j) / (2.0 * sigma * sigma));
            k[static_cast<std::size_t>(j + r)][static_cast<std::size_t>(i + r)] = v;
            sum += v;
        }
    }
    for (auto& row : k) {
        for (auto& v : row) {
            v /= sum;
        }
    }
    return k;
}

inline std::vector<std::vector<double>> box_kernel_2d(int w) {
    const std::size_t n = static_cast<std::size_t>(2 * w + 1);
    return std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0 / static_cast<double>(n * n)));
}

// max(G_N * f - Box_{2W+1} * f, 0)
inline std::vector<double> bandpass(const GrayFrame& f, int object_size_w, double noise_level) {
    const auto g = direct_convolve(f, gaussian_kernel_2d(noise_level));
    const auto b = direct_convolve(f, box_kernel_2d(object_size_w));
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(g[i] - b[i], 0.0);
    }
    return out;
}

inline std::vector<double> sobel(const GrayFrame& f) {
    const std::vector<std::vector<double>> kx{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    const std::vector<std::vector<double>> ky{{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    const auto gx = direct_convolve(f, kx);
    const auto gy = direct_convolve(f, ky);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::hypot(gx[i], gy[i]);
    }
    return out;
}

// Largest |a - b| / max(|b|, 1) over all entries. Frame values lie in [0, 1],
// so the floor of 1 measures error relative to the signal scale where the
// clamped band-pass output itself is zero.
inline double max_relative_error(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1.0));
    }
    return worst;
}

// Recursive 4-neighbor flood fill. Components are returned in order of their
// first pixel in raster order, each as a sorted set of (x, y).
using Component = std::set<std::pair<int, int>>;

inline std::vector<Component> flood_fill_components(const GrayFrame& f) {
    const int w = static_cast<int>(f.width());
    const int h = static_cast<int>(f.height());
    std::vector<int> seen(f.size(), 0);
    std::vector<Component> out;
    std::function<void(int, int, Component&)> fill = [&](int x, int y, Component& c) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        const auto i = static_cast<std::size_t>(y * w + x);
        if (seen[i] || f(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == 0.0) return;
        seen[i] = 1;
        c.emplace(x, y);
        fill(x + 1, y, c);
        fill(x - 1, y, c);
        fill(x, y + 1, c);
        fill(x, y - 1, c);
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto i = static_cast<std::size_t>(y * w + x);
            if (!seen[i] && f(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) != 0.0) {
                out.emplace_back();
                fill(x, y, out.back());
            }
        }
    }
    return out;
}

// Area coverage of a disc over each pixel by n x n point sampling.
inline void add_disc(GrayFrame& f, double cx, double cy, double r, double sign = 1.0, int n = 8) {
    for (std::size_t y = 0; y < f.height(); ++y) {
        for (std::size_t x = 0; x < f.width(); ++x) {
            int inside = 0;
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    const double px = static_cast<double>(x) - 0.5 + (i + 0.5) / n;
                    const double py = static_cast<double>(y) - 0.5 + (j + 0.5) / n;
                    inside += (px - cx) * (px - cx) + (py - cy) * (py - cy) <= r * r;
                }
            }
            f(x, y) = std::max(0.0, f(x, y) + sign * inside / static_cast<double>(n * n));
        }
    }
}

// Exhaustive search for the path a source claims: every forward path through
// unclaimed nodes, ranked by latest end frame, then lower cost, then the
// lexicographically smaller id sequence.
struct BrutePath {
    std::vector<graphtrack::linking::ObjectRef> objects;
    double cost = 0.0;
};

inline BrutePath exhaustive_best_path(std::span<const graphtrack::linking::LinkEdge> edges,
                                      graphtrack::linking::ObjectRef source,
                                      const std::set<graphtrack::linking::ObjectRef>& claimed) {
    using graphtrack::linking::ObjectRef;
    BrutePath best{{source}, 0.0};
    std::vector<ObjectRef> current{source};
    std::function<void(double)> walk = [&](double cost) {
        const auto last = current.back();
        const bool better = current.back().frame > best.objects.back().frame ||
                            (current.back().frame == best.objects.back().frame &&
                             (cost < best.cost || (cost == best.cost && current < best.objects)));
        if (better) {
            best = {current, cost};
        }
        for (const auto& e : edges) {
            if (e.from == last && !claimed.count(e.to)) {
                current.push_back(e.to);
                walk(cost + e.total_cost);
                current.pop_back();
            }
        }
    };
    walk(0.0);
    return best;
}

// Whole claiming loop without refinement, driven by exhaustive_best_path.
inline std::vector<BrutePath> exhaustive_linking(const graphtrack::linking::FrameObjects& objects,
                                                 std::span<const graphtrack::linking::LinkEdge> edges,
                                                 int min_track_length) {
    using graphtrack::linking::ObjectRef;
    std::set<ObjectRef> claimed;
    std::vector<BrutePath> out;
    for (int m = 0; m < static_cast<int>(objects.size()); ++m) {
        for (int id = 0; id < static_cast<int>(objects[static_cast<std::size_t>(m)].size()); ++id) {
            const ObjectRef source{m, id};
            const bool has_out = std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.from == source; });
            if (claimed.count(source) || !has_out) {
                continue;
            }
            auto path = exhaustive_best_path(edges, source, claimed);
            if (static_cast<int>(path.objects.size()) < min_track_length) {
                continue;
            }
            claimed.insert(path.objects.begin(), path.objects.end());
            out.push_back(std::move(path));
        }
    }
    return out;
}

inline graphtrack::detection::DetectedObject object_at(int frame, int id, double x, double y, double r) {
    graphtrack::detection::DetectedObject o;
    o.frame_index = frame;
    o.id = id;
    o.centroid = {x, y};
    o.radius = r;
    o.pixel_count = 1;
    return o;
}

// Random layered instance: up to max_per_frame objects per frame in a box.
inline graphtrack::linking::FrameObjects random_layers(std::mt19937_64& rng, int frames, int max_per_frame,
                                                       double extent) {
    std::uniform_int_distribution<int> count(1, max_per_frame);
    std::uniform_real_distribution<double> pos(0.0, extent);
    std::uniform_real_distribution<double> rad(2.0, 4.0);
    graphtrack::linking::FrameObjects objects(static_cast<std::size_t>(frames));
    for (int m = 0; m < frames; ++m) {
        const int n = count(rng);
        for (int id = 0; id < n; ++id) {
            objects[static_cast<std::size_t>(m)].push_back(object_at(m, id, pos(rng), pos(rng), rad(rng)));
        }
    }
    return objects;
}

// Sum of squared normalized residuals, written out independently of the library.
inline double chi_squared(std::span<const graphtrack::trajectory::Observation> obs, double mu, double c) {
    double sum = 0.0;
    for (const auto& o : obs) {
        const double r = (o.y - mu * c) / o.sigma;
        sum += r * r;
    }
    return sum;
}

// Straight track along +x with the given per-segment steps and per-object radii.
inline graphtrack::trajectory::Trajectory track_from(const std::vector<double>& steps, const std::vector<double>& radii) {
    std::vector<graphtrack::detection::DetectedObject> objects;
    double x = 10.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        objects.push_back(object_at(static_cast<int>(i), 0, x, 20.0, radii[i]));
        if (i < steps.size()) {
            x += steps[i];
        }
    }
    return graphtrack::trajectory::make_trajectory(std::move(objects));
}

// Average ranks with ties; Spearman rho as Pearson correlation of the ranks.
inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
        i = j + 1;
    }
    return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) { ma += ra[i]; mb += rb[i]; }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return (saa == 0 || sbb == 0) ? 0.0 : sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
