#include "graphtrack/synthbench.hpp"

#include "graphtrack/errors.hpp"
#include "graphtrack/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <tuple>

namespace graphtrack::synthbench {

namespace {

constexpr double kBorderMargin = 2.0;     // px between a visible disc and the frame edge
constexpr double kDrawClamp = 0.6;        // property draws are kept within mean * (1 +- this)
constexpr double kDirectionScale = 90.0;  // direction std = fraction * 90 degrees
constexpr int kMaxObjects = 80;
constexpr double kDensitySlack = 0.02;
constexpr int kMinSide = 125;
constexpr int kMaxSide = 400;

double disc_area(double diameter) { return std::numbers::pi * diameter * diameter / 4.0; }

struct Planted {
    int frame;
    Point center;
    double radius;
};

class PropertySampler {
public:
    PropertySampler(const SynthConfig& c, std::mt19937_64& rng) : c_(c), rng_(rng) {}

    double around(double mean) {
        if (c_.property_std_fraction == 0.0) {
            return mean;
        }
        std::normal_distribution<double> dist(mean, c_.property_std_fraction * mean);
        return std::clamp(dist(rng_), mean * (1.0 - kDrawClamp), mean * (1.0 + kDrawClamp));
    }

    double direction() {
        if (c_.property_std_fraction == 0.0) {
            return 0.0;
        }
        std::normal_distribution<double> dist(0.0, c_.property_std_fraction * kDirectionScale);
        return dist(rng_);
    }

private:
    const SynthConfig& c_;
    std::mt19937_64& rng_;
};

}  // namespace

std::string_view to_string(VariationMode mode) noexcept {
    switch (mode) {
        case VariationMode::identical: return "identical";
        case VariationMode::between_tracks: return "between_tracks";
        case VariationMode::within_track: return "within_track";
    }
    return "unknown";
}

VariationMode parse_mode(std::string_view text) {
    if (text == "identical") return VariationMode::identical;
    if (text == "between_tracks") return VariationMode::between_tracks;
    if (text == "within_track") return VariationMode::within_track;
    throw InvalidInputError("unknown variation mode '" + std::string(text) +
                            "' (expected identical, between_tracks or within_track)");
}

double SynthConfig::density() const noexcept {
    return n_objects * disc_area(mean_diameter) / (static_cast<double>(frame_width) * frame_height);
}

void SynthConfig::validate() const {
    if (frame_width < 16 || frame_height < 16) {
        throw InvalidInputError("synthetic frames must be at least 16x16");
    }
    if (n_objects < 1 || n_frames < 1) {
        throw InvalidInputError("need at least one object and one frame");
    }
    if (!(mean_diameter > 0.0) || !(step_multiple >= 0.0)) {
        throw InvalidInputError("mean diameter must be > 0 and step multiple >= 0");
    }
    if (!(property_std_fraction >= 0.0 && property_std_fraction < 1.0)) {
        throw InvalidInputError("property std fraction must lie in [0, 1)");
    }
    if (!(noise_sigma >= 0.0)) {
        throw InvalidInputError("noise sigma must be >= 0");
    }
    if (max_attempts < 1) {
        throw InvalidInputError("max attempts must be >= 1");
    }
    const double d = density();
    // Integer object counts and frame sides put nominal densities a little off target.
    if (d < 0.001 * (1.0 - kDensitySlack) || d > 0.10 * (1.0 + kDensitySlack)) {
        throw InvalidInputError("density " + std::to_string(d) + " outside [0.001, 0.10]");
    }
}

SynthConfig config_for_density(double density, double mean_diameter) {
    if (!(density > 0.0)) {
        throw InvalidInputError("density must be > 0");
    }
    const double a = disc_area(mean_diameter);
    const double max_area = static_cast<double>(kMaxSide) * kMaxSide;
    const int n = std::max(1, std::min(kMaxObjects, static_cast<int>(std::lround(density * max_area / a))));
    const int side = std::clamp(static_cast<int>(std::lround(std::sqrt(n * a / density))), kMinSide, kMaxSide);
    SynthConfig c;
    c.frame_width = side;
    c.frame_height = side;
    c.n_objects = std::max(1, static_cast<int>(std::lround(density * side * side / a)));
    c.mean_diameter = mean_diameter;
    return c;
}

void render_disc(GrayFrame& frame, const Point& center, double radius) {
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius - 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius - 1)));
    const int x1 = std::min(static_cast<int>(frame.width()) - 1, static_cast<int>(std::ceil(center.x + radius + 1)));
    const int y1 = std::min(static_cast<int>(frame.height()) - 1, static_cast<int>(std::ceil(center.y + radius + 1)));
    const double r2 = radius * radius;
    constexpr std::array<double, 2> offsets{-0.25, 0.25};
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            int inside = 0;
            for (double oy : offsets) {
                for (double ox : offsets) {
                    const double dx = x + ox - center.x;
                    const double dy = y + oy - center.y;
                    inside += dx * dx + dy * dy <= r2;
                }
            }
            if (inside > 0) {
                auto& v = frame(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
                v = std::max(v, inside / 4.0);
            }
        }
    }
}

Sequence generate_sequence(const SynthConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    PropertySampler sample(config, rng);
    const bool varies = config.mode != VariationMode::identical;
    const double w = config.frame_width;
    const double h = config.frame_height;
    const double mean_r = config.mean_diameter / 2.0;
    const double max_r = varies ? mean_r * (1.0 + kDrawClamp) : mean_r;
    const double max_step = varies ? config.mean_step() * (1.0 + kDrawClamp) : config.mean_step();

    // Start region: the frame padded by the longest possible travel.
    const double pad = (config.n_frames - 1) * max_step + max_r + kBorderMargin;
    std::uniform_real_distribution<double> start_x(-pad, w - 1 + pad);
    std::uniform_real_distribution<double> start_y(-pad, h - 1 + pad);
    const double visible_w = std::max(1.0, w - 1 - 2 * (mean_r + kBorderMargin));
    const double visible_h = std::max(1.0, h - 1 - 2 * (mean_r + kBorderMargin));
    const double region = (w - 1 + 2 * pad) * (h - 1 + 2 * pad);
    const auto n_tracks = static_cast<long>(std::lround(config.n_objects * region / (visible_w * visible_h)));

    auto visible = [&](const Point& p, double r) {
        return p.x - r >= kBorderMargin && p.y - r >= kBorderMargin && p.x + r <= w - 1 - kBorderMargin &&
               p.y + r <= h - 1 - kBorderMargin;
    };

    GroundTruth truth;
    truth.frames.resize(static_cast<std::size_t>(config.n_frames));
    std::vector<Planted> planted;
    for (long t = 0; t < n_tracks; ++t) {
        bool placed = false;
        for (int attempt = 0; attempt < config.max_attempts && !placed; ++attempt) {
            TrueTrack track;
            track.diameter = config.mode == VariationMode::between_tracks ? sample.around(config.mean_diameter)
                                                                          : config.mean_diameter;
            track.speed = config.mode == VariationMode::between_tracks ? sample.around(config.mean_step())
                                                                       : config.mean_step();
            track.direction_deg = config.mode == VariationMode::between_tracks ? sample.direction() : 0.0;
            Point p{start_x(rng), start_y(rng)};

            planted.clear();
            bool entered = false;
            for (int f = 0; f < config.n_frames; ++f) {
                double radius = track.diameter / 2.0;
                double speed = track.speed;
                double dir = track.direction_deg;
                if (config.mode == VariationMode::within_track) {
                    radius = sample.around(config.mean_diameter) / 2.0;
                    speed = sample.around(config.mean_step());
                    dir = sample.direction();
                }
                if (visible(p, radius)) {
                    planted.push_back({f, p, radius});
                    entered = true;
                } else if (entered) {
                    break;
                }
                const double rad = dir * std::numbers::pi / 180.0;
                p.x += speed * std::cos(rad);
                p.y += speed * std::sin(rad);
            }
            if (planted.empty()) {
                placed = true;  // never in view, nothing to render
                break;
            }
            const bool clear = std::all_of(planted.begin(), planted.end(), [&](const Planted& a) {
                const auto& others = truth.frames[static_cast<std::size_t>(a.frame)];
                return std::all_of(others.begin(), others.end(), [&](const TrueObject& b) {
                    return distance(a.center, b.center) >= a.radius + b.radius;
                });
            });
            if (!clear) {
                continue;
            }
            track.id = static_cast<int>(truth.tracks.size());
            track.first_frame = planted.front().frame;
            track.length = static_cast<int>(planted.size());
            for (const auto& a : planted) {
                truth.frames[static_cast<std::size_t>(a.frame)].push_back({a.frame, track.id, a.center, a.radius});
            }
            truth.tracks.push_back(track);
            placed = true;
        }
        if (!placed) {
            std::size_t count = 0;
            for (const auto& f : truth.frames) {
                count += f.size();
            }
            const double achieved =
                static_cast<double>(count) / config.n_frames * disc_area(config.mean_diameter) / (w * h);
            throw GenerationError("could not place track " + std::to_string(t) + " without overlap after " +
                                      std::to_string(config.max_attempts) + " attempts",
                                  achieved);
        }
    }

    Sequence seq;
    seq.frames.reserve(truth.frames.size());
    std::normal_distribution<double> noise(0.0, config.noise_sigma > 0.0 ? config.noise_sigma : 1.0);
    for (const auto& objects : truth.frames) {
        GrayFrame frame(static_cast<std::size_t>(config.frame_width), static_cast<std::size_t>(config.frame_height));
        for (const auto& o : objects) {
            render_disc(frame, o.center, o.radius);
        }
        if (config.noise_sigma > 0.0) {
            for (double& v : frame.values()) {
                v = std::max(0.0, v + noise(rng));
            }
        }
        seq.frames.push_back(std::move(frame));
    }
    seq.truth = std::move(truth);
    return seq;
}

double overlap_margin(const GroundTruth& truth) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& objects : truth.frames) {
        for (std::size_t i = 0; i < objects.size(); ++i) {
            for (std::size_t j = i + 1; j < objects.size(); ++j) {
                margin = std::min(margin, distance(objects[i].center, objects[j].center) -
                                              (objects[i].radius + objects[j].radius));
            }
        }
    }
    return margin;
}

MatchResult match_objects(const linking::FrameObjects& detected, const GroundTruth& truth, double tolerance) {
    MatchResult result;
    result.detected_to_truth.resize(detected.size());
    for (const auto& f : truth.frames) {
        result.n_true += f.size();
    }
    for (std::size_t m = 0; m < detected.size(); ++m) {
        const auto& dets = detected[m];
        result.n_detected += dets.size();
        auto& assign = result.detected_to_truth[m];
        assign.assign(dets.size(), -1);
        if (m >= truth.frames.size()) {
            continue;
        }
        const auto& truths = truth.frames[m];
        std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < dets.size(); ++i) {
            for (std::size_t j = 0; j < truths.size(); ++j) {
                const double d = distance(dets[i].centroid, truths[j].center);
                if (d <= tolerance) {
                    pairs.emplace_back(d, i, j);
                }
            }
        }
        std::sort(pairs.begin(), pairs.end());
        std::vector<char> taken(truths.size(), 0);
        for (const auto& [d, i, j] : pairs) {
            if (assign[i] < 0 && !taken[j]) {
                assign[i] = static_cast<int>(j);
                taken[j] = 1;
                ++result.n_matched;
            }
        }
    }
    if (result.n_true > 0) {
        result.object_ratio = static_cast<double>(result.n_matched) / static_cast<double>(result.n_true);
        result.false_positive_ratio =
            static_cast<double>(result.n_detected - result.n_matched) / static_cast<double>(result.n_true);
    }
    return result;
}

TrajectoryScore score_trajectories(std::span<const FoundTrack> found, const GroundTruth& truth,
                                   const MatchResult& match, int min_track_length) {
    // Best single-fragment hit count and fragment count per true track.
    std::vector<int> best(truth.tracks.size(), 0);
    std::vector<int> fragments(truth.tracks.size(), 0);
    for (const auto& track : found) {
        std::map<int, int> votes;
        for (const auto& ref : track) {
            const auto f = static_cast<std::size_t>(ref.frame);
            if (f >= match.detected_to_truth.size() || f >= truth.frames.size()) {
                continue;
            }
            const int j = match.detected_to_truth[f].at(static_cast<std::size_t>(ref.id));
            if (j >= 0) {
                ++votes[truth.frames[f][static_cast<std::size_t>(j)].track];
            }
        }
        if (votes.empty()) {
            continue;
        }
        // std::map iterates ids ascending, so ties keep the smaller id.
        auto owner = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it) {
            if (it->second > owner->second) {
                owner = it;
            }
        }
        const auto id = static_cast<std::size_t>(owner->first);
        best[id] = std::max(best[id], owner->second);
        ++fragments[id];
    }

    TrajectoryScore score;
    double coverage = 0.0;
    double frag = 0.0;
    for (std::size_t i = 0; i < truth.tracks.size(); ++i) {
        if (truth.tracks[i].length < min_track_length) {
            continue;
        }
        ++score.n_scored;
        coverage += static_cast<double>(best[i]) / truth.tracks[i].length;
        if (fragments[i] > 0) {
            ++score.n_recovered;
            frag += fragments[i];
        }
    }
    if (score.n_scored > 0) {
        score.trajectory_ratio = coverage / static_cast<double>(score.n_scored);
    }
    if (score.n_recovered > 0) {
        score.fragmentation = frag / static_cast<double>(score.n_recovered);
    }
    return score;
}

std::vector<FoundTrack> found_tracks(const TrackResult& result) {
    std::vector<FoundTrack> out;
    out.reserve(result.trajectories.size());
    for (const auto& t : result.trajectories) {
        FoundTrack track;
        track.reserve(t.objects.size());
        for (const auto& o : t.objects) {
            track.push_back({o.frame_index, o.id});
        }
        out.push_back(std::move(track));
    }
    return out;
}

RecognitionReport run_replicate(const SynthConfig& config, const TrackingParams& params) {
    const Sequence seq = generate_sequence(config);
    TrackingParams single = params;
    single.threads = 1;
    const TrackResult result = track_frames(seq.frames, single);
    const MatchResult match = match_objects(result.objects, seq.truth, config.mean_diameter / 2.0);
    const auto tracks = found_tracks(result);
    const TrajectoryScore score = score_trajectories(tracks, seq.truth, match, params.graph.min_track_length);
    return {match.object_ratio, match.false_positive_ratio, score.trajectory_ratio, score.fragmentation};
}

void SweepSpec::validate() const {
    if (densities.empty() || step_multiples.empty() || modes.empty()) {
        throw InvalidInputError("sweep grid must not be empty");
    }
    if (replicates < 1) {
        throw InvalidInputError("replicates must be >= 1");
    }
}

std::uint64_t replicate_seed(std::uint64_t base, std::size_t density_index, int replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(density_index), static_cast<std::uint32_t>(replicate)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void summarize(SweepRow& row) {
    const auto n = row.replicates.size();
    row.replicate_count = static_cast<int>(n);
    if (n == 0) {
        return;
    }
    auto stats = [&](auto field, double& mean, double* std_out) {
        double sum = 0.0;
        for (const auto& r : row.replicates) {
            sum += r.*field;
        }
        mean = sum / static_cast<double>(n);
        if (std_out) {
            double sq = 0.0;
            for (const auto& r : row.replicates) {
                sq += (r.*field - mean) * (r.*field - mean);
            }
            *std_out = n > 1 ? std::sqrt(sq / static_cast<double>(n - 1)) : 0.0;
        }
    };
    stats(&RecognitionReport::object_recognition_ratio, row.obj_ratio_mean, &row.obj_ratio_std);
    stats(&RecognitionReport::false_positive_ratio, row.fp_ratio_mean, nullptr);
    stats(&RecognitionReport::trajectory_recognition_ratio, row.traj_ratio_mean, &row.traj_ratio_std);
    stats(&RecognitionReport::fragmentation_score, row.fragmentation_mean, nullptr);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const TrackingParams& params) {
    spec.validate();
    params.validate();
    std::vector<SweepRow> rows;
    struct Task {
        std::size_t row;
        SynthConfig config;
    };
    std::vector<Task> tasks;
    for (std::size_t di = 0; di < spec.densities.size(); ++di) {
        for (std::size_t si = 0; si < spec.step_multiples.size(); ++si) {
            for (const auto mode : spec.modes) {
                SweepRow row;
                row.density = spec.densities[di];
                row.step_multiple = spec.step_multiples[si];
                row.mode = mode;
                row.replicates.resize(static_cast<std::size_t>(spec.replicates));
                rows.push_back(std::move(row));
                for (int r = 0; r < spec.replicates; ++r) {
                    SynthConfig c = config_for_density(spec.densities[di], spec.mean_diameter);
                    c.n_frames = spec.n_frames;
                    c.step_multiple = spec.step_multiples[si];
                    c.mode = mode;
                    c.noise_sigma = spec.noise_sigma;
                    c.seed = replicate_seed(spec.seed, di, r);
                    tasks.push_back({rows.size() - 1, c});
                }
            }
        }
    }
    std::vector<RecognitionReport> reports(tasks.size());
    parallel_for(tasks.size(), spec.threads,
                 [&](std::size_t i) { reports[i] = run_replicate(tasks[i].config, params); });
    std::vector<std::size_t> filled(rows.size(), 0);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& row = rows[tasks[i].row];
        row.replicates[filled[tasks[i].row]++] = reports[i];
    }
    for (auto& row : rows) {
        summarize(row);
    }
    return rows;
}

}  // namespace graphtrack::synthbench
