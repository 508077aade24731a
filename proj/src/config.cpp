#include "graphtrack/config.hpp"

#include "graphtrack/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

namespace graphtrack::config {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = trim(std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos
                                                                                                : comma - start));
        if (!piece.empty()) {
            out.push_back(piece);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::string number(double v) { return fmt::format("{}", v); }

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) {
            out += ", ";
        }
        out += item;
    }
    return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) {
        throw ConfigError(key, what);
    }
}

struct Entry {
    KeyInfo info;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename Get>
Entry real_at(std::string section, std::string key, std::string help, Get access,
              std::function<bool(double)> valid, std::string rule) {
    return {{std::move(section), key, std::move(help)},
            [key, access, valid, rule](RunConfig& c, const std::string& v) {
                const double x = to_double(key, v);
                require(valid(x), key, "must be " + rule + ", got " + number(x));
                access(c) = x;
            },
            [access](const RunConfig& c) { return number(access(const_cast<RunConfig&>(c))); }};
}

template <typename Get>
Entry int_at(std::string section, std::string key, std::string help, Get access, long long lo, long long hi) {
    return {{std::move(section), key, std::move(help)},
            [key, access, lo, hi](RunConfig& c, const std::string& v) {
                const auto x = to_integer(key, v);
                require(x >= lo && x <= hi, key, fmt::format("must lie in [{}, {}], got {}", lo, hi, x));
                access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(x);
            },
            [access](const RunConfig& c) { return fmt::format("{}", access(const_cast<RunConfig&>(c))); }};
}

bool positive(double x) { return x > 0.0; }
bool nonnegative(double x) { return x >= 0.0; }

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        // run
        t.push_back({{"run", "mode", "track, bench or synth"},
                     [](RunConfig& c, const std::string& v) {
                         const auto m = trim(v);
                         if (m == "track") c.mode = RunMode::track;
                         else if (m == "bench") c.mode = RunMode::bench;
                         else if (m == "synth") c.mode = RunMode::synth;
                         else throw ConfigError("mode", "expected track, bench or synth, got '" + v + "'");
                     },
                     [](const RunConfig& c) { return std::string(to_string(c.mode)); }});
        t.push_back({{"run", "input", "frame directory, glob, or comma-separated file list"},
                     [](RunConfig& c, const std::string& v) { c.input = split_list(v); },
                     [](const RunConfig& c) { return join(c.input); }});
        t.push_back({{"run", "output_dir", "directory for all outputs"},
                     [](RunConfig& c, const std::string& v) {
                         require(!trim(v).empty(), "output_dir", "must not be empty");
                         c.output_dir = trim(v);
                     },
                     [](const RunConfig& c) { return c.output_dir.string(); }});
        t.push_back(int_at("run", "seed", "seed of all randomness (bench, synth)",
                           [](RunConfig& c) -> std::uint64_t& { return c.seed; }, 0, std::numeric_limits<long long>::max()));
        t.push_back(int_at("run", "threads", "worker threads, 0 = all cores",
                           [](RunConfig& c) -> std::size_t& { return c.threads; }, 0, 4096));
        t.push_back({{"run", "dump_edges", "also write edges.csv (track mode)"},
                     [](RunConfig& c, const std::string& v) { c.dump_edges = to_bool("dump_edges", v); },
                     [](const RunConfig& c) { return std::string(c.dump_edges ? "true" : "false"); }});

        // imaging
        t.push_back(int_at("imaging", "w", "approximate object size in px; scales the defaults below",
                           [](RunConfig& c) -> int& { return c.object_size_w; }, 1, 10000));
        t.push_back(int_at("imaging", "object_size_W", "band-pass object size W, px",
                           [](RunConfig& c) -> int& { return c.tracking.detection.bandpass.object_size_w; }, 1, 10000));
        t.push_back(real_at("imaging", "noise_level_N", "band-pass Gaussian std N, px",
                            [](RunConfig& c) -> double& { return c.tracking.detection.bandpass.noise_level_n; },
                            positive, "> 0"));
        t.push_back(real_at("imaging", "threshold", "fraction of the filtered frame maximum",
                            [](RunConfig& c) -> double& { return c.tracking.detection.bandpass.threshold; },
                            [](double x) { return x >= 0.0 && x < 1.0; }, "in [0, 1)"));
        t.push_back({{"imaging", "invert", "invert intensities first (dark objects)"},
                     [](RunConfig& c, const std::string& v) { c.tracking.detection.bandpass.invert = to_bool("invert", v); },
                     [](const RunConfig& c) {
                         return std::string(c.tracking.detection.bandpass.invert ? "true" : "false");
                     }});

        // detection
        t.push_back({{"detection", "shape", "circle or ring"},
                     [](RunConfig& c, const std::string& v) {
                         try {
                             c.tracking.detection.shape.shape = detection::parse_shape(trim(v));
                         } catch (const InvalidInputError& e) {
                             throw ConfigError("shape", e.what());
                         }
                     },
                     [](const RunConfig& c) { return std::string(detection::to_string(c.tracking.detection.shape.shape)); }});
        t.push_back(real_at("detection", "R_min", "smallest accepted radius, px",
                            [](RunConfig& c) -> double& { return c.tracking.detection.shape.r_min; }, positive, "> 0"));
        t.push_back(real_at("detection", "R_max", "largest accepted radius, px",
                            [](RunConfig& c) -> double& { return c.tracking.detection.shape.r_max; }, positive, "> 0"));
        t.push_back(real_at("detection", "delta_A", "circularity tolerance",
                            [](RunConfig& c) -> double& { return c.tracking.detection.shape.delta_a; }, positive, "> 0"));
        t.push_back(real_at("detection", "delta_C", "ring dark-center bound",
                            [](RunConfig& c) -> double& { return c.tracking.detection.shape.delta_c; }, positive, "> 0"));
        t.push_back(real_at("detection", "delta_I", "match index lower bound",
                            [](RunConfig& c) -> double& { return c.tracking.detection.shape.delta_i; },
                            [](double x) { return x > -1.0 && x < 1.0; }, "in (-1, 1)"));
        t.push_back(real_at("detection", "edge_margin", "radius edge pixels beyond the outermost object pixel, px",
                            [](RunConfig& c) -> double& { return c.tracking.detection.edge_margin; }, nonnegative,
                            ">= 0"));

        // linking
        t.push_back(real_at("linking", "G_s", "distance cost weight",
                            [](RunConfig& c) -> double& { return c.tracking.graph.g_s; }, nonnegative, ">= 0"));
        t.push_back(real_at("linking", "G_r", "radius cost weight",
                            [](RunConfig& c) -> double& { return c.tracking.graph.g_r; }, nonnegative, ">= 0"));
        t.push_back(real_at("linking", "G_phi", "angle cost weight",
                            [](RunConfig& c) -> double& { return c.tracking.graph.g_phi; }, nonnegative, ">= 0"));
        t.push_back(real_at("linking", "maximum_distance", "longest link between frames, px",
                            [](RunConfig& c) -> double& { return c.tracking.graph.max_distance; }, positive, "> 0"));
        t.push_back(real_at("linking", "minimum_diameter", "smallest linked object diameter, px",
                            [](RunConfig& c) -> double& { return c.tracking.graph.min_diameter; }, nonnegative, ">= 0"));
        t.push_back(int_at("linking", "minimum_track_length", "shortest kept trajectory, objects",
                           [](RunConfig& c) -> int& { return c.tracking.graph.min_track_length; }, 2, 1000000));

        // trajectory
        t.push_back(real_at("trajectory", "maximum_angle", "segment direction limit, degrees",
                            [](RunConfig& c) -> double& { return c.tracking.limits.max_angle_dev; }, positive, "> 0"));
        t.push_back(real_at("trajectory", "maximum_angle_std", "direction std limit, degrees",
                            [](RunConfig& c) -> double& { return c.tracking.limits.max_angle_std; }, positive, "> 0"));
        t.push_back(real_at("trajectory", "maximum_radius_std", "relative radius std limit",
                            [](RunConfig& c) -> double& { return c.tracking.limits.max_radius_std; }, positive, "> 0"));
        t.push_back(real_at("trajectory", "maximum_distance_std", "relative step std limit",
                            [](RunConfig& c) -> double& { return c.tracking.limits.max_distance_std; }, positive,
                            "> 0"));
        t.push_back(real_at("trajectory", "frame_rate", "frames per second",
                            [](RunConfig& c) -> double& { return c.frame_rate; }, positive, "> 0"));
        t.push_back(real_at("trajectory", "scale", "length units per px",
                            [](RunConfig& c) -> double& { return c.scale; }, positive, "> 0"));
        t.push_back(real_at("trajectory", "C", "constant of the mobility model",
                            [](RunConfig& c) -> double& { return c.c_constant; },
                            [](double x) { return x != 0.0; }, "nonzero"));
        t.push_back(real_at("trajectory", "pixel_sigma", "position error for the mobility fit, px",
                            [](RunConfig& c) -> double& { return c.pixel_sigma; }, positive, "> 0"));

        // synthetic sequences, shared by bench and synth
        t.push_back(int_at("synthbench", "n_frames", "frames per synthetic sequence",
                           [](RunConfig& c) -> int& { return c.sweep.n_frames; }, 1, 100000));
        t.push_back(real_at("synthbench", "mean_diameter", "mean planted diameter, px",
                            [](RunConfig& c) -> double& { return c.sweep.mean_diameter; }, positive, "> 0"));
        t.push_back(real_at("synthbench", "noise_sigma", "additive Gaussian noise",
                            [](RunConfig& c) -> double& { return c.sweep.noise_sigma; }, nonnegative, ">= 0"));
        t.push_back(real_at("synthbench", "property_std_fraction", "relative std of varied properties",
                            [](RunConfig& c) -> double& { return c.synth.property_std_fraction; },
                            [](double x) { return x >= 0.0 && x < 1.0; }, "in [0, 1)"));

        // bench
        t.push_back({{"bench", "densities", "comma-separated area fractions"},
                     [](RunConfig& c, const std::string& v) {
                         std::vector<double> d;
                         for (const auto& item : split_list(v)) {
                             const double x = to_double("densities", item);
                             require(x > 0.0 && x <= 1.0, "densities", "values must lie in (0, 1], got " + item);
                             d.push_back(x);
                         }
                         require(!d.empty(), "densities", "must not be empty");
                         c.sweep.densities = d;
                     },
                     [](const RunConfig& c) {
                         std::vector<std::string> s;
                         for (double x : c.sweep.densities) s.push_back(number(x));
                         return join(s);
                     }});
        t.push_back({{"bench", "step_multiples", "comma-separated mean steps in mean diameters"},
                     [](RunConfig& c, const std::string& v) {
                         std::vector<double> d;
                         for (const auto& item : split_list(v)) {
                             const double x = to_double("step_multiples", item);
                             require(x >= 0.0, "step_multiples", "values must be >= 0, got " + item);
                             d.push_back(x);
                         }
                         require(!d.empty(), "step_multiples", "must not be empty");
                         c.sweep.step_multiples = d;
                     },
                     [](const RunConfig& c) {
                         std::vector<std::string> s;
                         for (double x : c.sweep.step_multiples) s.push_back(number(x));
                         return join(s);
                     }});
        t.push_back({{"bench", "modes", "comma-separated: identical, between_tracks, within_track"},
                     [](RunConfig& c, const std::string& v) {
                         std::vector<synthbench::VariationMode> m;
                         for (const auto& item : split_list(v)) {
                             try {
                                 m.push_back(synthbench::parse_mode(item));
                             } catch (const InvalidInputError& e) {
                                 throw ConfigError("modes", e.what());
                             }
                         }
                         require(!m.empty(), "modes", "must not be empty");
                         c.sweep.modes = m;
                     },
                     [](const RunConfig& c) {
                         std::vector<std::string> s;
                         for (auto m : c.sweep.modes) s.emplace_back(synthbench::to_string(m));
                         return join(s);
                     }});
        t.push_back(int_at("bench", "replicates", "sequences per cell",
                           [](RunConfig& c) -> int& { return c.sweep.replicates; }, 1, 1000000));
        t.push_back(real_at("bench", "check_min_obj_ratio", "--check: minimum object ratio",
                            [](RunConfig& c) -> double& { return c.thresholds.min_obj_ratio; }, nonnegative, ">= 0"));
        t.push_back(real_at("bench", "check_min_traj_ratio", "--check: minimum trajectory ratio",
                            [](RunConfig& c) -> double& { return c.thresholds.min_traj_ratio; }, nonnegative,
                            ">= 0"));
        t.push_back(real_at("bench", "check_max_density", "--check: cells up to this density are checked",
                            [](RunConfig& c) -> double& { return c.thresholds.max_density; }, positive, "> 0"));
        t.push_back(real_at("bench", "check_max_step", "--check: cells up to this step multiple are checked",
                            [](RunConfig& c) -> double& { return c.thresholds.max_step_multiple; }, nonnegative,
                            ">= 0"));

        // synth
        t.push_back(real_at("synth", "density", "area fraction of the generated sequence",
                            [](RunConfig& c) -> double& { return c.synth_density; },
                            [](double x) { return x > 0.0 && x <= 1.0; }, "in (0, 1]"));
        t.push_back(real_at("synth", "step_multiple", "mean step in mean diameters",
                            [](RunConfig& c) -> double& { return c.synth.step_multiple; }, nonnegative, ">= 0"));
        t.push_back({{"synth", "variation_mode", "identical, between_tracks or within_track"},
                     [](RunConfig& c, const std::string& v) {
                         try {
                             c.synth.mode = synthbench::parse_mode(trim(v));
                         } catch (const InvalidInputError& e) {
                             throw ConfigError("variation_mode", e.what());
                         }
                     },
                     [](const RunConfig& c) { return std::string(synthbench::to_string(c.synth.mode)); }});
        return t;
    }();
    return table;
}

}  // namespace

std::string_view to_string(RunMode mode) noexcept {
    switch (mode) {
        case RunMode::track: return "track";
        case RunMode::bench: return "bench";
        case RunMode::synth: return "synth";
    }
    return "unknown";
}

const std::vector<KeyInfo>& keys() {
    static const std::vector<KeyInfo> list = [] {
        std::vector<KeyInfo> k;
        for (const auto& e : entries()) {
            k.push_back(e.info);
        }
        return k;
    }();
    return list;
}

RawValues read_ini(const std::filesystem::path& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", "cannot read " + path.string() + ": " + e.message() +
                                        (e.line() ? " (line " + std::to_string(e.line()) + ")" : ""));
    }
    RawValues values;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(section, "key outside of a [section] in " + path.string());
        }
        for (const auto& [key, node] : body) {
            const auto it = std::find_if(entries().begin(), entries().end(), [&](const Entry& e) {
                return e.info.key == key;
            });
            if (it == entries().end()) {
                throw ConfigError(section + "." + key, "unknown key in " + path.string());
            }
            if (it->info.section != section) {
                throw ConfigError(section + "." + key,
                                  "belongs to section [" + it->info.section + "] in " + path.string());
            }
            values[key] = node.data();
        }
    }
    return values;
}

RunConfig resolve(const RawValues& values) {
    std::set<std::string> known;
    for (const auto& e : entries()) {
        known.insert(e.info.key);
    }
    for (const auto& [key, value] : values) {
        if (!known.count(key)) {
            throw ConfigError(key, "unknown key");
        }
    }

    RunConfig c;
    if (const auto it = values.find("w"); it != values.end()) {
        const auto w = to_integer("w", it->second);
        require(w >= 1 && w <= 10000, "w", "must lie in [1, 10000], got " + it->second);
        c.object_size_w = static_cast<int>(w);
    }
    c.tracking = TrackingParams::for_object_size(c.object_size_w);
    for (const auto& e : entries()) {
        if (const auto it = values.find(e.info.key); it != values.end() && e.info.key != "w") {
            e.set(c, it->second);
        }
    }
    c.sweep.seed = c.seed;
    c.sweep.threads = c.threads;
    c.tracking.threads = c.threads;
    c.synth.seed = c.seed;
    c.synth.n_frames = c.sweep.n_frames;
    c.synth.mean_diameter = c.sweep.mean_diameter;
    c.synth.noise_sigma = c.sweep.noise_sigma;
    {
        auto sized = synthbench::config_for_density(c.synth_density, c.sweep.mean_diameter);
        c.synth.frame_width = sized.frame_width;
        c.synth.frame_height = sized.frame_height;
        c.synth.n_objects = sized.n_objects;
    }

    require(c.tracking.detection.shape.r_min < c.tracking.detection.shape.r_max, "R_min",
            "must be smaller than R_max (" + number(c.tracking.detection.shape.r_max) + ")");
    const auto& g = c.tracking.graph;
    require(g.g_s > 0.0 || g.g_r > 0.0 || g.g_phi > 0.0, "G_s", "at least one of G_s, G_r, G_phi must be > 0");
    try {
        c.tracking.validate();
    } catch (const InvalidInputError& e) {
        throw ConfigError("config", e.what());
    }
    return c;
}

std::vector<std::pair<KeyInfo, std::string>> resolved_values(const RunConfig& config) {
    std::vector<std::pair<KeyInfo, std::string>> out;
    for (const auto& e : entries()) {
        out.emplace_back(e.info, e.get(config));
    }
    return out;
}

std::string to_ini(const RunConfig& config) {
    std::string out;
    std::string section;
    for (const auto& [info, value] : resolved_values(config)) {
        if (info.section != section) {
            out += (section.empty() ? "" : "\n") + fmt::format("[{}]\n", info.section);
            section = info.section;
        }
        out += fmt::format("{} = {}\n", info.key, value);
    }
    return out;
}

}  // namespace graphtrack::config
