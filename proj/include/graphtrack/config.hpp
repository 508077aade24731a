#pragma once

#include "graphtrack/pipeline.hpp"
#include "graphtrack/synthbench.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace graphtrack::config {

enum class RunMode { track, bench, synth };

std::string_view to_string(RunMode mode) noexcept;

/// Acceptance thresholds applied by `bench --check` to the cells inside the
/// low-density, high-frame-rate, identical-object regime.
struct CheckThresholds {
    double min_obj_ratio = 0.95;
    double min_traj_ratio = 0.9;
    double max_density = 0.01;
    double max_step_multiple = 1.0;
};

struct RunConfig {
    RunMode mode = RunMode::track;
    std::vector<std::string> input;
    std::filesystem::path output_dir = "graphtrack_out";
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    bool check = false;
    bool dump_edges = false;

    int object_size_w = 5;  ///< w; scales the defaults of W, R range, distances
    TrackingParams tracking = TrackingParams::for_object_size(5);
    double frame_rate = 1.0;  ///< frames per second
    double scale = 1.0;       ///< length units per px
    double c_constant = 1.0;
    double pixel_sigma = 1.0;

    synthbench::SweepSpec sweep;
    CheckThresholds thresholds;
    synthbench::SynthConfig synth;  ///< single sequence for `--mode synth`
    double synth_density = 0.01;
};

/// Key, section and help text of every configuration entry, in echo order.
struct KeyInfo {
    std::string section;
    std::string key;
    std::string help;
};
const std::vector<KeyInfo>& keys();

/// Raw key/value pairs, e.g. from an INI file or command-line flags.
using RawValues = std::map<std::string, std::string>;

/// Reads an INI file with [section] headers. Every key must belong to the
/// section it appears in; unknown keys raise ConfigError naming them.
RawValues read_ini(const std::filesystem::path& path);

/**
 * Builds a configuration from defaults plus raw values.
 *
 * `w` is applied first, so W, R_min, R_max, maximum_distance and
 * minimum_diameter default to their multiples of it; explicit keys win.
 * Throws ConfigError naming the key for malformed or out-of-range values.
 */
RunConfig resolve(const RawValues& values);

/// Resolved value of every key as text, in keys() order. Numbers use the
/// shortest round-trip representation.
std::vector<std::pair<KeyInfo, std::string>> resolved_values(const RunConfig& config);

/// The resolved configuration as an INI file that resolve() reads back to the same values.
std::string to_ini(const RunConfig& config);

}  // namespace graphtrack::config
