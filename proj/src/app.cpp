#include "graphtrack/app.hpp"

#include "graphtrack/errors.hpp"
#include "graphtrack/imaging.hpp"
#include "graphtrack/outputs.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <ostream>

namespace graphtrack::app {

namespace fs = std::filesystem;

namespace {

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IngestionError(dir, "cannot create output directory");
    }
}

std::string input_description(const std::vector<std::string>& input) {
    std::string out;
    for (const auto& s : input) {
        out += (out.empty() ? "" : ", ") + s;
    }
    return out.empty() ? "<none>" : out;
}

}  // namespace

int run_track(const config::RunConfig& config, std::ostream& log) {
    const auto inputs = imaging::resolve_inputs(config.input);
    if (inputs.empty()) {
        log << "error: no input frames match " << input_description(config.input) << '\n';
        return kExitError;
    }
    prepare_output_dir(config.output_dir);

    const auto frames = load_frames(inputs, config.threads);
    const auto result = track_frames(frames, config.tracking);

    const auto& dir = config.output_dir;
    outputs::atomic_write(dir / "objects.csv", outputs::objects_csv(result.objects));
    outputs::atomic_write(dir / "trajectories.csv", outputs::trajectories_csv(result.trajectories));
    if (config.dump_edges) {
        outputs::atomic_write(dir / "edges.csv", outputs::edges_csv(result.edges));
    }
    outputs::atomic_write(dir / "summary.json", outputs::summary_json(config, inputs, result).dump(2) + "\n");
    outputs::atomic_write(dir / "config.resolved.ini", config::to_ini(config));

    log << fmt::format("{} frames, {} trajectories -> {}\n", frames.size(), result.trajectories.size(),
                       dir.string());
    return result.trajectories.empty() ? kExitNoTrajectories : kExitOk;
}

int run_bench(const config::RunConfig& config, std::ostream& log) {
    prepare_output_dir(config.output_dir);
    const auto rows = synthbench::run_sweep(config.sweep, config.tracking);
    outputs::atomic_write(config.output_dir / "report.csv", outputs::report_csv(rows));
    outputs::atomic_write(config.output_dir / "config.resolved.ini", config::to_ini(config));
    log << fmt::format("{} cells -> {}\n", rows.size(), (config.output_dir / "report.csv").string());
    if (!config.check) {
        return kExitOk;
    }

    const auto cells = outputs::check_sweep(rows, config.thresholds);
    outputs::atomic_write(config.output_dir / "check.json",
                          outputs::check_json(cells, config.thresholds).dump(2) + "\n");
    if (cells.empty()) {
        log << "check failed: no identical-mode cell with density <= " << config.thresholds.max_density
            << " and step_multiple <= " << config.thresholds.max_step_multiple << '\n';
        return kExitCheckFailed;
    }
    bool passed = true;
    for (const auto& c : cells) {
        if (!c.obj_ok) {
            log << fmt::format("check failed: {} obj_ratio_mean {} < {}\n", outputs::cell_name(*c.row),
                               c.row->obj_ratio_mean, config.thresholds.min_obj_ratio);
        }
        if (!c.traj_ok) {
            log << fmt::format("check failed: {} traj_ratio_mean {} < {}\n", outputs::cell_name(*c.row),
                               c.row->traj_ratio_mean, config.thresholds.min_traj_ratio);
        }
        passed = passed && c.passed();
    }
    if (passed) {
        log << fmt::format("check passed: {} cells\n", cells.size());
    }
    return passed ? kExitOk : kExitCheckFailed;
}

int run_synth(const config::RunConfig& config, std::ostream& log) {
    prepare_output_dir(config.output_dir);
    const auto sequence = synthbench::generate_sequence(config.synth);
    for (std::size_t i = 0; i < sequence.frames.size(); ++i) {
        const auto target = config.output_dir / fmt::format("frame_{:03}.png", i);
        const fs::path temp = target.string() + ".tmp.png";
        imaging::save_frame(sequence.frames[i], temp);
        fs::rename(temp, target);
    }
    outputs::atomic_write(config.output_dir / "truth.csv", outputs::truth_csv(sequence.truth));
    outputs::atomic_write(config.output_dir / "config.resolved.ini", config::to_ini(config));
    log << fmt::format("{} frames, {} tracks -> {}\n", sequence.frames.size(), sequence.truth.tracks.size(),
                       config.output_dir.string());
    return kExitOk;
}

int run(const config::RunConfig& config, std::ostream& log) {
    try {
        switch (config.mode) {
            case config::RunMode::track: return run_track(config, log);
            case config::RunMode::bench: return run_bench(config, log);
            case config::RunMode::synth: return run_synth(config, log);
        }
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace graphtrack::app
