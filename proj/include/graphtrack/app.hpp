#pragma once

#include "graphtrack/config.hpp"

#include <iosfwd>

namespace graphtrack::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoTrajectories = 2;
inline constexpr int kExitCheckFailed = 3;

/// Detect, link and split the input frames; writes objects.csv,
/// trajectories.csv, summary.json, config.resolved.ini and, on request, edges.csv.
int run_track(const config::RunConfig& config, std::ostream& log);

/// Synthetic sweep; writes report.csv and, with `check`, check.json.
int run_bench(const config::RunConfig& config, std::ostream& log);

/// One synthetic sequence: frame_NNN.png files plus truth.csv.
int run_synth(const config::RunConfig& config, std::ostream& log);

/// Dispatches on config.mode. Library errors become kExitError with the
/// message on `log`.
int run(const config::RunConfig& config, std::ostream& log);

}  // namespace graphtrack::app
