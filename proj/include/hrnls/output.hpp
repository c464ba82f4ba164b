#pragma once

#include "hrnls/driver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hrnls {

/// File name used for the snapshot at time t, e.g. "snapshot_12.5.csv".
std::string snapshot_filename(double t);

/// Writes series.csv, trajectories.csv, snapshot_<t>.csv, counters.json and
/// meta.cfg into `outdir` (created if missing). Throws IoError naming the path.
void emit_results(const RunResult& result, const std::filesystem::path& outdir);

/// Reads a snapshot file written by emit_results.
Snapshot read_snapshot(const std::filesystem::path& path, double t);

/// Snapshots of a directory written by emit_results, ordered by time.
std::vector<Snapshot> read_snapshots(const std::filesystem::path& dir);

/// Parses series.csv back into records.
std::vector<StepRecord> read_series(const std::filesystem::path& path);

std::string counters_json(const RunResult& result);

} // namespace hrnls
