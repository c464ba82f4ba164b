#pragma once

#include "hrnls/driver.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace hrnls {

struct SweepRow {
    double rtol = 0.0;
    bool ok = false;
    std::size_t initial_cells = 0;
    double final_l2_error = 0.0;
    RunCounters counters;
    double seconds = 0.0;
    std::string error_kind; ///< empty when ok
    std::string error;
};

/// One run per RTOL value; rows come back in input order. A failing run is
/// reported in its row and the remaining runs continue. `workers` = 0 picks
/// the hardware concurrency.
std::vector<SweepRow> tolerance_sweep(const RunConfig& base, const std::vector<double>& rtols,
                                      std::size_t workers = 0);

/// Writes sweep.csv with columns rtol,ok,N0,L2,NSTP,NHR,seconds,error.
void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& outdir);

/// Runs the uniform N = 2000 reference for `base` and writes it to `outdir`.
RunResult generate_reference(const RunConfig& base, const std::filesystem::path& outdir);

/// Max over the reference nodes of | |psi_ref| - |psi| |, with the solution
/// interpolated onto the reference nodes by cubic Hermite transfer of U and V.
double max_modulus_error(const Snapshot& solution, const Snapshot& reference);

struct SnapshotComparison {
    double t = 0.0;
    double max_error = 0.0;
};

/// Compares each snapshot with the reference snapshot at the same time.
/// Throws IoError if a reference time is missing.
std::vector<SnapshotComparison> compare_with_reference(const std::vector<Snapshot>& solution,
                                                       const std::vector<Snapshot>& reference);

} // namespace hrnls
