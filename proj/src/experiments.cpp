#include "hrnls/experiments.hpp"

#include "hrnls/config.hpp"
#include "hrnls/errors.hpp"
#include "hrnls/output.hpp"
#include "hrnls/physics.hpp"
#include "hrnls/refinement.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace hrnls {

namespace {

SweepRow sweep_one(const RunConfig& base, double rtol) {
    SweepRow row;
    row.rtol = rtol;
    const auto start = std::chrono::steady_clock::now();
    try {
        RunConfig cfg = base;
        cfg.refine.rtol = rtol;
        cfg.output.snapshot_times.clear();
        cfg.output.trajectory_stride = 0;
        const RunResult r = run(cfg);
        row.ok = true;
        row.initial_cells = r.initial_cells;
        row.final_l2_error = r.series.back().l2_error;
        row.counters = r.counters;
    } catch (const SolverError& e) {
        row.error_kind = e.kind();
        row.error = e.what();
    } catch (const std::exception& e) {
        row.error_kind = "Error";
        row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace

std::vector<SweepRow> tolerance_sweep(const RunConfig& base, const std::vector<double>& rtols,
                                      std::size_t workers) {
    if (!exact_modulus(base.problem, 0.0)) {
        throw ConfigError("ic.kind", "tolerance sweeps need a problem with an exact solution");
    }
    std::vector<SweepRow> rows(rtols.size());
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, rtols.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < rtols.size(); i = next++) {
            rows[i] = sweep_one(base, rtols[i]);
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    return rows;
}

void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create " + outdir.string() + ": " + ec.message());
    const auto path = outdir / "sweep.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "rtol,ok,N0,L2,NSTP,NHR,seconds,error\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.rtol);
        out << buf << ',' << (r.ok ? 1 : 0) << ',' << r.initial_cells << ',';
        if (r.ok) {
            std::snprintf(buf, sizeof(buf), "%.17g", r.final_l2_error);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
        out << ',' << r.counters.nstp << ',' << r.counters.nhr << ',' << buf << ',';
        if (!r.ok) {
            std::string msg = r.error_kind + ": " + r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out << msg;
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

RunResult generate_reference(const RunConfig& base, const std::filesystem::path& outdir) {
    const RunResult r = run(make_reference_config(base));
    emit_results(r, outdir);
    return r;
}

double max_modulus_error(const Snapshot& solution, const Snapshot& reference) {
    const auto xs = solution.mesh.nodes();
    const auto xr = reference.mesh.nodes();
    const auto u = interpolate(xs, solution.fields.u, xr, Interpolation::Cubic);
    const auto v = interpolate(xs, solution.fields.v, xr, Interpolation::Cubic);
    const auto ref = modulus(reference.fields);
    double worst = 0.0;
    for (std::size_t i = 0; i < xr.size(); ++i) {
        worst = std::max(worst, std::abs(std::hypot(u[i], v[i]) - ref[i]));
    }
    return worst;
}

std::vector<SnapshotComparison> compare_with_reference(const std::vector<Snapshot>& solution,
                                                       const std::vector<Snapshot>& reference) {
    std::vector<SnapshotComparison> out;
    for (const auto& s : solution) {
        const auto match = std::find_if(reference.begin(), reference.end(), [&](const Snapshot& r) {
            return std::abs(r.t - s.t) <= 1e-12 * std::max(1.0, std::abs(s.t));
        });
        if (match == reference.end()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", s.t);
            throw IoError(std::string("no reference snapshot at t=") + buf);
        }
        out.push_back({s.t, max_modulus_error(s, *match)});
    }
    return out;
}

} // namespace hrnls
