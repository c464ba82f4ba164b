#include "hrnls/output.hpp"

#include "hrnls/config.hpp"
#include "hrnls/errors.hpp"
#include "hrnls/physics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hrnls {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

double to_double(const std::string& s, const fs::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("malformed number '" + s + "' in " + path.string());
    }
}

} // namespace

std::string snapshot_filename(double t) { return "snapshot_" + format_double(t) + ".csv"; }

std::string counters_json(const RunResult& result) {
    const auto& c = result.counters;
    nlohmann::ordered_json j;
    j["preset"] = result.config.name;
    j["mode"] = to_string(result.config.mode);
    j["initial_cells"] = result.initial_cells;
    j["initial_eta"] = result.initial_eta;
    j["final_time"] = result.final_state.t;
    j["final_cells"] = result.final_state.mesh.cells();
    j["NHR"] = c.nhr;
    j["NMAX"] = c.nmax;
    j["NMIN"] = c.nmin;
    j["NSTP"] = c.nstp;
    j["JACS"] = c.jacs;
    j["BS"] = c.bs;
    j["ETF"] = c.etf;
    j["CTF"] = c.ctf;
    j["equidistribution_warnings"] = c.equidistribution_warnings;
    j["mean_charge"] = result.mean_charge();
    j["mean_energy"] = result.mean_energy();
    if (!result.series.empty() && !std::isnan(result.series.back().l2_error)) {
        j["final_l2_error"] = result.series.back().l2_error;
    }
    return j.dump(2) + "\n";
}

void emit_results(const RunResult& result, const fs::path& outdir) {
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create " + outdir.string() + ": " + ec.message());

    {
        const auto path = outdir / "series.csv";
        auto out = open_for_write(path);
        out << "t,dt,N,eta,eta_after,refined,err,mesherr,Q_h,E_h,L2\n";
        for (const auto& r : result.series) {
            out << num(r.t) << ',' << num(r.dt) << ',' << r.cells << ',' << num(r.eta) << ','
                << num(r.eta_after) << ',' << (r.refined ? 1 : 0) << ',' << num(r.err) << ','
                << num(r.mesherr) << ',' << num(r.charge) << ',' << num(r.energy) << ',';
            if (!std::isnan(r.l2_error)) out << num(r.l2_error);
            out << '\n';
        }
        finish(out, path);
    }
    {
        const auto path = outdir / "trajectories.csv";
        auto out = open_for_write(path);
        out << "t,N,x\n";
        for (const auto& row : result.trajectories) {
            out << num(row.t) << ',' << (row.nodes.size() - 1);
            for (double x : row.nodes) out << ',' << num(x);
            out << '\n';
        }
        finish(out, path);
    }
    for (const auto& snap : result.snapshots) {
        const auto path = outdir / snapshot_filename(snap.t);
        auto out = open_for_write(path);
        out << "x,abs_psi,U,V\n";
        const auto mod = modulus(snap.fields);
        for (std::size_t i = 0; i < snap.mesh.size(); ++i) {
            out << num(snap.mesh[i]) << ',' << num(mod[i]) << ',' << num(snap.fields.u[i]) << ','
                << num(snap.fields.v[i]) << '\n';
        }
        finish(out, path);
    }
    {
        const auto path = outdir / "counters.json";
        auto out = open_for_write(path);
        out << counters_json(result);
        finish(out, path);
    }
    {
        const auto path = outdir / "meta.cfg";
        auto out = open_for_write(path);
        out << to_config_text(result.config);
        finish(out, path);
    }
}

Snapshot read_snapshot(const fs::path& path, double t) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<double> x, u, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 4) throw IoError("malformed row in " + path.string());
        x.push_back(to_double(cells[0], path));
        u.push_back(to_double(cells[2], path));
        v.push_back(to_double(cells[3], path));
    }
    Snapshot s;
    s.t = t;
    s.mesh = Mesh(std::move(x));
    s.fields = FieldPair(std::move(u), std::move(v));
    return s;
}

std::vector<Snapshot> read_snapshots(const fs::path& dir) {
    std::vector<Snapshot> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const std::string name = entry.path().filename().string();
        const std::string prefix = "snapshot_";
        if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".csv") continue;
        const std::string stamp = name.substr(prefix.size(), name.size() - prefix.size() - 4);
        out.push_back(read_snapshot(entry.path(), to_double(stamp, entry.path())));
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(out.begin(), out.end(), [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
    return out;
}

std::vector<StepRecord> read_series(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<StepRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() == 10) cells.emplace_back();
        if (cells.size() != 11) throw IoError("malformed row in " + path.string());
        StepRecord r;
        r.t = to_double(cells[0], path);
        r.dt = to_double(cells[1], path);
        r.cells = static_cast<std::size_t>(std::stoull(cells[2]));
        r.eta = to_double(cells[3], path);
        r.eta_after = to_double(cells[4], path);
        r.refined = cells[5] == "1";
        r.err = to_double(cells[6], path);
        r.mesherr = to_double(cells[7], path);
        r.charge = to_double(cells[8], path);
        r.energy = to_double(cells[9], path);
        r.l2_error = cells[10].empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : to_double(cells[10], path);
        rows.push_back(r);
    }
    return rows;
}

} // namespace hrnls
