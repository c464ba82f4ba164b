// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include "hrnls/config.hpp"
#include "hrnls/driver.hpp"
#include "hrnls/errors.hpp"
#include "hrnls/experiments.hpp"
#include "hrnls/integrator.hpp"
#include "hrnls/mmpde.hpp"
#include "hrnls/monitor.hpp"
#include "hrnls/output.hpp"
#include "hrnls/physics.hpp"

#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hrnls;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

class Runs {
public:
    explicit Runs(fs::path work) : work_(std::move(work)) {}

    const RunResult& get(const std::string& key, const std::function<RunConfig()>& make) {
        auto it = runs_.find(key);
        if (it != runs_.end()) return it->second;
        std::fprintf(stderr, "running %s\n", key.c_str());
        const auto start = std::chrono::steady_clock::now();
        RunResult r = run(make());
        seconds_[key] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit_results(r, work_ / key);
        return runs_.emplace(key, std::move(r)).first->second;
    }

    const RunResult& preset(const std::string& name) {
        return get(name, [&] { return make_preset(name); });
    }

    double seconds(const std::string& key) const { return seconds_.at(key); }
    const fs::path& work() const { return work_; }

private:
    fs::path work_;
    std::map<std::string, RunResult> runs_;
    std::map<std::string, double> seconds_;
};

/// Reference snapshots for `base`, generated once and kept under `cache`.
std::vector<Snapshot> reference(const RunConfig& base, const fs::path& cache) {
    const RunConfig ref = make_reference_config(base);
    const fs::path dir = cache / ref.name;
    if (fs::exists(dir / "meta.cfg")) {
        try {
            if (parse_config_file(dir / "meta.cfg") == ref) return read_snapshots(dir);
        } catch (const SolverError&) {
        }
    }
    std::fprintf(stderr, "generating %s\n", ref.name.c_str());
    fs::remove_all(dir);
    generate_reference(base, dir);
    return read_snapshots(dir);
}

RunConfig three_soliton_first_period() {
    RunConfig c = make_preset("three_soliton");
    c.problem.final_time = 0.8;
    return c;
}

Verdict accuracy(Runs& runs) {
    Verdict v;
    const auto& r = runs.preset("single_soliton_tolprop");
    const double err = r.series.back().l2_error;
    const double secs = runs.seconds("single_soliton_tolprop");
    v.detail << "N0=" << r.initial_cells << " L2(T=30)=" << sci(err) << " runtime=" << secs << "s";
    v.require(within(double(r.initial_cells), 57, 77), "N0 in [57, 77]");
    v.require(err <= 6e-3, "L2 <= 6e-3");
    v.require(secs < 60.0, "runtime < 60 s");
    return v;
}

Verdict proportionality(Runs& runs) {
    Verdict v;
    std::vector<double> rtols{1.5e-2, 3.75e-3, 9.375e-4};
    std::vector<std::size_t> n0;
    std::vector<double> err;
    for (double rtol : rtols) {
        const auto& r = rtol == rtols[0] ? runs.preset("single_soliton_tolprop")
                                         : runs.get("tolprop_rtol_" + format_double(rtol), [rtol] {
                                               RunConfig c = make_preset("single_soliton_tolprop");
                                               c.refine.rtol = rtol;
                                               return c;
                                           });
        n0.push_back(r.initial_cells);
        err.push_back(r.series.back().l2_error);
    }
    for (std::size_t i = 0; i < rtols.size(); ++i) {
        v.detail << (i ? " " : "") << "RTOL=" << rtols[i] << ":N0=" << n0[i] << ",L2=" << sci(err[i]);
    }
    for (std::size_t i = 1; i < rtols.size(); ++i) {
        const double nr = double(n0[i]) / double(n0[i - 1]);
        const double er = err[i - 1] / err[i];
        v.detail << " | N0 ratio " << nr << " error ratio " << er;
        v.require(within(nr, 1.7, 2.6), "N0 ratio in [1.7, 2.6]");
        v.require(within(er, 2.5, 5.0), "error ratio in [2.5, 5.0]");
    }
    return v;
}

Verdict r_only(Runs& runs) {
    Verdict v;
    const std::map<std::size_t, double> bound{{50, 3.6e-3}, {100, 9.2e-4}, {200, 2.4e-4}};
    for (const auto& [n, limit] : bound) {
        const auto& r = runs.get("r_only_" + std::to_string(n), [n = n] {
            RunConfig c = make_preset("r_only_table6");
            c.fixed_cells = n;
            return c;
        });
        const auto& u = runs.get("uniform_" + std::to_string(n) + "_T1", [n = n] {
            RunConfig c = make_preset("uniform_baseline");
            c.fixed_cells = n;
            c.problem.final_time = 1.0;
            c.control.etol = make_preset("r_only_table6").control.etol;
            c.output.snapshot_times = {};
            return c;
        });
        const double er = r.series.back().l2_error, eu = u.series.back().l2_error;
        v.detail << " N=" << n << ": r-only " << sci(er) << " uniform " << sci(eu);
        v.require(er <= limit, "N=" + std::to_string(n) + " r-only <= " + sci(limit));
        v.require(eu >= 5.0 * er, "N=" + std::to_string(n) + " uniform >= 5x r-only");
    }
    return v;
}

Verdict conservation(Runs& runs) {
    Verdict v;
    const auto& r = runs.preset("single_soliton");
    const double dq = std::abs(r.mean_charge() - 4.0);
    const double de = std::abs(r.mean_energy() + 1.0 / 3.0);
    v.detail << "|Qbar-4|=" << sci(dq) << " |Ebar+1/3|=" << sci(de);
    v.require(dq <= 2e-2, "|Qbar - 4| <= 2e-2");
    v.require(de <= 6e-2, "|Ebar + 1/3| <= 6e-2");
    return v;
}

Verdict counters(Runs& runs) {
    Verdict v;
    const auto& one = runs.preset("single_soliton").counters;
    v.detail << "single NHR=" << one.nhr;
    v.require(one.nhr == 0, "single-soliton NHR == 0");

    struct Band {
        std::string name;
        long nhr_lo, nhr_hi;
        double nmax, nmin;
    };
    for (const Band& b : {Band{"two_soliton", 4, 12, 197, 134}, Band{"three_soliton", 5, 12, 332, 100}}) {
        const auto& c = runs.preset(b.name).counters;
        v.detail << " | " << b.name << " NHR=" << c.nhr << " NMAX=" << c.nmax << " NMIN=" << c.nmin;
        v.require(within(double(c.nhr), double(b.nhr_lo), double(b.nhr_hi)),
                  b.name + " NHR in [" + std::to_string(b.nhr_lo) + ", " + std::to_string(b.nhr_hi) + "]");
        v.require(within(double(c.nmax), 0.75 * b.nmax, 1.25 * b.nmax), b.name + " NMAX within 25%");
        v.require(within(double(c.nmin), 0.75 * b.nmin, 1.25 * b.nmin), b.name + " NMIN within 25%");
    }
    return v;
}

Verdict eta_band(Runs& runs) {
    Verdict v;
    for (const std::string name : {"single_soliton", "single_soliton_tolprop", "two_soliton", "three_soliton"}) {
        const auto& cfg = runs.preset(name).config;
        const auto rows = read_series(runs.work() / name / "series.csv");
        const double lo = cfg.refine.beta * cfg.refine.rtol, hi = cfg.refine.alpha * cfg.refine.rtol;
        std::size_t checked = 0, outside = 0;
        for (const auto& s : rows) {
            if (s.refined) continue;
            ++checked;
            if (!(s.eta > lo && s.eta < hi)) ++outside;
        }
        v.detail << " " << name << ": " << outside << "/" << checked << " outside";
        v.require(outside == 0, name + " eta in band");
    }
    return v;
}

std::vector<double> soliton_monitor(const Mesh& m) {
    FieldPair f(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto psi = oracle::soliton(m[i], 0.0, 1.0, 1.0, 0.0, 1.0);
        f.u[i] = psi.real();
        f.v[i] = psi.imag();
    }
    return build_monitor(f, m, MonitorParams{}).smoothed;
}

Verdict properties() {
    Verdict v;
    {
        const double gtol = 1e-6 * 100.0;
        const auto r = equidistribute(soliton_monitor, Mesh::uniform(-30.0, 70.0, 50), 80, gtol);
        const auto masses = cell_masses(r.mesh, soliton_monitor(r.mesh));
        const auto [lo, hi] = std::minmax_element(masses.begin(), masses.end());
        double mean = 0.0;
        for (double m : masses) mean += m / double(masses.size());
        const double spread = (*hi - *lo) / mean;
        v.detail << "mass spread " << sci(spread);
        v.require(r.converged && spread <= 10.0 * gtol, "equidistributed masses within 10 GTOL");
    }
    {
        double worst = 0.0;
        const auto c = smooth_monitor(std::vector<double>(17, 2.75));
        for (double m : c) worst = std::max(worst, std::abs(m - 2.75));
        std::vector<double> raw(40);
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = 1.0 + std::abs(std::sin(3.0 * double(i)));
        const auto s = smooth_monitor(raw);
        const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
        double escape = 0.0;
        for (double m : s) escape = std::max({escape, *lo - m, m - *hi});
        v.detail << " | smoothing const " << sci(worst) << " range " << sci(escape);
        v.require(worst <= 1e-14 && escape <= 1e-14, "smoothing preserves constants and range");
    }
    {
        double worst = 0.0;
        for (double z : {-0.1, -1.0, -10.0}) {
            worst = std::max(worst, std::abs(sdirk2_stability(z) - oracle::sdirk2_linear(z)));
        }
        v.detail << " | stability " << sci(worst);
        v.require(worst <= 1e-12, "stability function to 1e-12");
    }
    {
        // y' = -y^2
        struct Riccati final : OdeSystem {
            std::size_t dimension() const override { return 1; }
            std::size_t bandwidth() const override { return 0; }
            void rhs(double, std::span<const double> y, std::span<double> f) const override {
                f[0] = -y[0] * y[0];
            }
            void jacobian(double, std::span<const double> y, BandMatrix& j) const override {
                j(0, 0) = -2.0 * y[0];
            }
        } sys;
        RunCounters c;
        auto gap = [&](double dt) {
            const auto r = sdirk2_step(sys, 0.0, std::vector<double>{1.0}, dt, {}, c);
            return std::abs(r.solution[0] - r.embedded[0]);
        };
        const double ratio = gap(0.05) / gap(0.025);
        v.detail << " | embedded ratio " << ratio;
        v.require(within(ratio, 4.0 * 0.92, 4.0 * 1.08), "embedded estimate second order");
    }
    {
        const auto x = oracle::random_nodes(-2.0, 3.0, 30, 11);
        const auto w = curvature_root(oracle::sample(x, [](double s) { return s * s; }), Mesh(x));
        double worst = 0.0;
        for (double wi : w) worst = std::max(worst, std::abs(wi - std::sqrt(2.0)));
        v.detail << " | sqrt2 " << sci(worst);
        v.require(worst <= 1e-12, "curvature root sqrt(2) on quadratics");
    }
    {
        const Mesh mesh = Mesh::uniform(-30.0, 70.0, 80);
        const auto out = solve_mesh_step(mesh, mesh, std::vector<double>(80, 0.37), 0.1, {});
        double worst = 0.0;
        for (std::size_t i = 0; i < mesh.size(); ++i) worst = std::max(worst, std::abs(out[i] - mesh[i]));
        v.detail << " | stationarity " << sci(worst);
        v.require(worst <= 1e-13, "uniform mesh stationary to 1e-13");
    }
    {
        StepControlParams c;
        const double dt = 0.2, bal = 1e-2;
        const bool ok = std::abs(propose_dt_solution(dt, 0.0, c) - c.maxfac * dt) < 1e-15 &&
                        std::abs(propose_dt_solution(dt, 1e3 * c.etol, c) - c.minfac * dt) < 1e-15 &&
                        std::abs(propose_dt_mesh(dt, 0.0, bal, c) - c.maxfac * dt) < 1e-15 &&
                        std::abs(propose_dt_mesh(dt, 1.0, bal, c) - c.minfac * dt) < 1e-15 &&
                        std::abs(propose_dt_mesh(dt, bal, bal, c) - dt) < 1e-15;
        v.require(ok, "step-factor clamps");
    }
    return v;
}

Verdict spatial_order(Runs& runs) {
    Verdict v;
    std::vector<double> err;
    for (std::size_t n : {200, 400, 800, 1600}) {
        const auto& r = runs.get("uniform_order_" + std::to_string(n), [n] {
            RunConfig c = make_preset("uniform_baseline");
            c.fixed_cells = n;
            c.problem.final_time = 1.0;
            c.control.etol = 1e-9;
            c.output.snapshot_times = {};
            c.output.trajectory_stride = 0;
            return c;
        });
        err.push_back(r.series.back().l2_error);
        v.detail << "N=" << n << ":" << sci(err.back()) << " ";
    }
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double p = std::log2(err[i - 1] / err[i]);
        v.detail << "p=" << p << " ";
        v.require(within(p, 1.8, 2.2), "order in [1.8, 2.2]");
    }
    return v;
}

Verdict reproduction(Runs& runs, const fs::path& cache) {
    Verdict v;
    struct Case {
        std::string name;
        const RunResult* run;
        RunConfig base;
    };
    const Case cases[] = {
        {"three_soliton", &runs.preset("three_soliton"), three_soliton_first_period()},
        {"two_soliton", &runs.preset("two_soliton"), make_preset("two_soliton")},
    };
    for (const auto& c : cases) {
        const auto ref = reference(c.base, cache);
        std::vector<Snapshot> mine;
        for (const auto& s : c.run->snapshots) {
            if (s.t <= c.base.problem.final_time) mine.push_back(s);
        }
        double worst = 0.0, at = 0.0;
        for (const auto& cmp : compare_with_reference(mine, ref)) {
            if (cmp.max_error > worst) worst = cmp.max_error, at = cmp.t;
        }
        v.detail << " " << c.name << ": " << mine.size() << " snapshots, max " << sci(worst) << " at t=" << at;
        v.require(worst <= 5e-2, c.name + " max-modulus error <= 5e-2");
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    fs::path cache = "reference_cache";
    fs::path work = "acceptance_runs";
    std::vector<int> only;
    app.add_option("--cache", cache, "directory for the cached reference runs");
    app.add_option("--work", work, "directory for the emitted runs");
    app.add_option("--only", only, "criteria to check (default all)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    fs::create_directories(cache);
    fs::create_directories(work);
    Runs runs(work);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"single-soliton accuracy", [&] { return accuracy(runs); }},
        {"tolerance proportionality", [&] { return proportionality(runs); }},
        {"r-only comparison", [&] { return r_only(runs); }},
        {"conservation", [&] { return conservation(runs); }},
        {"counter plausibility", [&] { return counters(runs); }},
        {"eta band", [&] { return eta_band(runs); }},
        {"property suite", [] { return properties(); }},
        {"spatial order", [&] { return spatial_order(runs); }},
        {"reference reproduction", [&] { return reproduction(runs, cache); }},
    };

    const std::set<int> selected(only.begin(), only.end());
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = int(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "[error: " << e.what() << "]";
        }
        if (!v.pass) ++failures;
        std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
