#include "hrnls/driver.hpp"

#include "hrnls/errors.hpp"
#include "hrnls/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hrnls {

const char* to_string(RunMode mode) noexcept {
    switch (mode) {
    case RunMode::HR: return "hr";
    case RunMode::ROnly: return "r_only";
    case RunMode::Uniform: return "uniform";
    }
    return "?";
}

void ProblemConfig::validate() const {
    if (!(q > 0.0)) throw ConfigError("problem.q", "only the focusing case q > 0 is supported");
    if (!(left < right)) throw ConfigError("problem.xl", "must be smaller than problem.xr");
    if (!(final_time >= 0.0)) throw ConfigError("problem.T", "must be >= 0");
    auto check = [](const SolitonParams& s, const char* key) {
        if (!(s.a > 0.0)) throw ConfigError(key, "soliton amplitude parameter must be > 0");
    };
    if (const auto* one = std::get_if<SingleSoliton>(&initial)) check(one->s, "ic.a1");
    if (const auto* two = std::get_if<TwoSoliton>(&initial)) {
        check(two->first, "ic.a1");
        check(two->second, "ic.a2");
    }
}

void RunConfig::validate() const {
    problem.validate();
    refine.validate();
    control.validate();
    meshsolve.validate();
    if (!(monitor.gamma > 0.0)) throw ConfigError("monitor.gamma", "must be > 0");
    if (monitor.radius < 0) throw ConfigError("monitor.p", "must be >= 0");
    if (monitor.floor_override && !(*monitor.floor_override >= 0.0)) {
        throw ConfigError("monitor.floor", "must be >= 0");
    }
    if (mode != RunMode::HR && fixed_cells < 2) {
        throw ConfigError("run.cells", "fixed-N modes need run.cells >= 2");
    }
    if (seed_cells < 2) throw ConfigError("run.seed_cells", "must be >= 2");
    if (max_init_iterations < 1) throw ConfigError("run.max_init_iterations", "must be >= 1");
    if (max_halvings < 1) throw ConfigError("run.max_halvings", "must be >= 1");
    if (!(min_dt > 0.0)) throw ConfigError("run.min_dt", "must be > 0");
    for (double t : output.snapshot_times) {
        if (!(t >= 0.0)) {
            throw ConfigError("output.snapshots", "snapshot times must be >= 0");
        }
    }
}

double RunResult::mean_charge() const {
    if (series.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : series) s += r.charge;
    return s / static_cast<double>(series.size());
}

double RunResult::mean_energy() const {
    if (series.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : series) s += r.energy;
    return s / static_cast<double>(series.size());
}

Solver::Solver(RunConfig config) : config_(std::move(config)) { config_.validate(); }

State Solver::initialise() {
    const auto& problem = config_.problem;
    const double gtol = config_.refine.gtol.value_or(1e-6 * (problem.right - problem.left));

    auto ic_monitor = [&](const Mesh& m) {
        return build_monitor(sample_initial_condition(problem, m), m, config_.monitor).smoothed;
    };

    State state;
    switch (config_.mode) {
    case RunMode::Uniform:
        state.mesh = Mesh::uniform(problem.left, problem.right, config_.fixed_cells);
        break;
    case RunMode::ROnly: {
        const Mesh start = Mesh::uniform(problem.left, problem.right, config_.fixed_cells);
        auto eq = equidistribute(ic_monitor, start, config_.fixed_cells, gtol,
                                 config_.refine.max_equidistribution_iterations);
        if (!eq.converged) ++counters_.equidistribution_warnings;
        state.mesh = eq.mesh;
        break;
    }
    case RunMode::HR: {
        std::size_t cells = config_.seed_cells;
        Mesh mesh = Mesh::uniform(problem.left, problem.right, cells);
        double closest = std::numeric_limits<double>::quiet_NaN();
        bool found = false;
        for (int it = 0; it < config_.max_init_iterations; ++it) {
            auto eq = equidistribute(ic_monitor, mesh, cells, gtol,
                                     config_.refine.max_equidistribution_iterations);
            if (!eq.converged) ++counters_.equidistribution_warnings;
            mesh = eq.mesh;
            const auto fields = sample_initial_condition(problem, mesh);
            const double e = eta(assemble_monitor(fields, mesh, config_.monitor.floor_override), mesh);
            const auto decision = needs_refinement(e, config_.refine);
            if (std::isnan(closest) ||
                std::abs(std::log(e / config_.refine.rtol)) <
                    std::abs(std::log(closest / config_.refine.rtol))) {
                closest = e;
            }
            if (decision == RefineDecision::Keep) {
                found = true;
                break;
            }
            cells = predict_node_count(cells, e, config_.refine, decision);
        }
        if (!found) {
            std::ostringstream msg;
            msg << "initial node count search did not reach the eta band after "
                << config_.max_init_iterations << " iterations (closest eta " << closest << ")";
            throw InitialisationFailed(msg.str(), closest);
        }
        state.mesh = mesh;
        break;
    }
    }

    state.t = 0.0;
    state.dt = config_.control.dt0;
    state.fields = sample_initial_condition(problem, state.mesh);

    const double n0 = static_cast<double>(state.mesh.cells());
    meshtol_ = config_.control.meshtol.value_or(0.5 * (problem.right - problem.left) / n0);
    meshbal_ = config_.control.meshbal.value_or(std::min(meshtol_ / 5.0, 0.5));
    if (!(meshbal_ < meshtol_) || !(meshbal_ < 1.0)) {
        throw ConfigError("control.meshbal", "must be smaller than control.meshtol and 1");
    }
    config_.control.meshtol = meshtol_;
    config_.control.meshbal = meshbal_;

    counters_.observe_cells(static_cast<std::int64_t>(state.mesh.cells()));
    last_k1_.clear();
    return state;
}

StepRecord Solver::describe(const State& state) const {
    StepRecord rec;
    rec.t = state.t;
    rec.cells = state.mesh.cells();
    rec.eta = eta(assemble_monitor(state.fields, state.mesh, config_.monitor.floor_override),
                  state.mesh);
    rec.eta_after = rec.eta;
    const auto cq = conserved_quantities(state.fields, state.mesh, config_.problem.q);
    rec.charge = cq.charge;
    rec.energy = cq.energy;
    if (auto exact = exact_modulus(config_.problem, state.t)) {
        rec.l2_error = l2_error(state.fields, state.mesh, exact);
    } else {
        rec.l2_error = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

StepRecord Solver::advance_step(State& state, double t_limit) {
    const auto& cfg = config_;
    const double q = cfg.problem.q;
    const bool moving = cfg.mode != RunMode::Uniform;
    const int sweeps = moving ? cfg.meshsolve.sweeps : 1;

    const double intended = state.dt;
    double dt = std::min(state.dt, t_limit - state.t);
    const bool truncated = dt < state.dt;

    int halvings = 0;
    auto reject = [&](const std::string& why) {
        dt *= 0.5;
        ++halvings;
        if (halvings > cfg.max_halvings || dt < cfg.min_dt) {
            std::ostringstream msg;
            msg << "step size underflow at t=" << state.t << " (dt=" << dt << ", last rejection: "
                << why << ")";
            throw StepsizeUnderflow(msg.str());
        }
    };

    for (;;) {
        Mesh iterate = state.mesh;
        Mesh previous = state.mesh;
        FieldPair solution = state.fields;
        FieldStep step;
        std::vector<double> k1_guess = last_k1_;
        try {
            for (int sweep = 0; sweep < sweeps; ++sweep) {
                Mesh next = state.mesh;
                if (moving) {
                    const auto profile = build_monitor(solution, iterate, cfg.monitor);
                    const auto density = positive_monitor(profile.smoothed);
                    next = solve_mesh_step(state.mesh, iterate, density, dt, cfg.meshsolve);
                }
                step = sdirk2_field_step(state.fields, state.mesh, next, state.t, dt, q,
                                         cfg.control, counters_, k1_guess, &workspace_);
                k1_guess = step.k1;
                previous = std::move(iterate);
                iterate = std::move(next);
                solution = step.solution;
            }
        } catch (const MeshTangled& e) {
            reject(e.what());
            continue;
        } catch (const NewtonDiverged& e) {
            reject(e.what());
            continue;
        } catch (const SingularJacobian& e) {
            reject(e.what());
            continue;
        }

        const double err = solution_error(step.solution, step.embedded, iterate);
        double mesherr = 0.0;
        if (sweeps > 1) {
            for (std::size_t i = 0; i < iterate.size(); ++i) {
                mesherr = std::max(mesherr, std::abs(iterate[i] - previous[i]));
            }
        }
        if (!(err < cfg.control.etol) || !(mesherr < meshtol_)) {
            ++counters_.etf;
            std::ostringstream why;
            why << "ERR=" << err << ", mesherr=" << mesherr;
            reject(why.str());
            continue;
        }

        // accepted
        double next_dt = std::min(propose_dt_solution(dt, err, cfg.control),
                                  propose_dt_mesh(dt, mesherr, meshbal_, cfg.control));
        if (truncated && halvings == 0) next_dt = std::max(next_dt, intended);

        state.t = (truncated && halvings == 0) ? t_limit : state.t + dt;
        state.mesh = std::move(iterate);
        state.fields = std::move(solution);
        state.fields.zero_boundary();
        state.dt = next_dt;
        last_k1_ = std::move(step.k1);
        ++counters_.nstp;

        StepRecord rec = describe(state);
        rec.dt = dt;
        rec.err = err;
        rec.mesherr = mesherr;

        if (cfg.mode == RunMode::HR) {
            const auto decision = needs_refinement(rec.eta, cfg.refine);
            if (decision != RefineDecision::Keep) {
                const std::size_t cells = state.mesh.cells();
                const std::size_t new_cells =
                    predict_node_count(cells, rec.eta, cfg.refine, decision);
                auto regrid =
                    regrid_and_transfer(state.mesh, state.fields, new_cells, cfg.monitor, cfg.refine);
                if (!regrid.converged) ++counters_.equidistribution_warnings;
                state.mesh = std::move(regrid.mesh);
                state.fields = std::move(regrid.fields);
                rec.refined = true;
                if (new_cells != cells) ++counters_.nhr;
                last_k1_.clear();

                const StepRecord after = describe(state);
                rec.cells = after.cells;
                rec.eta_after = after.eta;
                rec.charge = after.charge;
                rec.energy = after.energy;
                rec.l2_error = after.l2_error;
            }
        }
        counters_.observe_cells(static_cast<std::int64_t>(state.mesh.cells()));
        return rec;
    }
}

RunResult run(const RunConfig& config) {
    Solver solver(config);
    RunResult result;
    State state = solver.initialise();
    result.initial_cells = state.mesh.cells();

    const double final_time = config.problem.final_time;
    std::vector<double> targets;
    for (double t : config.output.snapshot_times) {
        if (t > 0.0 && t < final_time) targets.push_back(t);
    }
    targets.push_back(final_time);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    const std::size_t stride = config.output.trajectory_stride;
    auto record = [&](const StepRecord& rec, std::int64_t step_index) {
        result.series.push_back(rec);
        if (stride > 0 && step_index % static_cast<std::int64_t>(stride) == 0) {
            result.trajectories.push_back({state.t, state.mesh.vector()});
        }
    };

    const StepRecord initial = solver.describe(state);
    result.initial_eta = initial.eta;
    record(initial, 0);
    result.snapshots.push_back({state.t, state.mesh, state.fields});

    std::int64_t steps = 0;
    for (double target : targets) {
        if (target <= 0.0) continue;
        while (state.t < target) {
            const StepRecord rec = solver.advance_step(state, target);
            ++steps;
            record(rec, steps);
        }
        result.snapshots.push_back({state.t, state.mesh, state.fields});
    }

    result.config = solver.config();
    result.final_state = state;
    result.counters = solver.counters();
    return result;
}

} // namespace hrnls
