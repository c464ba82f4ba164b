#pragma once

#include "hrnls/counters.hpp"
#include "hrnls/integrator.hpp"
#include "hrnls/mesh.hpp"
#include "hrnls/mmpde.hpp"
#include "hrnls/monitor.hpp"
#include "hrnls/problem.hpp"
#include "hrnls/refinement.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hrnls {

/// HR moves nodes and changes their number, ROnly only moves a fixed number of
/// nodes, Uniform keeps a fixed uniform mesh.
enum class RunMode { HR, ROnly, Uniform };

const char* to_string(RunMode mode) noexcept;

struct OutputOptions {
    /// Extra snapshot times; those past T are ignored. t = 0 and t = T are
    /// always captured.
    std::vector<double> snapshot_times;
    /// Record node positions every k-th accepted step; 0 disables.
    std::size_t trajectory_stride = 1;

    bool operator==(const OutputOptions&) const = default;
};

struct RunConfig {
    std::string name = "custom";
    ProblemConfig problem;
    RefineParams refine;
    StepControlParams control;
    MeshSolveParams meshsolve;
    MonitorParams monitor;
    RunMode mode = RunMode::HR;
    /// N for ROnly/Uniform, ignored in HR mode.
    std::size_t fixed_cells = 0;
    /// Starting N of the initial node-count search in HR mode.
    std::size_t seed_cells = 50;
    int max_init_iterations = 25;
    int max_halvings = 40;
    double min_dt = 1e-12;
    OutputOptions output;

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

/// One accepted step (row 0 is the initial state).
struct StepRecord {
    double t = 0.0;
    double dt = 0.0;           ///< step just taken (0 for the initial row)
    std::size_t cells = 0;     ///< N after any refinement
    double eta = 0.0;          ///< indicator on the accepted mesh, before refinement
    double eta_after = 0.0;    ///< indicator after refinement (== eta if none)
    bool refined = false;
    double err = 0.0;          ///< ERR of the accepted step
    double mesherr = 0.0;
    double charge = 0.0;
    double energy = 0.0;
    double l2_error = 0.0;     ///< NaN when no exact solution exists
};

struct Snapshot {
    double t = 0.0;
    Mesh mesh;
    FieldPair fields;
};

struct TrajectoryRow {
    double t = 0.0;
    std::vector<double> nodes;
};

struct RunResult {
    RunConfig config;          ///< as run, with automatic tolerances resolved
    State final_state;
    RunCounters counters;
    std::size_t initial_cells = 0;
    double initial_eta = 0.0;
    std::vector<StepRecord> series;
    std::vector<TrajectoryRow> trajectories;
    std::vector<Snapshot> snapshots;

    double mean_charge() const;
    double mean_energy() const;
};

/// Drives one simulation: initial mesh selection, then coupled mesh/solution
/// sweeps per step with error-controlled step sizes and node-count control.
class Solver {
public:
    explicit Solver(RunConfig config);

    /// Initial mesh and node count. Resolves automatic mesh tolerances.
    State initialise();

    /// Advances `state` by one accepted step that does not pass `t_limit`,
    /// retrying with halved steps on rejection. A step shortened to reach
    /// `t_limit` lands on it exactly. On return state.dt holds the next proposal.
    StepRecord advance_step(State& state, double t_limit);

    const RunConfig& config() const noexcept { return config_; }
    const RunCounters& counters() const noexcept { return counters_; }
    double meshtol() const noexcept { return meshtol_; }
    double meshbal() const noexcept { return meshbal_; }

    StepRecord describe(const State& state) const;

private:
    RunConfig config_;
    RunCounters counters_;
    double meshtol_ = 0.0;
    double meshbal_ = 0.0;
    std::vector<double> last_k1_;
    NewtonWorkspace workspace_;
};

/// Integrates to the final time recording series, trajectories and snapshots.
RunResult run(const RunConfig& config);

} // namespace hrnls
