#pragma once

#include "hrnls/banded.hpp"
#include "hrnls/counters.hpp"
#include "hrnls/mesh.hpp"

#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace hrnls {

/// y' = f(t, y) with a banded Jacobian.
class OdeSystem {
public:
    virtual ~OdeSystem() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::size_t bandwidth() const = 0; ///< same below and above the diagonal
    virtual void rhs(double t, std::span<const double> y, std::span<double> f) const = 0;
    virtual void jacobian(double t, std::span<const double> y, BandMatrix& jac) const = 0;
};

/// Two-stage L-stable SDIRK of order 2, with the first stage doubling as an
/// embedded first-order method (w_hat = w + dt k1).
struct SdirkTableau {
    static constexpr double gamma = 1.0 - std::numbers::sqrt2 / 2.0;
    static constexpr double a11 = gamma;
    static constexpr double a21 = 1.0 - gamma;
    static constexpr double a22 = gamma;
    static constexpr double b1 = 1.0 - gamma;
    static constexpr double b2 = gamma;
    static constexpr double c1 = gamma;
    static constexpr double c2 = 1.0;
};

/// R(z) = y_{n+1}/y_n for y' = lambda y, z = lambda dt.
double sdirk2_stability(double z);

struct StepControlParams {
    double etol = 5e-3;  ///< solution error tolerance on ERR
    double ktol = 1e-10; ///< Newton tolerance, max-norm
    /// Mesh iteration tolerance. Unset means 0.5 (x_r - x_l)/N0, fixed after
    /// initialisation.
    std::optional<double> meshtol;
    /// Balance target for mesherr. Unset means min(meshtol/5, 0.5).
    std::optional<double> meshbal;
    double safety = 0.6;
    double maxfac = 2.0;
    double minfac = 0.1;
    int newton_max_iters = 10;
    bool quasi_newton = false; ///< reuse one factorisation for both stages of a step
    double dt0 = 1e-4;

    void validate() const;
    bool operator==(const StepControlParams&) const = default;
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iters = 10;
    bool reuse_factorisation = false;
};

/// Scratch storage reused across Newton solves of the same size.
struct NewtonWorkspace {
    BandMatrix matrix;
    BandLU lu;
    std::vector<double> residual;
    std::vector<double> point;
    /// `lu` holds a factorisation that quasi-Newton solves may reuse.
    bool factor_valid = false;
};

using ResidualFn = std::function<void(std::span<const double> x, std::span<double> r)>;
using NewtonMatrixFn = std::function<void(std::span<const double> x, BandMatrix& a)>;

/// Newton iteration for residual(x) = 0 with a banded Newton matrix.
///
/// Stops when the residual or the update is below `tol` in max-norm; returns the
/// number of linear solves performed. Each factorisation counts one JACS, each
/// solve one BS. Throws NewtonDiverged (after counting a CTF) when
/// `max_iters` updates do not converge or the iterate becomes non-finite.
/// With `reuse_factorisation` a factorisation still valid in `workspace` is used
/// instead of building a new one.
int newton_solve(const ResidualFn& residual, const NewtonMatrixFn& matrix, std::vector<double>& x,
                 NewtonWorkspace& workspace, const NewtonOptions& options, RunCounters& counters);

/// Solves k = f(t, base + h k) for the stage derivative k, starting from `k`.
int newton_solve_stage(const OdeSystem& system, double t, std::span<const double> base, double h,
                       std::vector<double>& k, const NewtonOptions& options,
                       RunCounters& counters, NewtonWorkspace& workspace);

struct SdirkResult {
    std::vector<double> solution; ///< second-order update
    std::vector<double> embedded; ///< first-order update w + dt k1
    std::vector<double> k1;
    int newton_solves = 0;
};

/// One SDIRK2 step of `system` from (t, y). `k1_guess` may be empty (zero guess).
SdirkResult sdirk2_step(const OdeSystem& system, double t, std::span<const double> y, double dt,
                        const NewtonOptions& options, RunCounters& counters,
                        std::span<const double> k1_guess = {},
                        NewtonWorkspace* workspace = nullptr);

/// The semi-discrete NLSE on a mesh moving linearly in time from `start`
/// (at time t0) with constant node velocity `xdot`.
class MovingMeshNlse final : public OdeSystem {
public:
    MovingMeshNlse(const Mesh& start, std::vector<double> xdot, double t0, double q);

    std::size_t dimension() const override { return 2 * (start_.size() - 2); }
    std::size_t bandwidth() const override;
    void rhs(double t, std::span<const double> y, std::span<double> f) const override;
    void jacobian(double t, std::span<const double> y, BandMatrix& jac) const override;

    /// Node positions at time t.
    std::vector<double> nodes_at(double t) const;

private:
    void update_nodes(double t) const;

    std::vector<double> start_;
    std::vector<double> xdot_;
    double t0_;
    double q_;
    mutable std::vector<double> nodes_;
    mutable double nodes_time_;
};

/// Advances `fields` from `mesh_old` at time t to `mesh_new` at t + dt, the
/// nodes moving linearly in between. Returns (full, embedded) fields on mesh_new.
struct FieldStep {
    FieldPair solution;
    FieldPair embedded;
    std::vector<double> k1;
};

FieldStep sdirk2_field_step(const FieldPair& fields, const Mesh& mesh_old, const Mesh& mesh_new,
                            double t, double dt, double q, const StepControlParams& control,
                            RunCounters& counters, std::span<const double> k1_guess = {},
                            NewtonWorkspace* workspace = nullptr);

/// Mesh-weighted L2 norm of the nodal 2-vectors (U - U_hat, V - V_hat).
double solution_error(const FieldPair& full, const FieldPair& embedded, const Mesh& mesh);

/// dt * min(maxfac, max(minfac, safety * sqrt(etol/err))).
double propose_dt_solution(double dt, double err, const StepControlParams& control);

/// dt * min(maxfac, max(minfac, log(mesherr)/log(meshbal))).
double propose_dt_mesh(double dt, double mesherr, double meshbal,
                       const StepControlParams& control);

} // namespace hrnls
