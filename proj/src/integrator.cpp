#include "hrnls/integrator.hpp"

#include "hrnls/errors.hpp"
#include "hrnls/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hrnls {

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace

double sdirk2_stability(double z) {
    constexpr double g = SdirkTableau::gamma;
    const double hk1 = z / (1.0 - g * z);
    const double hk2 = z * (1.0 + SdirkTableau::a21 * hk1) / (1.0 - g * z);
    return 1.0 + SdirkTableau::b1 * hk1 + SdirkTableau::b2 * hk2;
}

void StepControlParams::validate() const {
    if (!(etol > 0.0)) throw ConfigError("control.etol", "must be > 0");
    if (!(ktol > 0.0)) throw ConfigError("control.ktol", "must be > 0");
    if (meshtol && !(*meshtol > 0.0)) throw ConfigError("control.meshtol", "must be > 0");
    if (meshbal) {
        if (!(*meshbal > 0.0 && *meshbal < 1.0)) {
            throw ConfigError("control.meshbal", "must lie in (0,1)");
        }
        if (meshtol && !(*meshbal < *meshtol)) {
            throw ConfigError("control.meshbal", "must be smaller than control.meshtol");
        }
    }
    if (!(minfac > 0.0 && minfac < 1.0)) throw ConfigError("control.minfac", "must lie in (0,1)");
    if (!(maxfac > 1.0)) throw ConfigError("control.maxfac", "must be > 1");
    if (!(safety > 0.0)) throw ConfigError("control.safety", "must be > 0");
    if (newton_max_iters < 1) throw ConfigError("control.newton_max_iters", "must be >= 1");
    if (!(dt0 > 0.0)) throw ConfigError("control.dt0", "must be > 0");
}

int newton_solve(const ResidualFn& residual, const NewtonMatrixFn& matrix, std::vector<double>& x,
                 NewtonWorkspace& workspace, const NewtonOptions& options, RunCounters& counters) {
    auto& r = workspace.residual;
    auto& lu = workspace.lu;
    r.resize(x.size());
    bool have_factor = options.reuse_factorisation && workspace.factor_valid;
    int solves = 0;

    auto fail = [&](const char* why) {
        ++counters.ctf;
        std::ostringstream msg;
        msg << "Newton iteration " << why << " after " << solves << " solves";
        throw NewtonDiverged(msg.str());
    };

    for (;;) {
        residual(x, r);
        const double res_norm = max_abs(r);
        if (!std::isfinite(res_norm)) fail("produced a non-finite residual");
        if (res_norm <= options.tol) return solves;
        if (solves >= options.max_iters) fail("did not converge");

        if (!have_factor || !options.reuse_factorisation) {
            matrix(x, workspace.matrix);
            workspace.factor_valid = false;
            try {
                lu.factor(workspace.matrix);
            } catch (const SingularJacobian&) {
                ++counters.ctf;
                throw;
            }
            ++counters.jacs;
            have_factor = true;
            workspace.factor_valid = true;
        }
        lu.solve(r);
        ++counters.bs;
        ++solves;

        const double step = max_abs(r);
        if (!std::isfinite(step)) fail("produced a non-finite update");
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= r[i];
        if (step <= options.tol) return solves;
    }
}

int newton_solve_stage(const OdeSystem& system, double t, std::span<const double> base, double h,
                       std::vector<double>& k, const NewtonOptions& options,
                       RunCounters& counters, NewtonWorkspace& workspace) {
    const std::size_t n = system.dimension();
    const std::size_t bw = system.bandwidth();
    auto& y = workspace.point;
    y.resize(n);
    auto& a = workspace.matrix;
    if (a.size() != n || a.lower() != bw || a.upper() != bw) a = BandMatrix(n, bw, bw);

    auto stage_point = [&](std::span<const double> kk) {
        for (std::size_t i = 0; i < n; ++i) y[i] = base[i] + h * kk[i];
    };
    auto residual = [&](std::span<const double> kk, std::span<double> r) {
        stage_point(kk);
        system.rhs(t, y, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = kk[i] - r[i];
    };
    auto matrix = [&](std::span<const double> kk, BandMatrix& a) {
        stage_point(kk);
        system.jacobian(t, y, a);
        a.scale_add_identity(-h);
    };
    return newton_solve(residual, matrix, k, workspace, options, counters);
}

SdirkResult sdirk2_step(const OdeSystem& system, double t, std::span<const double> y, double dt,
                        const NewtonOptions& options, RunCounters& counters,
                        std::span<const double> k1_guess, NewtonWorkspace* workspace) {
    const std::size_t n = system.dimension();
    NewtonWorkspace local;
    NewtonWorkspace& ws = workspace ? *workspace : local;
    ws.factor_valid = false;
    SdirkResult out;
    const double hg = SdirkTableau::gamma * dt;

    out.k1.assign(n, 0.0);
    if (k1_guess.size() == n) std::copy(k1_guess.begin(), k1_guess.end(), out.k1.begin());
    out.newton_solves += newton_solve_stage(system, t + SdirkTableau::c1 * dt, y, hg, out.k1,
                                            options, counters, ws);

    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = y[i] + SdirkTableau::a21 * dt * out.k1[i];
    std::vector<double> k2 = out.k1;
    out.newton_solves +=
        newton_solve_stage(system, t + SdirkTableau::c2 * dt, base, hg, k2, options, counters, ws);

    out.solution.resize(n);
    out.embedded.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.solution[i] = y[i] + dt * (SdirkTableau::b1 * out.k1[i] + SdirkTableau::b2 * k2[i]);
        out.embedded[i] = y[i] + dt * out.k1[i];
    }
    return out;
}

MovingMeshNlse::MovingMeshNlse(const Mesh& start, std::vector<double> xdot, double t0, double q)
    : start_(start.vector()), xdot_(std::move(xdot)), t0_(t0), q_(q), nodes_(start_),
      nodes_time_(t0) {
    if (xdot_.size() != start_.size()) throw InvalidMesh("MovingMeshNlse: xdot size mismatch");
}

std::size_t MovingMeshNlse::bandwidth() const { return kNlseBandwidth; }

std::vector<double> MovingMeshNlse::nodes_at(double t) const {
    update_nodes(t);
    return nodes_;
}

void MovingMeshNlse::update_nodes(double t) const {
    if (t == nodes_time_) return;
    const double s = t - t0_;
    for (std::size_t i = 0; i < start_.size(); ++i) nodes_[i] = start_[i] + xdot_[i] * s;
    nodes_time_ = t;
}

void MovingMeshNlse::rhs(double t, std::span<const double> y, std::span<double> f) const {
    update_nodes(t);
    nlse_rhs_packed(nodes_, xdot_, q_, y, f);
}

void MovingMeshNlse::jacobian(double t, std::span<const double> y, BandMatrix& jac) const {
    update_nodes(t);
    nlse_jacobian_packed(nodes_, xdot_, q_, y, jac);
}

FieldStep sdirk2_field_step(const FieldPair& fields, const Mesh& mesh_old, const Mesh& mesh_new,
                            double t, double dt, double q, const StepControlParams& control,
                            RunCounters& counters, std::span<const double> k1_guess,
                            NewtonWorkspace* workspace) {
    std::vector<double> xdot(mesh_old.size());
    for (std::size_t i = 0; i < xdot.size(); ++i) xdot[i] = (mesh_new[i] - mesh_old[i]) / dt;
    // endpoints are fixed, keep their velocity exactly zero
    xdot.front() = xdot.back() = 0.0;

    MovingMeshNlse system(mesh_old, std::move(xdot), t, q);
    const auto y = pack_interior(fields);
    const NewtonOptions options{control.ktol, control.newton_max_iters, control.quasi_newton};
    auto step = sdirk2_step(system, t, y, dt, options, counters, k1_guess, workspace);

    FieldStep out{unpack_interior(step.solution), unpack_interior(step.embedded),
                  std::move(step.k1)};
    return out;
}

double solution_error(const FieldPair& full, const FieldPair& embedded, const Mesh& mesh) {
    const auto x = mesh.nodes();
    std::vector<double> e(x.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = std::hypot(full.u[i] - embedded.u[i], full.v[i] - embedded.v[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double avg = 0.5 * (e[i] + e[i + 1]);
        sum += (x[i + 1] - x[i]) * avg * avg;
    }
    return std::sqrt(sum);
}

double propose_dt_solution(double dt, double err, const StepControlParams& c) {
    if (!(err > 0.0)) return dt * c.maxfac;
    const double factor = c.safety * std::sqrt(c.etol / err);
    return dt * std::min(c.maxfac, std::max(c.minfac, factor));
}

double propose_dt_mesh(double dt, double mesherr, double meshbal, const StepControlParams& c) {
    if (!(mesherr > 0.0)) return dt * c.maxfac;
    const double factor = std::log(mesherr) / std::log(meshbal);
    return dt * std::min(c.maxfac, std::max(c.minfac, factor));
}

} // namespace hrnls
