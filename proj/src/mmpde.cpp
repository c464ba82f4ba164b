#include "hrnls/mmpde.hpp"

#include "hrnls/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace hrnls {

void MeshSolveParams::validate() const {
    if (!(tau > 0.0)) throw ConfigError("meshsolve.tau", "must be > 0");
    if (!(omega >= 0.0 && omega < 1.0)) throw ConfigError("meshsolve.omega", "must lie in [0,1)");
    if (sweeps < 1) throw ConfigError("meshsolve.sweeps", "must be >= 1");
}

MeshCoefficients mesh_rhs_coefficients(const Mesh& mesh, std::span<const double> smoothed,
                                       double tau) {
    const std::size_t n = mesh.cells();
    if (smoothed.size() != n) throw InvalidMesh("mesh_rhs_coefficients: monitor size mismatch");
    MeshCoefficients c;
    if (n < 2) return c;
    const std::size_t m = n - 1;
    c.scale.resize(m);
    c.left.resize(m);
    c.right.resize(m);
    c.nodal.resize(m);

    const auto x = mesh.nodes();
    for (std::size_t i = 1; i < n; ++i) {
        const double h_left = x[i] - x[i - 1];
        const double h_right = x[i + 1] - x[i];
        const double m_left = smoothed[i - 1];
        const double m_right = smoothed[i];
        // x_{i+1/2} - x_i = h_right/2, x_i - x_{i-1/2} = h_left/2
        const double m_node = (m_left * h_right + m_right * h_left) / (h_left + h_right);
        if (!(m_node > 0.0)) {
            std::ostringstream msg;
            msg << "non-positive nodal monitor at node " << i;
            throw InvalidMesh(msg.str());
        }
        const double d = m_node * (h_left + h_right);
        c.scale[i - 1] = 4.0 / (tau * d * d);
        c.left[i - 1] = m_left;
        c.right[i - 1] = m_right;
        c.nodal[i - 1] = m_node;
    }
    return c;
}

std::vector<double> mesh_velocity(const Mesh& mesh, const MeshCoefficients& coeffs) {
    const auto x = mesh.nodes();
    std::vector<double> xdot(x.size(), 0.0);
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double h_left = x[i] - x[i - 1];
        const double h_right = x[i + 1] - x[i];
        xdot[i] =
            coeffs.scale[i - 1] * (coeffs.right[i - 1] * h_right - coeffs.left[i - 1] * h_left);
    }
    return xdot;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    std::vector<double> c(n);
    double denom = diag[0];
    c[0] = n > 1 ? upper[0] / denom : 0.0;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = i + 1 < n ? upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

Mesh solve_mesh_step(const Mesh& base, const Mesh& iterate, std::span<const double> smoothed,
                     double dt, const MeshSolveParams& params) {
    const std::size_t n = base.cells();
    if (iterate.cells() != n) throw InvalidMesh("solve_mesh_step: mesh size mismatch");
    if (!(dt > 0.0)) throw InvalidMesh("solve_mesh_step: dt must be positive");
    if (n < 2) return iterate;

    const auto coeffs = mesh_rhs_coefficients(iterate, smoothed, params.tau);
    const std::size_t m = n - 1;
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    const auto xb = base.nodes();
    for (std::size_t k = 0; k < m; ++k) {
        const double a = dt * coeffs.scale[k];
        lower[k] = -a * coeffs.left[k];
        upper[k] = -a * coeffs.right[k];
        diag[k] = 1.0 + a * (coeffs.left[k] + coeffs.right[k]);
        // strict diagonal dominance holds for any dt > 0 and positive monitor
        assert(diag[k] > std::abs(lower[k]) + std::abs(upper[k]));
        rhs[k] = xb[k + 1];
    }
    rhs[0] -= lower[0] * base.left();
    rhs[m - 1] -= upper[m - 1] * base.right();
    solve_tridiagonal(lower, diag, upper, rhs);

    std::vector<double> x(n + 1);
    x.front() = base.left();
    x.back() = base.right();
    const double w = params.omega;
    for (std::size_t k = 0; k < m; ++k) x[k + 1] = (1.0 - w) * rhs[k] + w * iterate[k + 1];
    check_monotone(x);
    return Mesh(std::move(x));
}

std::vector<double> cell_masses(const Mesh& mesh, std::span<const double> monitor) {
    const auto x = mesh.nodes();
    std::vector<double> mass(mesh.cells());
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = monitor[i] * (x[i + 1] - x[i]);
    return mass;
}

Mesh equidistribute_once(const Mesh& mesh, std::span<const double> monitor, std::size_t cells) {
    if (cells < 1) throw InvalidMesh("equidistribute: need at least one cell");
    const auto density = positive_monitor(monitor);
    const auto mass = cell_masses(mesh, density);

    std::vector<double> cumulative(mass.size() + 1, 0.0);
    for (std::size_t i = 0; i < mass.size(); ++i) cumulative[i + 1] = cumulative[i] + mass[i];
    const double total = cumulative.back();

    const auto x = mesh.nodes();
    std::vector<double> out(cells + 1);
    out.front() = mesh.left();
    out.back() = mesh.right();
    std::size_t cell = 0;
    for (std::size_t j = 1; j < cells; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(cells);
        while (cell + 1 < mass.size() && cumulative[cell + 1] < target) ++cell;
        const double frac = mass[cell] > 0.0 ? (target - cumulative[cell]) / mass[cell] : 0.0;
        out[j] = x[cell] + std::clamp(frac, 0.0, 1.0) * (x[cell + 1] - x[cell]);
    }
    check_monotone(out);
    return Mesh(std::move(out));
}

EquidistributionResult equidistribute(const MonitorOnMesh& monitor, const Mesh& start,
                                      std::size_t cells, double gtol, int max_iterations) {
    EquidistributionResult result{start, 0, false, 0.0};
    Mesh current = start;
    for (int it = 1; it <= max_iterations; ++it) {
        const auto m = monitor(current);
        Mesh next = equidistribute_once(current, m, cells);
        result.iterations = it;
        if (next.size() == current.size()) {
            double change = 0.0;
            for (std::size_t i = 0; i < next.size(); ++i) {
                change = std::max(change, std::abs(next[i] - current[i]));
            }
            result.last_change = change;
            if (change < gtol) {
                result.mesh = std::move(next);
                result.converged = true;
                return result;
            }
        }
        current = std::move(next);
    }
    result.mesh = std::move(current);
    return result;
}

} // namespace hrnls
