#pragma once

#include "hrnls/mesh.hpp"
#include "hrnls/monitor.hpp"

#include <functional>
#include <span>
#include <vector>

namespace hrnls {

struct MeshSolveParams {
    double tau = 1e-3;  ///< temporal smoothing of the mesh equation
    double omega = 0.8; ///< under-relaxation weight on the previous iterate
    int sweeps = 4;     ///< coupled mesh/solution passes per time step

    void validate() const;
    bool operator==(const MeshSolveParams&) const = default;
};

/// Per-interior-node coefficients of the semi-discrete mesh equation
///
///   xdot_i = scale_i * (right_i * h_{i+1} - left_i * h_i),   i = 1..N-1,
///
/// with scale_i = (4/tau) (Mt_i (h_{i+1} + h_i))^-2, Mt_i the length-weighted
/// interpolant of the two neighbouring midpoint values, left_i = Mt_{i-1/2} and
/// right_i = Mt_{i+1/2}. Entry i-1 of each vector belongs to node i.
struct MeshCoefficients {
    std::vector<double> scale;
    std::vector<double> left;
    std::vector<double> right;
    std::vector<double> nodal; ///< Mt_i
};

MeshCoefficients mesh_rhs_coefficients(const Mesh& mesh, std::span<const double> smoothed,
                                       double tau);

/// xdot at all nodes (zero at both ends) from frozen coefficients.
std::vector<double> mesh_velocity(const Mesh& mesh, const MeshCoefficients& coeffs);

/// One backward-Euler solve of the mesh equation from `base` (the mesh at t^n),
/// with coefficients frozen from `iterate`, followed by under-relaxation
///
///   x_new = (1 - omega) x_* + omega * iterate.
///
/// Throws MeshTangled if the result is not strictly monotone.
Mesh solve_mesh_step(const Mesh& base, const Mesh& iterate, std::span<const double> smoothed,
                     double dt, const MeshSolveParams& params);

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored. Requires strict diagonal dominance.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Evaluates the (smoothed) midpoint monitor on a candidate mesh.
using MonitorOnMesh = std::function<std::vector<double>(const Mesh&)>;

struct EquidistributionResult {
    Mesh mesh;
    int iterations = 0;
    bool converged = false;
    double last_change = 0.0; ///< max node displacement of the final iteration
};

/// Places `cells`+1 nodes so that every cell carries the same monitor mass.
/// The monitor is treated as piecewise constant per cell; the inverse of its
/// cumulative integral is linear within each cell.
Mesh equidistribute_once(const Mesh& mesh, std::span<const double> monitor, std::size_t cells);

/// de Boor iteration: equidistribute, re-evaluate the monitor on the new mesh,
/// repeat until the max node displacement drops below `gtol` or `max_iterations`
/// is reached. A non-converged result is still a valid mesh.
EquidistributionResult equidistribute(const MonitorOnMesh& monitor, const Mesh& start,
                                      std::size_t cells, double gtol, int max_iterations = 50);

/// Monitor mass of each cell for a piecewise-constant midpoint monitor.
std::vector<double> cell_masses(const Mesh& mesh, std::span<const double> monitor);

} // namespace hrnls
