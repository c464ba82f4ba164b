#pragma once

#include "hrnls/banded.hpp"
#include "hrnls/mesh.hpp"
#include "hrnls/problem.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hrnls {

/// Time derivatives of (U, V) on a moving mesh:
///
///   Udot_i = xdot_i dU_i - D2V_i - q (U_i^2 + V_i^2) V_i
///   Vdot_i = xdot_i dV_i + D2U_i + q (U_i^2 + V_i^2) U_i
///
/// with central first differences d and the three-point nonuniform second
/// difference D2. Boundary derivatives are zero.
FieldPair nlse_rhs(const FieldPair& fields, const Mesh& mesh, std::span<const double> xdot,
                   double q);

/// Interior unknowns are interleaved as (U_1, V_1, U_2, V_2, ..., U_{N-1}, V_{N-1}).
/// The Jacobian of this ordering has three sub- and three super-diagonals.
inline constexpr std::size_t kNlseBandwidth = 3;

std::vector<double> pack_interior(const FieldPair& fields);
FieldPair unpack_interior(std::span<const double> packed);

/// Same right-hand side as nlse_rhs, on packed interior unknowns.
void nlse_rhs_packed(std::span<const double> nodes, std::span<const double> xdot, double q,
                     std::span<const double> w, std::span<double> f);

/// Analytic Jacobian d f / d w of nlse_rhs_packed.
void nlse_jacobian_packed(std::span<const double> nodes, std::span<const double> xdot, double q,
                          std::span<const double> w, BandMatrix& jac);

/// Real and imaginary part of one soliton at (x, t).
std::pair<double, double> exact_single_soliton(const SolitonParams& s, double q, double x,
                                               double t);

std::pair<double, double> initial_condition(const ProblemConfig& problem, double x);

/// Samples the initial condition at every node and zeroes the boundary values.
FieldPair sample_initial_condition(const ProblemConfig& problem, const Mesh& mesh);

/// Exact |psi(x, t)| when one is known (single soliton only), otherwise empty.
std::function<double(double)> exact_modulus(const ProblemConfig& problem, double t);

struct ConservedQuantities {
    double charge = 0.0; ///< Q_h
    double energy = 0.0; ///< E_h
};

/// Discrete charge and energy. The energy sum runs over i = 1..N-1 with h_i
/// weights exactly as the diagnostic is usually stated, so it omits the last cell.
ConservedQuantities conserved_quantities(const FieldPair& fields, const Mesh& mesh, double q);

/// Trapezoidal L2 norm of |psi_h| - rho, normalised by the domain width.
double l2_error(const FieldPair& fields, const Mesh& mesh,
                const std::function<double(double)>& exact_modulus);

/// Same norm for an arbitrary nodal error vector.
double l2_norm(std::span<const double> e, const Mesh& mesh);

} // namespace hrnls
