#pragma once

#include "hrnls/mesh.hpp"
#include "hrnls/monitor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hrnls {

enum class Interpolation { Cubic, Linear };

struct RefineParams {
    double rtol = 1.5e-2;
    double alpha = 1.4; ///< upper band factor, > 1
    double beta = 0.8;  ///< lower band factor, in (0,1)
    double kappa = 1.0;
    double maxfac = 2.0;
    double minfac_enrich = 1.2;
    double minfac_coarsen = 0.3;
    /// de Boor displacement tolerance. Unset means 1e-6 (x_r - x_l).
    std::optional<double> gtol;
    int max_equidistribution_iterations = 50;
    Interpolation interpolation = Interpolation::Cubic;

    void validate() const;
    bool operator==(const RefineParams&) const = default;
};

enum class RefineDecision { Keep, Enrich, Coarsen };

const char* to_string(RefineDecision d) noexcept;

/// Keep inside the open band (beta rtol, alpha rtol), Enrich at or above it,
/// Coarsen at or below it.
RefineDecision needs_refinement(double eta, const RefineParams& params);

/// floor(N min(maxfac, max(minfac, kappa sqrt(eta/rtol)))) + 1, with minfac
/// picked by the direction.
std::size_t predict_node_count(std::size_t cells, double eta, const RefineParams& params,
                               RefineDecision direction);

/// Piecewise cubic Hermite interpolation with three-point finite-difference
/// slopes, or piecewise linear interpolation.
std::vector<double> interpolate(std::span<const double> x_from, std::span<const double> values,
                                std::span<const double> x_to, Interpolation kind);

/// Three-point nonuniform derivative estimate at every node (one-sided at ends).
std::vector<double> nodal_slopes(std::span<const double> x, std::span<const double> values);

struct RegridResult {
    Mesh mesh;
    FieldPair fields;
    int equidistribution_iterations = 0;
    bool converged = false;
};

/// Builds a `cells`-cell mesh equidistributing the monitor of the supplied
/// solution and moves the solution onto it. Each de Boor pass re-evaluates the
/// monitor from the solution interpolated from the original mesh.
RegridResult regrid_and_transfer(const Mesh& mesh, const FieldPair& fields, std::size_t cells,
                                 const MonitorParams& monitor, const RefineParams& params);

} // namespace hrnls
