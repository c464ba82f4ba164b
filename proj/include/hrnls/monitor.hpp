#pragma once

#include "hrnls/mesh.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hrnls {

struct MonitorParams {
    double gamma = 2.0; ///< smoothing decay, weights (gamma/(gamma+1))^|k-i|
    int radius = 3;     ///< smoothing stencil half-width p
    /// Fixed floor for both components instead of the quadrature mean.
    std::optional<double> floor_override;

    bool operator==(const MonitorParams&) const = default;
};

/// Curvature monitor sampled at cell midpoints x_{i+1/2}, i = 0..N-1.
struct MonitorProfile {
    std::vector<double> midpoint;
    std::vector<double> smoothed;
    double floor_u = 0.0;
    double floor_v = 0.0;
    std::optional<double> floor_override;
};

/// w_i ~ sqrt|f_xx(x_i)| from the divided second difference. End values copy
/// their interior neighbour.
std::vector<double> curvature_root(std::span<const double> values, const Mesh& mesh);

/// Trapezoidal mean of w over the domain.
double monitor_floor(std::span<const double> w, const Mesh& mesh);

/// Raw midpoint monitor M = (M_u + M_v)/2 with M_u = floor_u + (w_i + w_{i+1})/2.
/// `smoothed` is left empty; see smooth_monitor / build_monitor.
MonitorProfile assemble_monitor(const FieldPair& fields, const Mesh& mesh,
                                std::optional<double> floor_override = std::nullopt);

/// Exponentially weighted average over at most 2p+1 neighbouring cells.
/// Indices outside the cell range are dropped from both sums.
std::vector<double> smooth_monitor(std::span<const double> midpoint, double gamma = 2.0,
                                   int radius = 3);

/// assemble_monitor followed by smooth_monitor.
MonitorProfile build_monitor(const FieldPair& fields, const Mesh& mesh,
                             const MonitorParams& params);

/// Difficulty indicator ((1/N) sum_i M_{i+1/2} h_{i+1})^2 on the raw monitor.
double eta(const MonitorProfile& profile, const Mesh& mesh);
double eta(std::span<const double> midpoint, const Mesh& mesh);

/// Midpoint values actually used to move or place nodes. An all-zero profile
/// (flat data with zero floor) is replaced by ones so the mesh goes uniform.
std::vector<double> positive_monitor(std::span<const double> smoothed);

} // namespace hrnls
