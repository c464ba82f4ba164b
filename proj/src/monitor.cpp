#include "hrnls/monitor.hpp"

#include "hrnls/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hrnls {

std::vector<double> curvature_root(std::span<const double> values, const Mesh& mesh) {
    const std::size_t n = mesh.cells();
    if (values.size() != mesh.size()) throw InvalidMesh("curvature_root: size mismatch");
    std::vector<double> w(n + 1, 0.0);
    if (n < 2) return w;

    const auto x = mesh.nodes();
    for (std::size_t i = 1; i < n; ++i) {
        const double h_left = x[i] - x[i - 1];
        const double h_right = x[i + 1] - x[i];
        const double g_right = (values[i + 1] - values[i]) / h_right;
        const double g_left = (values[i] - values[i - 1]) / h_left;
        w[i] = std::sqrt(2.0 * std::abs((g_right - g_left) / (h_right + h_left)));
    }
    w[0] = w[1];
    w[n] = w[n - 1];
    return w;
}

double monitor_floor(std::span<const double> w, const Mesh& mesh) {
    const auto x = mesh.nodes();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        sum += 0.5 * (x[i + 1] - x[i]) * (w[i + 1] + w[i]);
    }
    return sum / mesh.width();
}

MonitorProfile assemble_monitor(const FieldPair& fields, const Mesh& mesh,
                                std::optional<double> floor_override) {
    const std::size_t n = mesh.cells();
    const auto wu = curvature_root(fields.u, mesh);
    const auto wv = curvature_root(fields.v, mesh);

    MonitorProfile profile;
    profile.floor_override = floor_override;
    if (floor_override) {
        profile.floor_u = profile.floor_v = *floor_override;
    } else {
        profile.floor_u = monitor_floor(wu, mesh);
        profile.floor_v = monitor_floor(wv, mesh);
    }

    profile.midpoint.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = profile.floor_u + 0.5 * (wu[i + 1] + wu[i]);
        const double mv = profile.floor_v + 0.5 * (wv[i + 1] + wv[i]);
        profile.midpoint[i] = 0.5 * (mu + mv);
    }
    return profile;
}

std::vector<double> smooth_monitor(std::span<const double> midpoint, double gamma, int radius) {
    const auto n = static_cast<std::ptrdiff_t>(midpoint.size());
    const double ratio = gamma / (gamma + 1.0);

    std::vector<double> weights(static_cast<std::size_t>(radius) + 1);
    weights[0] = 1.0;
    for (std::size_t j = 1; j < weights.size(); ++j) weights[j] = weights[j - 1] * ratio;

    std::vector<double> out(midpoint.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - radius);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + radius);
        double num = 0.0;
        double den = 0.0;
        for (std::ptrdiff_t k = lo; k <= hi; ++k) {
            const double wk = weights[static_cast<std::size_t>(std::abs(k - i))];
            num += wk * midpoint[static_cast<std::size_t>(k)];
            den += wk;
        }
        out[static_cast<std::size_t>(i)] = num / den;
    }
    return out;
}

MonitorProfile build_monitor(const FieldPair& fields, const Mesh& mesh,
                             const MonitorParams& params) {
    auto profile = assemble_monitor(fields, mesh, params.floor_override);
    profile.smoothed = smooth_monitor(profile.midpoint, params.gamma, params.radius);
    return profile;
}

double eta(std::span<const double> midpoint, const Mesh& mesh) {
    const auto x = mesh.nodes();
    double mass = 0.0;
    for (std::size_t i = 0; i < midpoint.size(); ++i) mass += midpoint[i] * (x[i + 1] - x[i]);
    const double mean = mass / static_cast<double>(mesh.cells());
    return mean * mean;
}

double eta(const MonitorProfile& profile, const Mesh& mesh) {
    return eta(profile.midpoint, mesh);
}

std::vector<double> positive_monitor(std::span<const double> smoothed) {
    const bool all_zero =
        std::all_of(smoothed.begin(), smoothed.end(), [](double m) { return m == 0.0; });
    if (all_zero) return std::vector<double>(smoothed.size(), 1.0);
    return {smoothed.begin(), smoothed.end()};
}

} // namespace hrnls
