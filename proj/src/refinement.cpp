#include "hrnls/refinement.hpp"

#include "hrnls/errors.hpp"
#include "hrnls/mmpde.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace hrnls {

void RefineParams::validate() const {
    if (!(rtol > 0.0)) throw ConfigError("refine.rtol", "must be > 0");
    if (!(alpha > 1.0)) throw ConfigError("refine.alpha", "must be > 1");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("refine.beta", "must lie in (0,1)");
    if (!(kappa >= 1.0)) throw ConfigError("refine.kappa", "must be >= 1");
    if (!(maxfac > 1.0)) throw ConfigError("refine.maxfac", "must be > 1");
    if (!(minfac_enrich >= 1.0)) throw ConfigError("refine.minfac_enrich", "must be >= 1");
    if (!(minfac_coarsen > 0.0 && minfac_coarsen < 1.0)) {
        throw ConfigError("refine.minfac_coarsen", "must lie in (0,1)");
    }
    if (gtol && !(*gtol > 0.0)) throw ConfigError("refine.gtol", "must be > 0");
    if (max_equidistribution_iterations < 1) {
        throw ConfigError("refine.max_equidistribution_iterations", "must be >= 1");
    }
}

const char* to_string(RefineDecision d) noexcept {
    switch (d) {
    case RefineDecision::Keep: return "keep";
    case RefineDecision::Enrich: return "enrich";
    case RefineDecision::Coarsen: return "coarsen";
    }
    return "?";
}

RefineDecision needs_refinement(double eta, const RefineParams& p) {
    if (eta >= p.alpha * p.rtol) return RefineDecision::Enrich;
    if (eta <= p.beta * p.rtol) return RefineDecision::Coarsen;
    return RefineDecision::Keep;
}

std::size_t predict_node_count(std::size_t cells, double eta, const RefineParams& p,
                               RefineDecision direction) {
    if (direction == RefineDecision::Keep) return cells;
    const double minfac = direction == RefineDecision::Enrich ? p.minfac_enrich : p.minfac_coarsen;
    const double factor = std::min(p.maxfac, std::max(minfac, p.kappa * std::sqrt(eta / p.rtol)));
    const auto predicted =
        static_cast<std::size_t>(std::floor(static_cast<double>(cells) * factor)) + 1;
    assert(direction != RefineDecision::Enrich || predicted >= cells);
    return std::max<std::size_t>(predicted, 2);
}

std::vector<double> nodal_slopes(std::span<const double> x, std::span<const double> f) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n == 2) {
        d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
        return d;
    }
    auto three_point = [&](std::size_t a, std::size_t b, std::size_t c, double at) {
        // derivative of the quadratic through (x_a,f_a),(x_b,f_b),(x_c,f_c) at `at`
        const double xa = x[a], xb = x[b], xc = x[c];
        return f[a] * ((at - xb) + (at - xc)) / ((xa - xb) * (xa - xc)) +
               f[b] * ((at - xa) + (at - xc)) / ((xb - xa) * (xb - xc)) +
               f[c] * ((at - xa) + (at - xb)) / ((xc - xa) * (xc - xb));
    };
    d[0] = three_point(0, 1, 2, x[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three_point(i - 1, i, i + 1, x[i]);
    d[n - 1] = three_point(n - 3, n - 2, n - 1, x[n - 1]);
    return d;
}

std::vector<double> interpolate(std::span<const double> xs, std::span<const double> fs,
                                std::span<const double> xt, Interpolation kind) {
    std::vector<double> out(xt.size());
    std::vector<double> slopes;
    if (kind == Interpolation::Cubic) slopes = nodal_slopes(xs, fs);

    std::size_t cell = 0;
    const std::size_t last = xs.size() - 2;
    for (std::size_t j = 0; j < xt.size(); ++j) {
        const double xq = xt[j];
        // targets are usually sorted; fall back to a binary search otherwise
        if (cell > last || xq < xs[cell]) {
            const auto it = std::upper_bound(xs.begin(), xs.end(), xq);
            cell = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        }
        while (cell < last && xq > xs[cell + 1]) ++cell;
        cell = std::min(cell, last);

        const double h = xs[cell + 1] - xs[cell];
        const double s = (xq - xs[cell]) / h;
        if (kind == Interpolation::Linear) {
            out[j] = (1.0 - s) * fs[cell] + s * fs[cell + 1];
        } else {
            const double s2 = s * s, s3 = s2 * s;
            const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
            const double h10 = s3 - 2.0 * s2 + s;
            const double h01 = -2.0 * s3 + 3.0 * s2;
            const double h11 = s3 - s2;
            out[j] = h00 * fs[cell] + h10 * h * slopes[cell] + h01 * fs[cell + 1] +
                     h11 * h * slopes[cell + 1];
        }
    }
    return out;
}

RegridResult regrid_and_transfer(const Mesh& mesh, const FieldPair& fields, std::size_t cells,
                                 const MonitorParams& monitor, const RefineParams& params) {
    if (cells < 2) throw InvalidMesh("regrid_and_transfer: need at least two cells");
    const double gtol = params.gtol.value_or(1e-6 * mesh.width());

    auto transfer = [&](const Mesh& target) {
        FieldPair f(interpolate(mesh.nodes(), fields.u, target.nodes(), params.interpolation),
                    interpolate(mesh.nodes(), fields.v, target.nodes(), params.interpolation));
        f.zero_boundary();
        return f;
    };
    auto monitor_on = [&](const Mesh& candidate) {
        if (candidate.size() == mesh.size() && candidate == mesh) {
            return build_monitor(fields, mesh, monitor).smoothed;
        }
        return build_monitor(transfer(candidate), candidate, monitor).smoothed;
    };

    auto eq = equidistribute(monitor_on, mesh, cells, gtol, params.max_equidistribution_iterations);
    RegridResult out{eq.mesh, transfer(eq.mesh), eq.iterations, eq.converged};
    return out;
}

} // namespace hrnls
