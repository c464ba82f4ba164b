#include "hrnls/physics.hpp"

#include "hrnls/errors.hpp"

#include <cmath>
#include <type_traits>

namespace hrnls {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

std::pair<double, double> soliton_at(const SolitonParams& s, double q, double x, double t) {
    const double amplitude = std::sqrt(2.0 * s.a / q) * sech(std::sqrt(s.a) * (x - s.x0 - s.c * t));
    const double phase = 0.5 * s.c * (x - s.x0) - 0.25 * (s.c * s.c - 4.0 * s.a) * t;
    return {amplitude * std::cos(phase), amplitude * std::sin(phase)};
}

} // namespace

FieldPair nlse_rhs(const FieldPair& fields, const Mesh& mesh, std::span<const double> xdot,
                   double q) {
    const auto w = pack_interior(fields);
    std::vector<double> f(w.size());
    nlse_rhs_packed(mesh.nodes(), xdot, q, w, f);
    auto out = unpack_interior(f);
    return out;
}

std::vector<double> pack_interior(const FieldPair& fields) {
    const std::size_t n = fields.size();
    std::vector<double> w(n >= 2 ? 2 * (n - 2) : 0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        w[2 * (i - 1)] = fields.u[i];
        w[2 * (i - 1) + 1] = fields.v[i];
    }
    return w;
}

FieldPair unpack_interior(std::span<const double> packed) {
    const std::size_t m = packed.size() / 2;
    FieldPair out(m + 2);
    for (std::size_t k = 0; k < m; ++k) {
        out.u[k + 1] = packed[2 * k];
        out.v[k + 1] = packed[2 * k + 1];
    }
    return out;
}

void nlse_rhs_packed(std::span<const double> x, std::span<const double> xdot, double q,
                     std::span<const double> w, std::span<double> f) {
    const std::size_t m = w.size() / 2; // interior node count N-1
    auto U = [&](std::size_t i) { return (i == 0 || i > m) ? 0.0 : w[2 * (i - 1)]; };
    auto V = [&](std::size_t i) { return (i == 0 || i > m) ? 0.0 : w[2 * (i - 1) + 1]; };

    for (std::size_t i = 1; i <= m; ++i) {
        const double hl = x[i] - x[i - 1];
        const double hr = x[i + 1] - x[i];
        const double hs = hl + hr;
        const double ui = U(i), vi = V(i);
        const double d2u = 2.0 / hs * ((U(i + 1) - ui) / hr - (ui - U(i - 1)) / hl);
        const double d2v = 2.0 / hs * ((V(i + 1) - vi) / hr - (vi - V(i - 1)) / hl);
        const double du = (U(i + 1) - U(i - 1)) / hs;
        const double dv = (V(i + 1) - V(i - 1)) / hs;
        const double rho2 = ui * ui + vi * vi;
        f[2 * (i - 1)] = xdot[i] * du - d2v - q * rho2 * vi;
        f[2 * (i - 1) + 1] = xdot[i] * dv + d2u + q * rho2 * ui;
    }
}

void nlse_jacobian_packed(std::span<const double> x, std::span<const double> xdot, double q,
                          std::span<const double> w, BandMatrix& jac) {
    const std::size_t m = w.size() / 2;
    jac.set_zero();
    for (std::size_t i = 1; i <= m; ++i) {
        const double hl = x[i] - x[i - 1];
        const double hr = x[i + 1] - x[i];
        const double hs = hl + hr;
        const double ui = w[2 * (i - 1)];
        const double vi = w[2 * (i - 1) + 1];
        const double cr = 2.0 / (hs * hr);
        const double cl = 2.0 / (hs * hl);
        const double adv = xdot[i] / hs;

        const std::size_t ru = 2 * (i - 1);
        const std::size_t rv = ru + 1;

        // diagonal block
        jac(ru, ru) = -2.0 * q * ui * vi;
        jac(ru, rv) = (cr + cl) - q * (ui * ui + 3.0 * vi * vi);
        jac(rv, ru) = -(cr + cl) + q * (3.0 * ui * ui + vi * vi);
        jac(rv, rv) = 2.0 * q * ui * vi;

        if (i > 1) {
            const std::size_t cu = ru - 2, cv = ru - 1;
            jac(ru, cu) = -adv;
            jac(ru, cv) = -cl;
            jac(rv, cu) = cl;
            jac(rv, cv) = -adv;
        }
        if (i < m) {
            const std::size_t cu = ru + 2, cv = ru + 3;
            jac(ru, cu) = adv;
            jac(ru, cv) = -cr;
            jac(rv, cu) = cr;
            jac(rv, cv) = adv;
        }
    }
}

std::pair<double, double> exact_single_soliton(const SolitonParams& s, double q, double x,
                                               double t) {
    return soliton_at(s, q, x, t);
}

std::pair<double, double> initial_condition(const ProblemConfig& problem, double x) {
    return std::visit(
        [&](const auto& ic) -> std::pair<double, double> {
            using T = std::decay_t<decltype(ic)>;
            if constexpr (std::is_same_v<T, SingleSoliton>) {
                return soliton_at(ic.s, problem.q, x, 0.0);
            } else if constexpr (std::is_same_v<T, TwoSoliton>) {
                const auto [u1, v1] = soliton_at(ic.first, problem.q, x, 0.0);
                const auto [u2, v2] = soliton_at(ic.second, problem.q, x, 0.0);
                return {u1 + u2, v1 + v2};
            } else {
                return {sech(x), 0.0};
            }
        },
        problem.initial);
}

FieldPair sample_initial_condition(const ProblemConfig& problem, const Mesh& mesh) {
    FieldPair f(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const auto [u, v] = initial_condition(problem, mesh[i]);
        f.u[i] = u;
        f.v[i] = v;
    }
    f.zero_boundary();
    return f;
}

std::function<double(double)> exact_modulus(const ProblemConfig& problem, double t) {
    if (const auto* single = std::get_if<SingleSoliton>(&problem.initial)) {
        const SolitonParams s = single->s;
        const double q = problem.q;
        return [s, q, t](double x) {
            return std::sqrt(2.0 * s.a / q) / std::cosh(std::sqrt(s.a) * (x - s.x0 - s.c * t));
        };
    }
    return {};
}

ConservedQuantities conserved_quantities(const FieldPair& fields, const Mesh& mesh, double q) {
    const auto x = mesh.nodes();
    const auto& U = fields.u;
    const auto& V = fields.v;
    ConservedQuantities out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double hi = x[i] - x[i - 1];
        const double hn = x[i + 1] - x[i];
        const double rho2 = U[i] * U[i] + V[i] * V[i];
        out.charge += 0.5 * (hi + hn) * rho2;
        const double gu = (U[i + 1] - U[i]) / hi;
        const double gv = (V[i + 1] - V[i]) / hi;
        out.energy += hi * (gu * gu + gv * gv - 0.5 * q * rho2 * rho2);
    }
    return out;
}

double l2_norm(std::span<const double> e, const Mesh& mesh) {
    const auto x = mesh.nodes();
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        sum += 0.5 * (x[i] - x[i - 1]) * (e[i] * e[i] + e[i - 1] * e[i - 1]);
    }
    return std::sqrt(sum / mesh.width());
}

double l2_error(const FieldPair& fields, const Mesh& mesh,
                const std::function<double(double)>& exact) {
    std::vector<double> e(mesh.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = std::hypot(fields.u[i], fields.v[i]) - exact(mesh[i]);
    }
    return l2_norm(e, mesh);
}

} // namespace hrnls
