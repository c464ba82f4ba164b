#include "hrnls/monitor.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hrnls;

TEST_SUITE("monitor") {

TEST_CASE("curvature root of a quadratic is sqrt(2) on any mesh") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto x = oracle::random_nodes(-3.0, 5.0, 37, seed);
        const auto w = curvature_root(oracle::sample(x, [](double s) { return s * s; }), Mesh(x));
        for (std::size_t i = 1; i + 1 < x.size(); ++i) {
            CHECK(w[i] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        }
        CHECK(w.front() == w[1]);
        CHECK(w.back() == w[w.size() - 2]);
    }
}

TEST_CASE("curvature root vanishes on constant and linear data") {
    const auto x = oracle::random_nodes(0.0, 1.0, 20, 7);
    for (double v : curvature_root(std::vector<double>(x.size(), 2.5), Mesh(x))) CHECK(v == 0.0);
    const auto lin = oracle::sample(x, [](double s) { return 3.0 * s + 1.0; });
    for (double v : curvature_root(lin, Mesh(x))) CHECK(v == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("curvature root converges to sqrt|f''| at second order") {
    std::vector<double> h, err;
    for (std::size_t n : {40u, 80u, 160u, 320u}) {
        const auto x = oracle::uniform_nodes(0.0, 3.0, n);
        const auto w = curvature_root(oracle::sample(x, [](double s) { return std::sin(s); }), Mesh(x));
        double e = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            // keep away from the zero of sin where sqrt loses smoothness
            if (x[i] < 0.3 || x[i] > 2.8) continue;
            e = std::max(e, std::abs(w[i] - std::sqrt(std::sin(x[i]))));
        }
        h.push_back(3.0 / double(n));
        err.push_back(e);
    }
    CHECK(oracle::observed_order(h, err) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("monitor floor is the trapezoidal mean") {
    const auto x = oracle::random_nodes(-1.0, 4.0, 13, 11);
    const Mesh mesh(x);
    CHECK(monitor_floor(std::vector<double>(x.size(), 0.7), mesh) == doctest::Approx(0.7));
    CHECK(monitor_floor(std::vector<double>(x.size(), 0.0), mesh) == 0.0);
    CHECK(monitor_floor(std::vector<double>{0.0, 1.0, 0.0}, Mesh::uniform(0.0, 2.0, 2)) ==
          doctest::Approx(0.5));

    // piecewise linear w integrates exactly under the trapezoid rule
    const auto w = oracle::sample(x, [](double s) { return 2.0 + s; });
    const double exact = oracle::simpson([](double s) { return 2.0 + s; }, -1.0, 4.0, 2) / 5.0;
    CHECK(monitor_floor(w, mesh) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("assembled monitor") {
    const auto x = oracle::uniform_nodes(0.0, 1.0, 16);
    const Mesh mesh(x);

    SUBCASE("linear fields give a zero profile") {
        FieldPair f(oracle::sample(x, [](double s) { return 2.0 * s; }),
                    oracle::sample(x, [](double s) { return 1.0 - s; }));
        const auto p = assemble_monitor(f, mesh);
        for (double m : p.midpoint) CHECK(m == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(eta(p, mesh) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("quadratic real part") {
        FieldPair f(oracle::sample(x, [](double s) { return s * s; }),
                    std::vector<double>(x.size(), 0.0));
        const auto p = assemble_monitor(f, mesh);
        CHECK(p.floor_u == doctest::Approx(std::sqrt(2.0)));
        CHECK(p.floor_v == 0.0);
        for (double m : p.midpoint) CHECK(m == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("floor override replaces both floors") {
        FieldPair f(oracle::sample(x, [](double s) { return std::sin(3 * s); }),
                    oracle::sample(x, [](double s) { return s * s * s; }));
        const auto p = assemble_monitor(f, mesh, 1e-3);
        CHECK(p.floor_u == 1e-3);
        CHECK(p.floor_v == 1e-3);
    }
    SUBCASE("adding constants to the fields leaves the profile unchanged") {
        auto u = oracle::sample(x, [](double s) { return std::cos(4 * s); });
        auto v = oracle::sample(x, [](double s) { return s * s * (1 - s); });
        const auto p0 = assemble_monitor(FieldPair(u, v), mesh);
        for (auto& a : u) a += 3.0;
        for (auto& a : v) a -= 0.25;
        const auto p1 = assemble_monitor(FieldPair(u, v), mesh);
        for (std::size_t i = 0; i < p0.midpoint.size(); ++i) {
            CHECK(p1.midpoint[i] == doctest::Approx(p0.midpoint[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("smoothing") {
    const double r = 2.0 / 3.0;
    SUBCASE("constants are preserved") {
        const auto s = smooth_monitor(std::vector<double>(25, 1.7));
        for (double v : s) CHECK(std::abs(v - 1.7) <= 1e-14);
    }
    SUBCASE("isolated spike with a full stencil") {
        std::vector<double> m(21, 0.0);
        m[10] = 1.0;
        const auto s = smooth_monitor(m);
        const double total = 1.0 + 2.0 * (r + r * r + r * r * r);
        CHECK(s[10] == doctest::Approx(1.0 / total).epsilon(1e-14));
        CHECK(s[12] == doctest::Approx(r * r / total).epsilon(1e-14));
        CHECK(s[14] == 0.0);
    }
    SUBCASE("truncated stencil at the boundary") {
        std::vector<double> m(10, 0.0);
        m[0] = 1.0;
        const double total = 1.0 + r + r * r + r * r * r;
        CHECK(smooth_monitor(m)[0] == doctest::Approx(1.0 / total).epsilon(1e-14));
    }
    SUBCASE("single cell") {
        CHECK(smooth_monitor(std::vector<double>{4.2}) == std::vector<double>{4.2});
    }
    SUBCASE("range is preserved") {
        std::mt19937 gen(5);
        std::uniform_real_distribution<double> d(0.01, 10.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> m(50);
            for (auto& v : m) v = d(gen);
            const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
            for (double v : smooth_monitor(m)) {
                CHECK(v >= *lo - 1e-14);
                CHECK(v <= *hi + 1e-14);
            }
        }
    }
}

TEST_CASE("difficulty indicator") {
    const Mesh mesh = Mesh::uniform(-2.0, 3.0, 10);
    CHECK(eta(std::vector<double>(10, 0.4), mesh) == doctest::Approx(std::pow(0.4 * 5.0 / 10, 2)));
    CHECK(eta(std::vector<double>(10, 0.0), mesh) == 0.0);

    const Mesh fine = Mesh::uniform(-2.0, 3.0, 20);
    const double coarse_eta = eta(std::vector<double>(10, 0.4), mesh);
    const double fine_eta = eta(std::vector<double>(20, 0.4), fine);
    CHECK(std::sqrt(fine_eta) == doctest::Approx(0.5 * std::sqrt(coarse_eta)));
}

TEST_CASE("flat profile falls back to a uniform weight") {
    const auto p = positive_monitor(std::vector<double>(6, 0.0));
    for (double v : p) CHECK(v == 1.0);
}

}
