#include "hrnls/config.hpp"
#include "hrnls/driver.hpp"
#include "hrnls/errors.hpp"
#include "hrnls/physics.hpp"

#include <doctest.h>

#include <cmath>

using namespace hrnls;

namespace {

RunConfig short_single_soliton(double T) {
    RunConfig c = make_preset("single_soliton");
    c.problem.final_time = T;
    c.output.snapshot_times = {0.25, 0.5};
    return c;
}

} // namespace

TEST_SUITE("driver") {

TEST_CASE("initial node count") {
    SUBCASE("single soliton lands within four cells of 78") {
        Solver s(make_preset("single_soliton"));
        const auto st = s.initialise();
        CHECK(st.mesh.cells() >= 74);
        CHECK(st.mesh.cells() <= 82);
        const auto rec = s.describe(st);
        CHECK(rec.eta > 0.8 * 1.5e-2);
        CHECK(rec.eta < 1.4 * 1.5e-2);
    }
    SUBCASE("tolerance-study preset starts from 67 nodes") {
        Solver s(make_preset("single_soliton_tolprop"));
        CHECK(s.initialise().mesh.cells() == 67);
    }
    SUBCASE("uniform mode keeps the requested uniform mesh") {
        RunConfig c = make_preset("single_soliton");
        c.mode = RunMode::Uniform;
        c.fixed_cells = 400;
        Solver s(c);
        const auto st = s.initialise();
        CHECK(st.mesh.size() == 401);
        CHECK(st.mesh == Mesh::uniform(-30.0, 70.0, 400));
    }
    SUBCASE("an unreachable band is reported") {
        RunConfig c = make_preset("single_soliton");
        c.max_init_iterations = 1;
        c.refine.rtol = 1e-5;
        Solver s(c);
        CHECK_THROWS_AS(s.initialise(), InitialisationFailed);
    }
}

TEST_CASE("zero field on a fixed node count") {
    RunConfig c = make_preset("single_soliton");
    c.mode = RunMode::ROnly;
    c.fixed_cells = 20;
    c.problem.initial = SingleSoliton{SolitonParams{1.0, 1.0, 1e4}};
    c.problem.final_time = 1.0;
    const auto r = run(c);
    for (std::size_t i = 0; i < r.final_state.mesh.size(); ++i) {
        CHECK(r.final_state.mesh[i] == doctest::Approx(Mesh::uniform(-30.0, 70.0, 20)[i]));
        CHECK(r.final_state.fields.u[i] == 0.0);
    }
    for (std::size_t i = 2; i + 1 < r.series.size(); ++i) {
        CHECK(r.series[i].dt == doctest::Approx(2.0 * r.series[i - 1].dt));
    }
    CHECK(r.series.back().t == 1.0);
}

TEST_CASE("T = 0 returns the initial state") {
    RunConfig c = make_preset("single_soliton");
    c.problem.final_time = 0.0;
    const auto r = run(c);
    CHECK(r.series.size() == 1);
    CHECK(r.snapshots.size() == 1);
    CHECK(r.counters.nstp == 0);
    CHECK(r.series[0].t == 0.0);
}

TEST_CASE("short hr run") {
    const auto r = run(short_single_soliton(1.0));
    const auto& cfg = r.config;

    SUBCASE("time is strictly increasing and ends on T") {
        for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i].t > r.series[i - 1].t);
        CHECK(r.series.back().t == 1.0);
        CHECK(r.final_state.t == 1.0);
    }
    SUBCASE("snapshots land on their times") {
        REQUIRE(r.snapshots.size() == 4);
        CHECK(r.snapshots[0].t == 0.0);
        CHECK(r.snapshots[1].t == 0.25);
        CHECK(r.snapshots[2].t == 0.5);
        CHECK(r.snapshots[3].t == 1.0);
    }
    SUBCASE("indicator stays in band unless the step refined") {
        for (std::size_t i = 1; i < r.series.size(); ++i) {
            const auto& s = r.series[i];
            if (s.refined) continue;
            CHECK(s.eta > cfg.refine.beta * cfg.refine.rtol);
            CHECK(s.eta < cfg.refine.alpha * cfg.refine.rtol);
        }
    }
    SUBCASE("counters are consistent") {
        const auto& c = r.counters;
        CHECK(c.nstp == static_cast<std::int64_t>(r.series.size()) - 1);
        CHECK(c.nmin <= c.nmax);
        CHECK(c.bs >= c.jacs);
        CHECK(c.jacs > 0);
        for (const auto& s : r.series) {
            CHECK(s.err < cfg.control.etol);
            CHECK(s.mesherr < *cfg.control.meshtol);
        }
    }
    SUBCASE("automatic mesh tolerances are resolved") {
        REQUIRE(cfg.control.meshtol.has_value());
        REQUIRE(cfg.control.meshbal.has_value());
        CHECK(*cfg.control.meshbal < *cfg.control.meshtol);
        CHECK(*cfg.control.meshtol == doctest::Approx(0.5 * 100.0 / double(r.initial_cells)));
    }
}

TEST_CASE("runs are deterministic") {
    const auto a = run(short_single_soliton(0.5));
    const auto b = run(short_single_soliton(0.5));
    CHECK(a.counters == b.counters);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) {
        CHECK(a.series[i].t == b.series[i].t);
        CHECK(a.series[i].eta == b.series[i].eta);
        CHECK(a.series[i].l2_error == b.series[i].l2_error);
    }
    CHECK(a.final_state.fields == b.final_state.fields);
    CHECK(a.final_state.mesh == b.final_state.mesh);
}

TEST_CASE("uniform mode matches a plain method-of-lines integration") {
    RunConfig c = make_preset("uniform_baseline");
    c.problem.final_time = 0.2;
    Solver s(c);
    State st = s.initialise();
    st.t = 0.0;
    st.dt = c.control.dt0;
    st.fields = sample_initial_condition(c.problem, st.mesh);

    FieldPair manual = st.fields;
    std::vector<double> k1;
    RunCounters counters;
    for (int n = 0; n < 6; ++n) {
        const double t0 = st.t;
        const auto rec = s.advance_step(st, 0.2);
        const auto step = sdirk2_field_step(manual, st.mesh, st.mesh, t0, rec.dt, c.problem.q,
                                            c.control, counters, k1);
        k1 = step.k1;
        manual = step.solution;
        manual.zero_boundary();
        for (std::size_t i = 0; i < manual.size(); ++i) {
            CHECK(std::abs(st.fields.u[i] - manual.u[i]) <= 1e-13);
            CHECK(std::abs(st.fields.v[i] - manual.v[i]) <= 1e-13);
        }
    }
}

TEST_CASE("mean conserved quantities over a run") {
    RunConfig c = short_single_soliton(2.0);
    const auto r = run(c);
    double q = 0.0;
    for (const auto& s : r.series) q += s.charge;
    CHECK(r.mean_charge() == doctest::Approx(q / double(r.series.size())));
    CHECK(std::abs(r.mean_charge() - 4.0) < 2e-2);
    CHECK(std::abs(r.mean_energy() + 1.0 / 3.0) < 6e-2);
}

TEST_CASE("invalid run configuration") {
    RunConfig c = make_preset("single_soliton");
    c.mode = RunMode::ROnly;
    c.fixed_cells = 1;
    CHECK_THROWS_AS(Solver{c}, ConfigError);
    c = make_preset("single_soliton");
    c.problem.final_time = -1.0;
    CHECK_THROWS_AS(run(c), ConfigError);
}

}
