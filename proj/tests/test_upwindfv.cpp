#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "advect/analysis.hpp"
#include "advect/run.hpp"

using namespace advect;

namespace {

SchemeConfig config_with(double xi, double c0 = 1.0) {
    SchemeConfig c;
    c.xi = xi;
    c.c0 = c0;
    return c;
}

}  // namespace

TEST_CASE("indicator projection on aligned interfaces") {
    const Mesh mesh = build_cartesian(2, 2, {0, 1, 0, 1});
    const SchemeConfig cfg = config_with(0.1);

    const auto left_half = project_initial(
        mesh, InitialData::indicator_box({0.0, 0.5, 0.0, 1.0}), cfg);
    // row-major cells: (0,0),(1,0),(0,1),(1,1); left column covered
    CHECK(left_half.values[0] == doctest::Approx(1.0));
    CHECK(left_half.values[2] == doctest::Approx(1.0));
    CHECK(left_half.values[1] == doctest::Approx(0.0));
    CHECK(left_half.values[3] == doctest::Approx(0.0));

    const auto quarter_strip = project_initial(
        mesh, InitialData::indicator_box({0.0, 0.25, 0.0, 1.0}), cfg);
    CHECK(quarter_strip.values[0] == doctest::Approx(0.5));
    CHECK(quarter_strip.values[2] == doctest::Approx(0.5));
    CHECK(quarter_strip.values[1] == doctest::Approx(0.0));
}

TEST_CASE("projected mass equals the clipped polygon area") {
    // quarter-disk approximated by a fine polygon sector
    std::vector<Vec2> sector{{0.0, 0.0}};
    const int arcs = 64;
    for (int i = 0; i <= arcs; ++i) {
        const double a = i * (std::numbers::pi / 2) / arcs;
        sector.push_back({0.8 * std::cos(a), 0.8 * std::sin(a)});
    }
    const double area = polygon_area(sector);
    for (const Mesh& mesh : {build_cartesian(16, 16, {0, 1, 0, 1}),
                             build_perturbed_cartesian(13, 17, {0, 1, 0, 1}, 0.3, 5)}) {
        const auto u = project_initial(mesh, InitialData::indicator({sector}),
                                       config_with(0.1));
        CompensatedSum m;
        for (const Cell& c : mesh.cells) m.add(c.area * u.values[c.id]);
        CHECK(m.value() == doctest::Approx(area).epsilon(1e-12));
    }
}

TEST_CASE("projection rejects data outside the domain") {
    const Mesh mesh = build_cartesian(4, 4, {0, 1, 0, 1});
    CHECK_THROWS_AS(project_initial(mesh,
                                    InitialData::indicator_box({0.5, 1.5, 0.2, 0.4}),
                                    config_with(0.1)),
                    std::invalid_argument);
}

TEST_CASE("piecewise-constant projection is exact on aligned aux grids") {
    const Mesh mesh = build_cartesian(4, 4, {0, 1, 0, 1});
    // 2x2 aux grid: values become exact cell averages
    const InitialData data =
        InitialData::piecewise(2, 2, {0, 1, 0, 1}, {1.0, 2.0, 3.0, 4.0});
    const auto u = project_initial(mesh, data, config_with(0.1));
    CHECK(u.values[0] == doctest::Approx(1.0));
    CHECK(u.values[3] == doctest::Approx(2.0));
    CHECK(u.values[12] == doctest::Approx(3.0));
    CHECK(u.values[15] == doctest::Approx(4.0));
}

TEST_CASE("analytic projection: constant data projects to the constant") {
    const Mesh mesh = build_perturbed_cartesian(5, 5, {0, 1, 0, 1}, 0.3, 77);
    const auto u = project_initial(mesh, InitialData::analytic_constant(2.5),
                                   config_with(0.1));
    for (double v : u.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("sampled projection mode approaches the exact clip") {
    const Mesh mesh = build_perturbed_cartesian(6, 6, {0, 1, 0, 1}, 0.2, 3);
    const InitialData disk = InitialData::indicator_box({0.22, 0.63, 0.31, 0.72});
    SchemeConfig exact = config_with(0.1);
    SchemeConfig sampled = config_with(0.1);
    sampled.projection = ProjectionMode::sampled;
    sampled.sample_density = 64;
    const auto ue = project_initial(mesh, disk, exact);
    const auto us = project_initial(mesh, disk, sampled);
    for (int i = 0; i < mesh.n_cells(); ++i)
        CHECK(us.values[i] == doctest::Approx(ue.values[i]).epsilon(0.05).scale(1.0));
}

TEST_CASE("cfl timestep bounds from the paper formula") {
    // 10x10 cells of side 0.1: |K| = 0.01
    const Mesh mesh = build_cartesian(10, 10, {0, 1, 0, 1}, BoundaryKind::periodic);
    SUBCASE("one inflow edge") {
        const CflResult r = cfl_timestep(mesh, VelocityField::uniform(1.0, 0.0),
                                         config_with(0.1, 1e18), 0.18);
        CHECK(r.dt_bound == doctest::Approx(0.09).epsilon(1e-13));
        // largest dt of the form t/(N+1) under the bound: t = (N+1) dt exactly
        CHECK(r.nsteps() * r.dt == doctest::Approx(0.18).epsilon(1e-15));
        CHECK(r.dt <= r.dt_bound * (1.0 + 1e-12));
        if (r.nsteps() > 1)
            CHECK(0.18 / (r.nsteps() - 1) > r.dt_bound * (1.0 - 1e-9));
    }
    SUBCASE("two inflow edges halve the bound") {
        const CflResult r = cfl_timestep(mesh, VelocityField::uniform(1.0, 1.0),
                                         config_with(0.1, 1e18), 0.18);
        CHECK(r.dt_bound == doctest::Approx(0.045).epsilon(1e-13));
    }
    SUBCASE("c0 h caps the step") {
        // c0 h = 0.05 < 0.09
        const double c0 = 0.05 / std::hypot(0.1, 0.1);
        const CflResult r = cfl_timestep(mesh, VelocityField::uniform(1.0, 0.0),
                                         config_with(0.1, c0), 0.18);
        CHECK(r.dt_bound == doctest::Approx(0.05).epsilon(1e-13));
    }
    SUBCASE("zero field falls back to min(c0 h, t)") {
        const CflResult r = cfl_timestep(mesh, VelocityField::uniform(0.0, 0.0),
                                         config_with(0.1, 10.0), 0.5);
        CHECK(r.dt == doctest::Approx(0.5));
        CHECK(r.nsteps() == 1);
    }
    SUBCASE("horizon is hit exactly: t = (N+1) dt") {
        const CflResult r = cfl_timestep(mesh, VelocityField::uniform(1.0, 0.0),
                                         config_with(0.1, 1e18), 0.5);
        CHECK(r.nsteps() * r.dt == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(r.dt <= r.dt_bound * (1.0 + 1e-12));
    }
}

TEST_CASE("upwind step: single inflow edge convex combination") {
    // two cells, flow east, periodic; pick dt so the weight is 1/2
    const Mesh mesh = build_cartesian(2, 1, {0, 1, 0, 0.5}, BoundaryKind::periodic);
    const VelocityField f = VelocityField::uniform(1.0, 0.0);
    // |K| = 0.25, inflow flux 0.5 -> weight = dt*0.5/0.25 = 2 dt; dt = 0.25
    const EdgeFluxTable table(mesh, f, 0.25, 1);
    GridFunction u;
    u.mesh = &mesh;
    u.values = {0.0, 1.0};
    const GridFunction v = upwind_step(u, table, 0.25, 0.0);
    CHECK(v.values[0] == doctest::Approx(0.5));
    CHECK(v.values[1] == doctest::Approx(0.5));
    CHECK(v.step == 1);
}

TEST_CASE("constant fields are fixed points of the step") {
    const Mesh mesh = build_perturbed_cartesian(6, 6, {0, 1, 0, 1}, 0.3, 4);
    const VelocityField f = VelocityField::cellular(1.0);
    const SchemeConfig cfg = config_with(0.2);
    const CflResult cfl = cfl_timestep(mesh, f, cfg, 0.1);
    const EdgeFluxTable table(mesh, f, cfl.dt, cfl.nsteps());
    GridFunction u;
    u.mesh = &mesh;
    u.values.assign(mesh.cells.size(), 3.25);
    const GridFunction v = upwind_step(u, table, cfl.dt, cfg.xi);
    for (double val : v.values) CHECK(val == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("unit CFL weight shifts the upwind value exactly") {
    // 8 columns, side 1/8 (dyadic); dt = |K|/|V_in| = 1/8 exactly
    const Mesh mesh = build_cartesian(8, 1, {0, 1, 0, 0.125}, BoundaryKind::periodic);
    const VelocityField f = VelocityField::uniform(1.0, 0.0);
    const EdgeFluxTable table(mesh, f, 0.125, 1);
    GridFunction u;
    u.mesh = &mesh;
    u.values = {0.0, 0.125, 0.25, 1.0, 0.5, 0.0, 0.75, 0.3};
    const GridFunction v = upwind_step(u, table, 0.125, 0.0);
    for (int i = 0; i < 8; ++i)
        CHECK(v.values[i] == u.values[(i + 7) % 8]);  // bitwise shift
}

TEST_CASE("step refuses a CFL violation naming the cell") {
    const Mesh mesh = build_cartesian(4, 4, {0, 1, 0, 1}, BoundaryKind::periodic);
    const VelocityField f = VelocityField::uniform(1.0, 0.0);
    const EdgeFluxTable table(mesh, f, 1.0, 1);  // dt far beyond the bound
    GridFunction u;
    u.mesh = &mesh;
    u.values.assign(mesh.cells.size(), 1.0);
    CHECK_THROWS_AS(upwind_step(u, table, 1.0, 0.0), CflViolation);
}

TEST_CASE("run_to_time trajectory endpoints and zero-field identity") {
    const Mesh mesh = build_cartesian(8, 8, {0, 1, 0, 1});
    const SchemeConfig cfg = config_with(0.1);
    const InitialData data = InitialData::indicator_box({0.25, 0.5, 0.25, 0.5});

    // one step horizon: trajectory of length 2
    const VelocityField zero = VelocityField::cellular(0.0);
    const RunResult r = run_to_time(mesh, zero, data, cfg, 0.05);
    CHECK(r.nsteps == 1);
    REQUIRE(r.snapshots.size() == 2);
    for (std::size_t i = 0; i < r.snapshots[0].values.size(); ++i)
        CHECK(r.snapshots[1].values[i] == r.snapshots[0].values[i]);  // exact
}

TEST_CASE("conservation ledger over a periodic transport run") {
    const Mesh mesh = build_cartesian(32, 32, {0, 1, 0, 1}, BoundaryKind::periodic);
    const SchemeConfig cfg = config_with(0.1);
    const InitialData data = InitialData::indicator_box({0.25, 0.5, 0.25, 0.5});
    const VelocityField f = VelocityField::uniform(1.0, 0.5);
    const RunResult r = run_to_time(mesh, f, data, cfg, 0.5);

    CHECK(r.diagnostics.mass_drift_rel <= 1e-12);
    CHECK(r.diagnostics.overshoot <= 1e-14);
    CHECK(r.diagnostics.l1_growth_rel <= 1e-12);
    CHECK(r.diagnostics.l2_growth_rel <= 1e-12);
    CHECK(r.diagnostics.max_cfl_number <= 1.0 - cfg.xi + 1e-12);
    CHECK(r.ledger.size() == static_cast<std::size_t>(r.nsteps) + 1);
}

TEST_CASE("full-period transport returns a smeared copy with identical mass") {
    const Mesh mesh = build_cartesian(64, 64, {0, 1, 0, 1}, BoundaryKind::periodic);
    const SchemeConfig cfg = config_with(0.1);
    const InitialData data = InitialData::indicator_box({0.25, 0.5, 0.25, 0.5});
    const VelocityField f = VelocityField::uniform(1.0, 0.0);
    const RunResult r = run_to_time(mesh, f, data, cfg, 1.0);  // one full period
    const auto& first = r.ledger.front();
    const auto& last = r.ledger.back();
    CHECK(last.mass == doctest::Approx(first.mass).epsilon(1e-12));
    CHECK(last.max <= first.max + 1e-14);   // smeared, never amplified
    CHECK(last.min >= first.min - 1e-14);
    CHECK(last.l2 < first.l2);              // strictly dissipative off unit CFL
}

TEST_CASE("order preservation and linearity (random property sweep)") {
    const Mesh mesh = build_perturbed_cartesian(9, 9, {0, 1, 0, 1}, 0.3, 13);
    const VelocityField f = VelocityField::cellular(1.0);
    const SchemeConfig cfg = config_with(0.15);
    const CflResult cfl = cfl_timestep(mesh, f, cfg, 0.2);
    const EdgeFluxTable table(mesh, f, cfl.dt, cfl.nsteps());

    std::mt19937_64 rng(2024);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 20; ++trial) {
        GridFunction u, v;
        u.mesh = v.mesh = &mesh;
        for (int i = 0; i < mesh.n_cells(); ++i) {
            const double base = 2.0 * unit() - 1.0;
            u.values.push_back(base);
            v.values.push_back(base + unit());  // v >= u cellwise
        }
        const auto su = upwind_step(u, table, cfl.dt, cfg.xi);
        const auto sv = upwind_step(v, table, cfl.dt, cfg.xi);
        for (int i = 0; i < mesh.n_cells(); ++i)
            CHECK(su.values[i] <= sv.values[i] + 1e-14);

        // linearity: step(a u + b v) = a step(u) + b step(v)
        const double a = 0.7, b = -1.3;
        GridFunction w;
        w.mesh = &mesh;
        for (int i = 0; i < mesh.n_cells(); ++i)
            w.values.push_back(a * u.values[i] + b * v.values[i]);
        const auto sw = upwind_step(w, table, cfl.dt, cfg.xi);
        for (int i = 0; i < mesh.n_cells(); ++i)
            CHECK(sw.values[i] ==
                  doctest::Approx(a * su.values[i] + b * sv.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("L1 contraction for signed data") {
    const Mesh mesh = build_cartesian(16, 16, {0, 1, 0, 1}, BoundaryKind::periodic);
    const VelocityField f = VelocityField::uniform(-0.8, 0.3);
    const SchemeConfig cfg = config_with(0.05);
    // signed piecewise data exercises the |.| in the L1 ledger
    std::vector<double> vals(4 * 4);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = (i % 3 == 0) ? -1.0 : 0.5;
    const InitialData data = InitialData::piecewise(4, 4, {0, 1, 0, 1}, vals);
    const RunResult r = run_to_time(mesh, f, data, cfg, 0.3);
    CHECK(r.diagnostics.l1_growth_rel <= 1e-12);
    CHECK(r.diagnostics.mass_drift_rel <= 1e-12);
}

TEST_CASE("gridfunction snapshot round trip") {
    const Mesh mesh = build_cartesian(3, 3, {0, 1, 0, 1});
    GridFunction u;
    u.mesh = &mesh;
    u.time = 0.3330000000000001;
    for (int i = 0; i < 9; ++i) u.values.push_back(std::sqrt(2.0) * i / 7.0);
    std::stringstream buf;
    write_gridfunction(buf, u);
    const GridFunction v = read_gridfunction(buf);
    CHECK(v.time == u.time);
    REQUIRE(v.values.size() == u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(v.values[i] == u.values[i]);  // 17 digits round-trip bit exact
}
