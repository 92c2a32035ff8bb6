#include "advect/run.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace advect {

namespace {

StepLedgerRow ledger_row(const Mesh& mesh, std::span<const double> u, int n,
                         double time) {
    StepLedgerRow row;
    row.n = n;
    row.time = time;
    CompensatedSum mass, l1, l2;
    double lo = u[0], hi = u[0];
    for (const Cell& c : mesh.cells) {
        const double v = u[c.id];
        mass.add(c.area * v);
        l1.add(c.area * std::abs(v));
        l2.add(c.area * v * v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    row.mass = mass.value();
    row.l1 = l1.value();
    row.l2 = std::sqrt(std::max(0.0, l2.value()));
    row.min = lo;
    row.max = hi;
    return row;
}

}  // namespace

RunResult run_steps(const Mesh& mesh, const VelocityField& field,
                    const InitialData& data, const SchemeConfig& config, double dt,
                    int nsteps, std::span<const double> snapshot_times) {
    config.validate();
    if (!(dt > 0.0) || nsteps < 1)
        throw std::invalid_argument("run_steps: need dt > 0 and nsteps >= 1");

    RunResult out;
    out.dt = dt;
    out.nsteps = nsteps;
    out.horizon = nsteps * dt;

    GridFunction u = project_initial(mesh, data, config);
    const std::vector<double> u0 = u.values;

    // snapshot levels: 0, N+1 and requested times rounded to the nearest level
    std::set<int> levels{0, nsteps};
    for (double t : snapshot_times) {
        const int lvl = static_cast<int>(std::llround(t / dt));
        levels.insert(std::clamp(lvl, 0, nsteps));
    }

    EdgeFluxTable fluxes(mesh, field, dt, nsteps, config.time_quad_points);
    EnergyAccumulator energy(mesh, fluxes);

    out.ledger.push_back(ledger_row(mesh, u.values, 0, 0.0));
    const double min0 = out.ledger[0].min;
    const double max0 = out.ledger[0].max;
    const double mass0 = out.ledger[0].mass;
    const double scale0 = std::max(std::abs(mass0), out.ledger[0].l1);

    if (levels.count(0)) out.snapshots.push_back(u);

    std::vector<double> next(u.values.size());
    for (int n = 0; n < nsteps; ++n) {
        const double ratio =
            upwind_step_values(mesh, fluxes, n, dt, config.xi, u.values, next);
        out.diagnostics.max_cfl_number = std::max(out.diagnostics.max_cfl_number, ratio);
        energy.add_step(u.values, next, n);
        u.values.swap(next);
        u.step = n + 1;
        u.time = (n + 1) * dt;

        const StepLedgerRow row = ledger_row(mesh, u.values, n + 1, u.time);
        const StepLedgerRow& prev = out.ledger.back();
        out.diagnostics.mass_drift_rel =
            std::max(out.diagnostics.mass_drift_rel,
                     std::abs(row.mass - mass0) / std::max(scale0, 1e-300));
        out.diagnostics.overshoot =
            std::max({out.diagnostics.overshoot, min0 - row.min, row.max - max0});
        if (prev.l1 > 0.0)
            out.diagnostics.l1_growth_rel =
                std::max(out.diagnostics.l1_growth_rel, (row.l1 - prev.l1) / prev.l1);
        if (prev.l2 > 0.0)
            out.diagnostics.l2_growth_rel =
                std::max(out.diagnostics.l2_growth_rel, (row.l2 - prev.l2) / prev.l2);
        out.ledger.push_back(row);
        if (levels.count(n + 1)) out.snapshots.push_back(u);
    }
    out.diagnostics.overshoot = std::max(out.diagnostics.overshoot, 0.0);

    out.energy = energy.finalize(u0, u.values);
    return out;
}

RunResult run_to_time(const Mesh& mesh, const VelocityField& field,
                      const InitialData& data, const SchemeConfig& config,
                      double horizon, std::span<const double> snapshot_times) {
    const CflResult cfl = cfl_timestep(mesh, field, config, horizon);
    return run_steps(mesh, field, data, config, cfl.dt, cfl.nsteps(), snapshot_times);
}

}  // namespace advect
