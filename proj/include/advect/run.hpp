#pragma once

#include <span>
#include <vector>

#include "advect/analysis.hpp"
#include "advect/scheme.hpp"

namespace advect {

/// One row per time level n = 0..N+1.
struct StepLedgerRow {
    int n = 0;
    double time = 0.0;
    double mass = 0.0;
    double min = 0.0;
    double max = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
};

struct RunDiagnostics {
    /// max_n |mass_n - mass_0| / max(|mass_0|, l1_0)
    double mass_drift_rel = 0.0;
    /// worst excess of any u_K^n beyond [min u^0, max u^0]
    double overshoot = 0.0;
    /// worst per-step relative growth of the L1 / L2 norms (0 when monotone)
    double l1_growth_rel = 0.0;
    double l2_growth_rel = 0.0;
    /// largest inflow ratio sum dt|V|/|K| observed (the realized CFL number)
    double max_cfl_number = 0.0;
};

struct RunResult {
    std::vector<GridFunction> snapshots;  // always includes levels 0 and N+1
    std::vector<StepLedgerRow> ledger;
    EnergyReport energy;
    RunDiagnostics diagnostics;
    double dt = 0.0;
    int nsteps = 0;
    double horizon = 0.0;
};

/// Projects the data and advances nsteps explicit upwind steps of size dt,
/// streaming the conservation ledger and the energy functionals.
RunResult run_steps(const Mesh& mesh, const VelocityField& field,
                    const InitialData& data, const SchemeConfig& config, double dt,
                    int nsteps, std::span<const double> snapshot_times = {});

/// Derives (dt, N) from cfl_timestep and runs to the horizon.
RunResult run_to_time(const Mesh& mesh, const VelocityField& field,
                      const InitialData& data, const SchemeConfig& config,
                      double horizon, std::span<const double> snapshot_times = {});

}  // namespace advect
