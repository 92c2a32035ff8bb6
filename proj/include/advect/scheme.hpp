#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "advect/field.hpp"
#include "advect/initial_data.hpp"
#include "advect/mesh.hpp"

namespace advect {

enum class ProjectionMode { exact_clip, sampled };

struct SchemeConfig {
    /// CFL margin: sum of inflow fluxes times dt stays below (1-xi)|K|.
    double xi = 0.1;
    /// Cap dt <= c0 * h so large time steps cannot hide behind slow fields.
    double c0 = 1.0;
    ProjectionMode projection = ProjectionMode::exact_clip;
    /// Tensor sampling density for analytic data (k^2 points per cell).
    int sample_density = 8;
    int time_quad_points = 3;

    void validate() const;
};

/// Piecewise-constant field u_K^n attached to a mesh.
struct GridFunction {
    const Mesh* mesh = nullptr;
    std::vector<double> values;
    int step = 0;
    double time = 0.0;
};

/// Exact L2 projection of the initial data: cell averages by polygon
/// clipping for indicator and piecewise-constant data, tensor midpoint
/// sampling for the analytic catalog.
GridFunction project_initial(const Mesh& mesh, const InitialData& data,
                             const SchemeConfig& config);

struct CflResult {
    double dt = 0.0;
    /// N of the paper: horizon = (N+1) dt exactly.
    int n = 0;
    int nsteps() const { return n + 1; }
    /// The raw stability bound before fitting dt to the horizon.
    double dt_bound = 0.0;
};

/// Largest dt = t/(N+1) obeying the CFL condition for every cell and step
/// (conservatively via max_t |g|) together with dt <= c0 h.
CflResult cfl_timestep(const Mesh& mesh, const VelocityField& field,
                       const SchemeConfig& config, double horizon);

/// One explicit upwind step in convex-combination form. Refuses (throws
/// CflViolation) when the inflow sum of some cell exceeds (1-xi)|K|.
GridFunction upwind_step(const GridFunction& u, const EdgeFluxTable& fluxes,
                         double dt, double xi = 0.0);

struct CflViolation : std::runtime_error {
    int cell;
    int step;
    CflViolation(int cell_, int step_, const std::string& what)
        : std::runtime_error(what), cell(cell_), step(step_) {}
};

/// In-place kernel shared by upwind_step and the runner; returns the
/// largest per-cell inflow ratio sum dt|V_KL^n|/|K| seen this step.
double upwind_step_values(const Mesh& mesh, const EdgeFluxTable& fluxes, int n,
                          double dt, double xi, std::span<const double> u,
                          std::span<double> out);

/// Snapshot export (gridfn v1), one value per line at 17 significant digits.
void write_gridfunction(std::ostream& out, const GridFunction& u);
/// Reads values/time back; the mesh pointer of the result is null.
GridFunction read_gridfunction(std::istream& in);

}  // namespace advect
