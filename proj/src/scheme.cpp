#include "advect/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cell_sampling.hpp"

namespace advect {

void SchemeConfig::validate() const {
    if (!(xi >= 0.0) || xi >= 1.0)
        throw std::invalid_argument("SchemeConfig: xi must lie in [0,1)");
    if (!(c0 > 0.0)) throw std::invalid_argument("SchemeConfig: c0 must be > 0");
    if (sample_density < 1)
        throw std::invalid_argument("SchemeConfig: sample_density must be >= 1");
}

namespace {

double sample_average(const std::vector<Vec2>& poly, double area, int k,
                      const InitialData& data) {
    double acc = 0.0;
    detail::visit_cell_midpoints(poly, k, area,
                                 [&](Vec2 p, double w) { acc += w * data.eval(p); });
    return acc / area;
}

}  // namespace

GridFunction project_initial(const Mesh& mesh, const InitialData& data,
                             const SchemeConfig& config) {
    config.validate();
    GridFunction u;
    u.mesh = &mesh;
    u.values.assign(mesh.cells.size(), 0.0);

    if (data.is_indicator()) {
        for (const auto& poly : data.indicator_data().polygons)
            for (const Vec2& p : poly)
                if (!mesh.domain.contains(p, 1e-12))
                    throw std::invalid_argument(
                        "project_initial: indicator polygon leaves the domain");
    }

    if (data.is_indicator() && config.projection == ProjectionMode::exact_clip) {
        const auto& polys = data.indicator_data().polygons;
        for (const Cell& c : mesh.cells) {
            const auto cell_poly = mesh.cell_polygon(c.id);
            double covered = 0.0;
            for (const auto& poly : polys) covered += intersection_area(poly, cell_poly);
            u.values[c.id] = std::clamp(covered / c.area, 0.0, 1.0);
        }
        return u;
    }
    if (data.is_piecewise() && config.projection == ProjectionMode::exact_clip) {
        const auto& pc = data.piecewise_data();
        const double dx = pc.box.width() / pc.nx;
        const double dy = pc.box.height() / pc.ny;
        for (const Cell& c : mesh.cells) {
            const auto cell_poly = mesh.cell_polygon(c.id);
            // overlapping auxiliary rectangles only
            double xlo = cell_poly[0].x, xhi = xlo, ylo = cell_poly[0].y, yhi = ylo;
            for (const Vec2& p : cell_poly) {
                xlo = std::min(xlo, p.x);
                xhi = std::max(xhi, p.x);
                ylo = std::min(ylo, p.y);
                yhi = std::max(yhi, p.y);
            }
            const int i0 = std::max(0, static_cast<int>(std::floor((xlo - pc.box.xmin) / dx)));
            const int i1 = std::min(pc.nx - 1, static_cast<int>(std::floor((xhi - pc.box.xmin) / dx)));
            const int j0 = std::max(0, static_cast<int>(std::floor((ylo - pc.box.ymin) / dy)));
            const int j1 = std::min(pc.ny - 1, static_cast<int>(std::floor((yhi - pc.box.ymin) / dy)));
            double acc = 0.0;
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) {
                    const double v = pc.values[static_cast<std::size_t>(j) * pc.nx + i];
                    if (v == 0.0) continue;
                    const std::vector<Vec2> rect{
                        {pc.box.xmin + i * dx, pc.box.ymin + j * dy},
                        {pc.box.xmin + (i + 1) * dx, pc.box.ymin + j * dy},
                        {pc.box.xmin + (i + 1) * dx, pc.box.ymin + (j + 1) * dy},
                        {pc.box.xmin + i * dx, pc.box.ymin + (j + 1) * dy}};
                    acc += v * intersection_area(rect, cell_poly);
                }
            u.values[c.id] = acc / c.area;
        }
        return u;
    }
    // analytic catalog (or sampled mode): tensor midpoint sampling
    const int k = config.sample_density;
    for (const Cell& c : mesh.cells)
        u.values[c.id] = sample_average(mesh.cell_polygon(c.id), c.area, k, data);
    return u;
}

CflResult cfl_timestep(const Mesh& mesh, const VelocityField& field,
                       const SchemeConfig& config, double horizon) {
    config.validate();
    if (!(horizon > 0.0))
        throw std::invalid_argument("cfl_timestep: horizon must be > 0");

    const auto spatial = spatial_edge_fluxes(mesh, field);
    const double gmax = field.max_abs_time_factor();
    double h = 0.0;
    double bound = std::numeric_limits<double>::infinity();
    for (const Cell& c : mesh.cells) {
        h = std::max(h, c.diameter);
        // inflow side depends on the sign of gbar_n; bound both
        double neg = 0.0, pos = 0.0;
        for (const CellEdge& ce : c.edges) {
            const double f = ce.sign * spatial[ce.edge];
            if (f < 0.0)
                neg += -f;
            else
                pos += f;
        }
        const double inflow = gmax * std::max(neg, pos);
        if (inflow > 0.0)
            bound = std::min(bound, (1.0 - config.xi) * c.area / inflow);
    }
    bound = std::min(bound, config.c0 * h);

    CflResult r;
    r.dt_bound = bound;
    if (bound >= horizon) {
        r.dt = horizon;
        r.n = 0;
    } else {
        const int nsteps = static_cast<int>(std::ceil(horizon / bound));
        r.n = nsteps - 1;
        r.dt = horizon / nsteps;
        // guard against ceil landing one short under roundoff
        if (r.dt > bound * (1.0 + 1e-12)) {
            r.n += 1;
            r.dt = horizon / (r.n + 1);
        }
    }
    return r;
}

double upwind_step_values(const Mesh& mesh, const EdgeFluxTable& fluxes, int n,
                          double dt, double xi, std::span<const double> u,
                          std::span<double> out) {
    const double gbar = fluxes.gbar(n);
    double max_ratio = 0.0;
    for (const Cell& c : mesh.cells) {
        double wsum = 0.0;
        double acc = 0.0;
        for (const CellEdge& ce : c.edges) {
            const double vkl = ce.sign * fluxes.spatial(ce.edge) * gbar;
            if (vkl < 0.0) {
                const double w = -vkl * dt / c.area;
                wsum += w;
                acc += w * u[mesh.neighbor(c.id, ce.edge)];
            }
        }
        if (wsum > (1.0 - xi) * (1.0 + 1e-12))
            throw CflViolation(c.id, n,
                               "CFL violated at cell " + std::to_string(c.id) +
                                   ", step " + std::to_string(n) + ": inflow sum " +
                                   std::to_string(wsum) + " exceeds " +
                                   std::to_string(1.0 - xi));
        // convex combination: u_new = (1 - sum w) u_K + sum w_L u_L
        out[c.id] = (1.0 - wsum) * u[c.id] + acc;
        max_ratio = std::max(max_ratio, wsum);
    }
    return max_ratio;
}

GridFunction upwind_step(const GridFunction& u, const EdgeFluxTable& fluxes,
                         double dt, double xi) {
    GridFunction next;
    next.mesh = u.mesh;
    next.values.resize(u.values.size());
    next.step = u.step + 1;
    next.time = u.time + dt;
    upwind_step_values(*u.mesh, fluxes, u.step, dt, xi, u.values, next.values);
    return next;
}

void write_gridfunction(std::ostream& out, const GridFunction& u) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", u.time);
    out << "gridfn v1 " << u.values.size() << ' ' << buf << '\n';
    for (double v : u.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
}

GridFunction read_gridfunction(std::istream& in) {
    std::string magic, version;
    std::size_t n = 0;
    GridFunction u;
    in >> magic >> version >> n >> u.time;
    if (magic != "gridfn" || version != "v1")
        throw std::runtime_error("read_gridfunction: bad header");
    u.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) in >> u.values[i];
    if (!in) throw std::runtime_error("read_gridfunction: truncated input");
    return u;
}

}  // namespace advect
