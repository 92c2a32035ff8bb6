#include "advect/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cell_sampling.hpp"

namespace advect {

// ---------------------------------------------------------------------------
// energy functionals
// ---------------------------------------------------------------------------

EnergyAccumulator::EnergyAccumulator(const Mesh& mesh, const EdgeFluxTable& fluxes)
    : mesh_(mesh), fluxes_(fluxes) {}

void EnergyAccumulator::add_step(std::span<const double> u_n,
                                 std::span<const double> u_np1, int n) {
    const double dt = fluxes_.dt();
    const double gbar = fluxes_.gbar(n);
    for (const Cell& c : mesh_.cells) {
        inflow_v_.clear();
        inflow_u_.clear();
        double jump_sq = 0.0, jump_abs = 0.0, wsum = 0.0;
        for (const CellEdge& ce : c.edges) {
            const double vkl = ce.sign * fluxes_.spatial(ce.edge) * gbar;
            if (vkl >= 0.0) continue;
            const double ul = u_n[mesh_.neighbor(c.id, ce.edge)];
            const double jump = ul - u_n[c.id];
            jump_sq += -vkl * dt * jump * jump;
            jump_abs += -vkl * dt * std::abs(jump);
            wsum += -vkl * dt / c.area;
            inflow_v_.push_back(vkl);
            inflow_u_.push_back(ul);
        }
        const int m = static_cast<int>(inflow_v_.size());
        const double du = u_np1[c.id] - u_n[c.id];
        const double time_term = c.area * du * du;
        e_time_.add(time_term);
        e_flux_.add(jump_sq);
        q_.add(jump_abs);

        // identity right-hand side:
        //   (1 + sum_M V_KM dt/|K|) sum_L |V_KL| dt (u_L-u_K)^2
        // + (1/2) sum_{L,M} V_KL V_KM dt^2/|K| (u_M-u_L)^2
        const double akk = 1.0 - wsum;
        rhs_.add(akk * jump_sq);
        double pair_sum = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double d = inflow_u_[j] - inflow_u_[i];
                pair_sum += inflow_v_[i] * inflow_v_[j] * d * d;
            }
        rhs_.add(0.5 * pair_sum * dt * dt / c.area);

        // per-cell Cauchy-Schwarz: |K| du^2 <= (sum w) sum |V| dt jump^2.
        // The roundoff floor needs the cross term 2|du| ulp(u): the stored
        // update carries absolute noise at the scale of u, not of du.
        const double bound = wsum * jump_sq;
        const double umax = std::max({1.0, std::abs(u_n[c.id]), std::abs(u_np1[c.id])});
        const double noise = 8.0 * 2.220446049250313e-16 * umax;
        const double floor = c.area * (2.0 * std::abs(du) * noise + noise * noise);
        cs_excess_ = std::max(cs_excess_, time_term - bound * (1.0 + 1e-12) - floor);
    }
}

EnergyReport EnergyAccumulator::finalize(std::span<const double> u0,
                                         std::span<const double> u_final) const {
    EnergyReport rep;
    rep.E_time_part = e_time_.value();
    rep.E_flux_part = e_flux_.value();
    rep.E_h = rep.E_time_part + rep.E_flux_part;
    rep.Q_h = q_.value();
    CompensatedSum l2a, l2b;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        l2a.add(mesh_.cells[i].area * u0[i] * u0[i]);
        l2b.add(mesh_.cells[i].area * u_final[i] * u_final[i]);
    }
    rep.eps_h = l2a.value() - l2b.value();
    rep.identity_residual =
        std::abs(rep.eps_h - rhs_.value()) / std::max(1.0, std::abs(rep.eps_h));
    rep.cauchy_schwarz_excess = std::max(0.0, cs_excess_);
    return rep;
}

namespace {

void check_trajectory(std::span<const GridFunction> traj, const EdgeFluxTable& fluxes) {
    if (traj.size() < 2)
        throw std::invalid_argument("trajectory must hold at least two time levels");
    if (static_cast<int>(traj.size()) - 1 > fluxes.nsteps())
        throw std::invalid_argument("flux table shorter than trajectory");
    for (const GridFunction& u : traj)
        if (!u.mesh || u.values.size() != traj[0].values.size())
            throw std::invalid_argument("inconsistent trajectory");
}

}  // namespace

EnergyReport energy_quantities(std::span<const GridFunction> traj,
                               const EdgeFluxTable& fluxes) {
    check_trajectory(traj, fluxes);
    EnergyAccumulator acc(*traj[0].mesh, fluxes);
    for (std::size_t n = 0; n + 1 < traj.size(); ++n)
        acc.add_step(traj[n].values, traj[n + 1].values, static_cast<int>(n));
    return acc.finalize(traj.front().values, traj.back().values);
}

double energy_identity_residual(std::span<const GridFunction> traj,
                                const EdgeFluxTable& fluxes) {
    return energy_quantities(traj, fluxes).identity_residual;
}

double discrete_total_variation(const GridFunction& u) {
    const Mesh& mesh = *u.mesh;
    CompensatedSum tv;
    for (const Edge& e : mesh.edges) {
        if (e.right == kBoundary) continue;
        tv.add(e.length * std::abs(u.values[e.right] - u.values[e.left]));
    }
    return tv.value();
}

double l2_norm_squared(const GridFunction& u) {
    CompensatedSum s;
    for (const Cell& c : u.mesh->cells) s.add(c.area * u.values[c.id] * u.values[c.id]);
    return s.value();
}

double l1_norm(const GridFunction& u) {
    CompensatedSum s;
    for (const Cell& c : u.mesh->cells) s.add(c.area * std::abs(u.values[c.id]));
    return s.value();
}

double mass(const GridFunction& u) {
    CompensatedSum s;
    for (const Cell& c : u.mesh->cells) s.add(c.area * u.values[c.id]);
    return s.value();
}

// ---------------------------------------------------------------------------
// L1 error against the exact solution
// ---------------------------------------------------------------------------

double l1_error(const GridFunction& u, const ExactSolution& exact, double t, int k) {
    if (k < 1) throw std::invalid_argument("l1_error: density must be >= 1");
    const Mesh& mesh = *u.mesh;
    CompensatedSum err;
    for (const Cell& c : mesh.cells) {
        const auto poly = mesh.cell_polygon(c.id);
        const double uk = u.values[c.id];
        double cell_err = 0.0;
        detail::visit_cell_midpoints(poly, k, c.area, [&](Vec2 p, double w) {
            cell_err += w * std::abs(uk - exact.at(p, t));
        });
        err.add(cell_err);
    }
    return err.value();
}

ErrorReport l1_error_report(const GridFunction& u, const ExactSolution& exact,
                            double t, int k, bool autorefine, int max_density) {
    ErrorReport rep;
    double prev = l1_error(u, exact, t, k);
    if (!autorefine) {
        rep.l1_at_t = rep.linf_t_l1 = prev;
        rep.sampling_density = k;
        return rep;
    }
    while (k * 2 <= max_density) {
        k *= 2;
        const double next = l1_error(u, exact, t, k);
        rep.estimated_quadrature_error = std::abs(next - prev);
        prev = next;
        if (rep.estimated_quadrature_error < 0.01 * std::max(next, 1e-300)) break;
    }
    rep.l1_at_t = rep.linf_t_l1 = prev;
    rep.sampling_density = k;
    return rep;
}

// ---------------------------------------------------------------------------
// test functions
// ---------------------------------------------------------------------------

namespace {

double bump_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

/// C-infinity bump on (-1,1), value 1 at the origin.
double bump1(double u) {
    const double w = 1.0 - u * u;
    return w > 0.0 ? std::exp(1.0 - 1.0 / w) : 0.0;
}

double bump1_derivative(double u) {
    const double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    return bump1(u) * (-2.0 * u / (w * w));
}

}  // namespace

double smoothstep(double s) {
    const double f = bump_exp(s);
    const double g = bump_exp(1.0 - s);
    return f / (f + g);
}

double smoothstep_derivative(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double f = bump_exp(s);
    const double g = bump_exp(1.0 - s);
    const double fp = f / (s * s);
    const double gp = -g / ((1.0 - s) * (1.0 - s));
    return (fp * (f + g) - f * (fp + gp)) / ((f + g) * (f + g));
}

double gamma_ramp(double r) { return smoothstep(3.0 * r - 1.0); }

double gamma_ramp_derivative_bound() { return 6.0; }

SeparableBump::SeparableBump(Vec2 center, double rx, double ry, double t_end,
                             double scale)
    : center_(center), rx_(rx), ry_(ry), t_end_(t_end), scale_(scale) {
    if (!(rx > 0.0) || !(ry > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("SeparableBump: widths and t_end must be > 0");
}

double SeparableBump::value(Vec2 x, double t) const {
    if (t < 0.0 || t >= t_end_) return 0.0;
    return scale_ * bump1((x.x - center_.x) / rx_) * bump1((x.y - center_.y) / ry_) *
           bump1(t / t_end_);
}

double SeparableBump::time_derivative(Vec2 x, double t) const {
    if (t < 0.0 || t >= t_end_) return 0.0;
    return scale_ * bump1((x.x - center_.x) / rx_) * bump1((x.y - center_.y) / ry_) *
           bump1_derivative(t / t_end_) / t_end_;
}

Vec2 SeparableBump::gradient(Vec2 x, double t) const {
    if (t < 0.0 || t >= t_end_) return {};
    const double bx = bump1((x.x - center_.x) / rx_);
    const double by = bump1((x.y - center_.y) / ry_);
    const double bt = bump1(t / t_end_);
    return {scale_ * bump1_derivative((x.x - center_.x) / rx_) / rx_ * by * bt,
            scale_ * bx * bump1_derivative((x.y - center_.y) / ry_) / ry_ * bt};
}

Box SeparableBump::support_box() const {
    return {center_.x - rx_, center_.x + rx_, center_.y - ry_, center_.y + ry_};
}

ProofTestFunction::ProofTestFunction(std::vector<std::vector<Vec2>> polygons,
                                     FlowSampler sampler, double t, double h,
                                     double cutoff)
    : polygons_(std::move(polygons)), sampler_(sampler), t_(t), cutoff_(cutoff) {
    if (!(t * h > 0.0))
        throw std::invalid_argument("proof test function: t*h must be > 0");
    if (!(cutoff > 0.0))
        throw std::invalid_argument("proof test function: cutoff must be > 0");
    scale_ = 1.0 / std::sqrt(t * h);
    fd_step_ = 1e-6 * sampler_.domain.max_extent();
}

double ProofTestFunction::phi0(Vec2 x) const {
    double d = std::numeric_limits<double>::infinity();
    bool inside = false;
    for (const auto& poly : polygons_) {
        d = std::min(d, distance_to_polygon_boundary(x, poly));
        if (!inside && point_in_polygon(x, poly)) inside = true;
    }
    const double g = gamma_ramp(scale_ * d);
    return inside ? g : -g;
}

double ProofTestFunction::value(Vec2 x, double t) const {
    if (t < 0.0 || t >= t_ + cutoff_) return 0.0;
    const double ramp = t <= t_ ? 1.0 : 1.0 - smoothstep((t - t_) / cutoff_);
    return phi0(sampler_.backward(x, t)) * ramp;
}

double ProofTestFunction::time_derivative(Vec2 x, double t) const {
    const double lo = std::max(0.0, t - fd_step_);
    const double hi = t + fd_step_;
    return (value(x, hi) - value(x, lo)) / (hi - lo);
}

Vec2 ProofTestFunction::gradient(Vec2 x, double t) const {
    const double d = fd_step_;
    return {(value({x.x + d, x.y}, t) - value({x.x - d, x.y}, t)) / (2.0 * d),
            (value({x.x, x.y + d}, t) - value({x.x, x.y - d}, t)) / (2.0 * d)};
}

ProofTestFunction build_proof_test_function(std::vector<std::vector<Vec2>> polygons,
                                            FlowSampler sampler, double t, double h,
                                            double cutoff) {
    return ProofTestFunction(std::move(polygons), sampler, t, h, cutoff);
}

// ---------------------------------------------------------------------------
// weak formulation
// ---------------------------------------------------------------------------

WeakFormResult weak_form_residual(std::span<const GridFunction> traj,
                                  const EdgeFluxTable& fluxes,
                                  const VelocityField& field,
                                  const TestFunction& phi, int order) {
    check_trajectory(traj, fluxes);
    const Mesh& mesh = *traj[0].mesh;
    const double dt = fluxes.dt();
    const int steps = static_cast<int>(traj.size()) - 1;
    if (phi.support_end_time() > steps * dt * (1.0 + 1e-12))
        throw std::invalid_argument(
            "weak_form_residual: trajectory ends inside the support of phi");

    WeakFormResult out;
    const Box support = phi.support_box();
    const Box& dom = mesh.domain;
    out.boundary_warning = !(support.xmin > dom.xmin && support.xmax < dom.xmax &&
                             support.ymin > dom.ymin && support.ymax < dom.ymax);

    // cached space rules
    const int ncells = mesh.n_cells();
    std::vector<std::vector<std::pair<Vec2, double>>> cell_pts(ncells);
    for (const Cell& c : mesh.cells)
        detail::visit_cell_gauss(mesh.cell_polygon(c.id), order,
                                 [&](Vec2 p, double w) { cell_pts[c.id].push_back({p, w}); });

    CompensatedSum lhs, mu, nu;
    std::vector<double> phi_avg_st(ncells);  // <phi>_K^n

    for (int n = 0; n < steps; ++n) {
        const double t0 = n * dt, t1 = (n + 1) * dt;
        std::span<const double> u = traj[n].values;
        std::span<const double> unext = traj[n + 1].values;

        for (const Cell& c : mesh.cells) {
            double int_phi = 0.0;       // space-time integral of phi
            double int_transport = 0.0; // of phi_t + V . grad phi
            detail::visit_time_gauss(t0, t1, order, [&](double tau, double wt) {
                for (const auto& [p, ws] : cell_pts[c.id]) {
                    int_phi += wt * ws * phi.value(p, tau);
                    int_transport +=
                        wt * ws *
                        (phi.time_derivative(p, tau) +
                         dot(field.velocity(p, tau), phi.gradient(p, tau)));
                }
            });
            phi_avg_st[c.id] = int_phi / (c.area * dt);
            lhs.add(u[c.id] * int_transport);

            double avg_end = 0.0;
            for (const auto& [p, ws] : cell_pts[c.id]) avg_end += ws * phi.value(p, t1);
            avg_end /= c.area;
            mu.add(c.area * (unext[c.id] - u[c.id]) * (phi_avg_st[c.id] - avg_end));
        }

        const double gbar = fluxes.gbar(n);
        for (const Edge& e : mesh.edges) {
            if (e.right == kBoundary) continue;
            const double f = fluxes.spatial(e.id) * gbar;  // flux left -> right
            if (f == 0.0) continue;
            // <phi V.n_e> over the edge-time cell
            double int_vn_phi = 0.0;
            detail::visit_time_gauss(t0, t1, order, [&](double tau, double wt) {
                detail::visit_segment_gauss(
                    mesh.vertex_pos(e.v0), mesh.vertex_pos(e.v1), order,
                    [&](Vec2 p, double ws) {
                        int_vn_phi +=
                            wt * ws * dot(field.velocity(p, tau), e.normal) *
                            phi.value(p, tau);
                    });
            });
            const double avg_vn_phi = int_vn_phi / (e.length * dt);
            // downwind cell K (the side with V_KL < 0)
            const int K = f > 0.0 ? e.right : e.left;
            const int L = f > 0.0 ? e.left : e.right;
            const double sign_k = f > 0.0 ? -1.0 : 1.0;
            const double vkl = sign_k * f;  // negative
            nu.add(dt * (u[L] - u[K]) *
                   (vkl * phi_avg_st[K] - e.length * sign_k * avg_vn_phi));
        }
    }

    // + int u_h(.,0) phi(.,0)
    for (const Cell& c : mesh.cells) {
        double int0 = 0.0;
        for (const auto& [p, ws] : cell_pts[c.id]) int0 += ws * phi.value(p, 0.0);
        lhs.add(traj[0].values[c.id] * int0);
    }

    out.lhs = lhs.value();
    out.mu = mu.value();
    out.nu = nu.value();
    out.residual = std::abs(out.lhs - (out.mu + out.nu));
    return out;
}

// ---------------------------------------------------------------------------
// layer cake, EOC, CSV
// ---------------------------------------------------------------------------

std::vector<LayerCakeComponent> layer_cake_decompose(std::span<const double> values) {
    std::set<double> distinct(values.begin(), values.end());
    std::vector<LayerCakeComponent> parts;
    double prev = 0.0;
    for (double v : distinct) {  // ascending
        if (v <= 0.0) continue;
        LayerCakeComponent part;
        part.weight = v - prev;
        part.indicator.reserve(values.size());
        for (double x : values) part.indicator.push_back(x >= v ? 1.0 : 0.0);
        parts.push_back(std::move(part));
        prev = v;
    }
    double next = 0.0;
    for (auto it = distinct.rbegin(); it != distinct.rend(); ++it) {  // descending
        const double v = *it;
        if (v >= 0.0) continue;
        LayerCakeComponent part;
        part.weight = v - next;  // negative
        part.indicator.reserve(values.size());
        for (double x : values) part.indicator.push_back(x <= v ? 1.0 : 0.0);
        parts.push_back(std::move(part));
        next = v;
    }
    return parts;
}

EocFit fit_eoc(std::span<const std::pair<double, double>> rows) {
    if (rows.size() < 2)
        throw std::invalid_argument("fit_eoc: need at least two (h, error) rows");
    std::vector<double> xs, ys;
    for (const auto& [h, e] : rows) {
        if (!(h > 0.0)) throw std::invalid_argument("fit_eoc: h must be > 0");
        if (!(e > 0.0))
            throw std::invalid_argument(
                "fit_eoc: non-positive error (exact coincidence; report separately)");
        xs.push_back(std::log(h));
        ys.push_back(std::log(e));
    }
    const double n = static_cast<double>(xs.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= n;
    ybar /= n;
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - xbar) * (ys[i] - ybar);
        var += (xs[i] - xbar) * (xs[i] - xbar);
    }
    if (var == 0.0) throw std::invalid_argument("fit_eoc: all h identical");
    EocFit fit;
    fit.slope = cov / var;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = ybar + fit.slope * (xs[i] - xbar);
        ss += (ys[i] - pred) * (ys[i] - pred);
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

double estimate_eoc(std::span<const std::pair<double, double>> rows) {
    return fit_eoc(rows).slope;
}

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string convergence_rows_to_csv(std::span<const ConvergenceRow> rows) {
    std::ostringstream out;
    out << kConvergenceCsvHeader << '\n';
    for (const ConvergenceRow& r : rows)
        out << fmt17(r.h) << ',' << fmt17(r.dt) << ',' << fmt17(r.xi) << ','
            << r.mesh << ',' << fmt17(r.l1_error) << ',' << fmt17(r.E_h) << ','
            << fmt17(r.Q_h) << ',' << fmt17(r.eps_h) << ','
            << fmt17(r.identity_residual) << '\n';
    return out.str();
}

std::vector<ConvergenceRow> convergence_rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kConvergenceCsvHeader)
        throw std::runtime_error("convergence csv: bad header");
    std::vector<ConvergenceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(ls, tok, ',')) toks.push_back(tok);
        if (toks.size() != 9) throw std::runtime_error("convergence csv: bad row");
        ConvergenceRow r;
        r.h = std::stod(toks[0]);
        r.dt = std::stod(toks[1]);
        r.xi = std::stod(toks[2]);
        r.mesh = toks[3];
        r.l1_error = std::stod(toks[4]);
        r.E_h = std::stod(toks[5]);
        r.Q_h = std::stod(toks[6]);
        r.eps_h = std::stod(toks[7]);
        r.identity_residual = std::stod(toks[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace advect
