#include "advect/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "advect/quadrature.hpp"

namespace advect {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_integer(double v) {
    return std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v));
}

}  // namespace

VelocityField VelocityField::uniform(double a, double b) {
    VelocityField f;
    f.stream_ = StreamKind::uniform;
    f.a_ = a;
    f.b_ = b;
    return f;
}

VelocityField VelocityField::cellular(double amplitude) {
    VelocityField f;
    f.stream_ = StreamKind::cellular;
    f.amp_ = amplitude;
    return f;
}

VelocityField& VelocityField::with_cosine_time(double omega) {
    time_ = TimeKind::cosine;
    omega_ = omega;
    return *this;
}

double VelocityField::stream(Vec2 p) const {
    if (stream_ == StreamKind::uniform) return a_ * p.y - b_ * p.x;
    return amp_ / kPi * std::sin(kPi * p.x) * std::sin(kPi * p.y);
}

Vec2 VelocityField::velocity(Vec2 p, double t) const {
    const double g = time_factor(t);
    if (stream_ == StreamKind::uniform) return {g * a_, g * b_};
    const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
    const double sy = std::sin(kPi * p.y), cy = std::cos(kPi * p.y);
    return {g * amp_ * sx * cy, -g * amp_ * cx * sy};
}

double VelocityField::time_factor(double t) const {
    return time_ == TimeKind::constant ? 1.0 : std::cos(omega_ * t);
}

double VelocityField::time_integral(double t) const {
    if (time_ == TimeKind::constant || omega_ == 0.0) return t;
    return std::sin(omega_ * t) / omega_;
}

double VelocityField::time_average(double t0, double t1, int gauss_points) const {
    if (time_ == TimeKind::constant) return 1.0;
    const GaussRule rule = gauss_rule(gauss_points);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    double acc = 0.0;
    for (int i = 0; i < rule.n; ++i)
        acc += rule.weight[i] * time_factor(mid + half * rule.node[i]);
    return 0.5 * acc;  // weights sum to 2
}

double VelocityField::spatial_flux(Vec2 p, Vec2 q) const {
    if (stream_ == StreamKind::uniform)
        return a_ * (q.y - p.y) - b_ * (q.x - p.x);
    return stream(q) - stream(p);
}

double VelocityField::sup_speed() const {
    if (stream_ == StreamKind::uniform) return std::hypot(a_, b_);
    return std::abs(amp_);
}

double VelocityField::sup_gradient() const {
    if (stream_ == StreamKind::uniform) return 0.0;
    return kPi * std::abs(amp_);
}

bool VelocityField::tangent_on_boundary(const Box& box) const {
    if (stream_ == StreamKind::uniform) return a_ == 0.0 && b_ == 0.0;
    // cellular psi vanishes on lines with integer coordinates
    return near_integer(box.xmin) && near_integer(box.xmax) &&
           near_integer(box.ymin) && near_integer(box.ymax);
}

std::vector<double> spatial_edge_fluxes(const Mesh& mesh, const VelocityField& field) {
    std::vector<double> flux(mesh.edges.size(), 0.0);
    const bool force_boundary_zero = mesh.boundary_kind == BoundaryKind::impermeable;
    if (field.stream_kind() == StreamKind::uniform) {
        for (const Edge& e : mesh.edges) {
            if (force_boundary_zero && e.right == kBoundary) continue;
            flux[e.id] =
                field.spatial_flux(mesh.vertex_pos(e.v0), mesh.vertex_pos(e.v1));
        }
        return flux;
    }
    // evaluate psi once per vertex so cell loops telescope exactly on the
    // cached values
    std::vector<double> psi(mesh.vertices.size());
    for (const Vertex& v : mesh.vertices) psi[v.id] = field.stream(v.pos);
    for (const Edge& e : mesh.edges) {
        if (force_boundary_zero && e.right == kBoundary) continue;
        flux[e.id] = psi[e.v1] - psi[e.v0];
    }
    return flux;
}

EdgeFluxTable::EdgeFluxTable(const Mesh& mesh, const VelocityField& field,
                             double dt, int nsteps, int time_quad_points)
    : dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("EdgeFluxTable: dt must be > 0");
    if (nsteps < 1) throw std::invalid_argument("EdgeFluxTable: nsteps must be >= 1");
    spatial_ = spatial_edge_fluxes(mesh, field);
    gbar_.resize(nsteps);
    for (int n = 0; n < nsteps; ++n)
        gbar_[n] = field.time_average(n * dt, (n + 1) * dt, time_quad_points);
}

double EdgeFluxTable::max_abs_flux() const {
    double m = 0.0;
    for (double s : spatial_) m = std::max(m, std::abs(s));
    double g = 0.0;
    for (double v : gbar_) g = std::max(g, std::abs(v));
    return m * g;
}

std::vector<double> edge_time_flux(const Mesh& mesh, const VelocityField& field,
                                   int n, double dt, int time_quad_points) {
    std::vector<double> flux = spatial_edge_fluxes(mesh, field);
    const double g = field.time_average(n * dt, (n + 1) * dt, time_quad_points);
    for (double& f : flux) f *= g;
    return flux;
}

std::vector<double> discrete_divergence(const Mesh& mesh,
                                        const EdgeFluxTable& fluxes, int n) {
    std::vector<double> div(mesh.cells.size(), 0.0);
    for (const Cell& c : mesh.cells) {
        double acc = 0.0;
        for (const CellEdge& ce : c.edges) acc += ce.sign * fluxes.flux(ce.edge, n);
        div[c.id] = acc;
    }
    return div;
}

}  // namespace advect
