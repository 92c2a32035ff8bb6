#include "advect/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace advect {

namespace {

/// Classical RK4 for dz/dtau = V(z, tau) from t0 to t1 in nsub substeps.
Vec2 integrate(const VelocityField& field, Vec2 z, double t0, double t1, int nsub) {
    const double h = (t1 - t0) / nsub;
    for (int s = 0; s < nsub; ++s) {
        const double tau = t0 + s * h;
        const Vec2 k1 = field.velocity(z, tau);
        const Vec2 k2 = field.velocity(z + 0.5 * h * k1, tau + 0.5 * h);
        const Vec2 k3 = field.velocity(z + 0.5 * h * k2, tau + 0.5 * h);
        const Vec2 k4 = field.velocity(z + h * k3, tau + h);
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

}  // namespace

int FlowSampler::substeps(double t) const {
    if (substeps_per_dt < 1)
        throw std::invalid_argument("FlowSampler: substeps_per_dt must be >= 1");
    const int cells = std::max(1, static_cast<int>(std::ceil(t / time_cell)));
    return cells * substeps_per_dt;
}

Vec2 FlowSampler::backward(Vec2 x, double t) const {
    if (t < 0.0) throw std::invalid_argument("backward flow: t must be >= 0");
    if (t == 0.0) return x;
    if (field->is_uniform()) {
        const Vec2 v = field->uniform_vector();
        return x - field->time_integral(t) * v;
    }
    return integrate(*field, x, t, 0.0, substeps(t));
}

Vec2 FlowSampler::forward(Vec2 x, double t) const {
    if (t < 0.0) throw std::invalid_argument("forward flow: t must be >= 0");
    if (t == 0.0) return x;
    if (field->is_uniform()) {
        const Vec2 v = field->uniform_vector();
        return x + field->time_integral(t) * v;
    }
    return integrate(*field, x, 0.0, t, substeps(t));
}

Vec2 FlowSampler::wrap_into_domain(Vec2 p) const {
    if (boundary != BoundaryKind::periodic) return p;
    const double w = domain.width(), h = domain.height();
    double x = std::fmod(p.x - domain.xmin, w);
    double y = std::fmod(p.y - domain.ymin, h);
    if (x < 0.0) x += w;
    if (y < 0.0) y += h;
    return {domain.xmin + x, domain.ymin + y};
}

double ExactSolution::at(Vec2 x, double t) const {
    return data_.eval(sampler_.wrap_into_domain(sampler_.backward(x, t)));
}

double jacobian_check(const FlowSampler& sampler, std::span<const Vec2> points,
                      double t, double fd_step_rel) {
    const double delta = fd_step_rel * sampler.domain.max_extent();
    double worst = 0.0;
    for (const Vec2 p : points) {
        const Vec2 xp = sampler.backward({p.x + delta, p.y}, t);
        const Vec2 xm = sampler.backward({p.x - delta, p.y}, t);
        const Vec2 yp = sampler.backward({p.x, p.y + delta}, t);
        const Vec2 ym = sampler.backward({p.x, p.y - delta}, t);
        const double dxdx = (xp.x - xm.x) / (2.0 * delta);
        const double dydx = (xp.y - xm.y) / (2.0 * delta);
        const double dxdy = (yp.x - ym.x) / (2.0 * delta);
        const double dydy = (yp.y - ym.y) / (2.0 * delta);
        const double det = dxdx * dydy - dxdy * dydx;
        worst = std::max(worst, std::abs(det - 1.0));
    }
    return worst;
}

}  // namespace advect
