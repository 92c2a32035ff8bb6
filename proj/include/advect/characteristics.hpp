#pragma once

#include <span>

#include "advect/field.hpp"
#include "advect/initial_data.hpp"

namespace advect {

/// Samples the characteristic flow of the velocity field with the classical
/// 4-stage one-step method at a fixed substep budget: integrating over [0,t]
/// uses ceil(t/time_cell) * substeps_per_dt uniform substeps. Uniform fields
/// short-circuit to the closed form x -+ (a,b) * int_0^t g.
struct FlowSampler {
    const VelocityField* field = nullptr;
    int substeps_per_dt = 16;
    double time_cell = 0.25;
    /// Periodic runs wrap the evaluation point into the box before data
    /// lookup; integration itself never wraps (wrapping would corrupt
    /// finite-difference Jacobians).
    BoundaryKind boundary = BoundaryKind::impermeable;
    Box domain;

    /// X(x,t): foot of the characteristic through (x,t) at time 0.
    Vec2 backward(Vec2 x, double t) const;
    /// Y(x,t): position at time t of the characteristic starting at x.
    Vec2 forward(Vec2 x, double t) const;
    Vec2 wrap_into_domain(Vec2 p) const;
    int substeps(double t) const;
};

/// u(x,t) = u0(X(x,t)) with exact point evaluation of the initial data.
class ExactSolution {
  public:
    ExactSolution(InitialData data, FlowSampler sampler)
        : data_(std::move(data)), sampler_(sampler) {}

    double at(Vec2 x, double t) const;
    const FlowSampler& sampler() const { return sampler_; }
    const InitialData& data() const { return data_; }

  private:
    InitialData data_;
    FlowSampler sampler_;
};

/// Worst deviation |det grad X - 1| over the sample points; the gradient is
/// estimated by central differences of relative step fd_step_rel times the
/// domain extent. Divergence-free flows preserve Lebesgue measure, so this
/// measures integrator plus differencing error.
double jacobian_check(const FlowSampler& sampler, std::span<const Vec2> points,
                      double t, double fd_step_rel = 1e-5);

}  // namespace advect
