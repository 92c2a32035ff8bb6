#pragma once

#include <string>
#include <vector>

#include "advect/mesh.hpp"

namespace advect {

enum class StreamKind { uniform, cellular };
enum class TimeKind { constant, cosine };

/// Divergence-free velocity catalog. The velocity derives from a stream
/// function, V(x,y,t) = g(t) * (d_psi/dy, -d_psi/dx), so div V vanishes
/// identically:
///   uniform(a,b):  psi = a*y - b*x          -> V = g(t)*(a, b)
///   cellular(A):   psi = (A/pi) sin(pi x) sin(pi y)
/// Time factors: constant g = 1, cosine(omega) g = cos(omega t).
class VelocityField {
  public:
    static VelocityField uniform(double a, double b);
    static VelocityField cellular(double amplitude);

    VelocityField& with_cosine_time(double omega);

    double stream(Vec2 p) const;
    Vec2 velocity(Vec2 p, double t) const;

    double time_factor(double t) const;
    /// Closed form of int_0^t g.
    double time_integral(double t) const;
    /// Mean of g over [t0, t1] by Gauss-Legendre quadrature (exact for the
    /// constant factor; O((omega dt)^{2n}) otherwise).
    double time_average(double t0, double t1, int gauss_points = 3) const;
    double max_abs_time_factor() const { return 1.0; }

    /// Exact flux of V(.,t)/g(t) across the oriented segment p->q with the
    /// normal given by the -90 degree tangent rotation. For divergence-free
    /// fields this is the stream increment psi(q) - psi(p); the uniform
    /// branch uses coordinate differences so cell loops telescope at the
    /// roundoff scale of the fluxes themselves.
    double spatial_flux(Vec2 p, Vec2 q) const;

    /// Analytic bounds on the domain (any box for uniform; global for
    /// cellular). Finite by construction; exposed for diagnostics logs.
    double sup_speed() const;
    double sup_gradient() const;

    StreamKind stream_kind() const { return stream_; }
    TimeKind time_kind() const { return time_; }
    bool is_uniform() const { return stream_ == StreamKind::uniform; }
    Vec2 uniform_vector() const { return {a_, b_}; }
    double amplitude() const { return amp_; }
    double omega() const { return omega_; }

    /// True when psi is constant along the whole boundary of `box`, i.e. the
    /// velocity is tangent and an impermeable run is well posed.
    bool tangent_on_boundary(const Box& box) const;

  private:
    StreamKind stream_ = StreamKind::uniform;
    TimeKind time_ = TimeKind::constant;
    double a_ = 0.0, b_ = 0.0;  // uniform components
    double amp_ = 1.0;          // cellular amplitude
    double omega_ = 0.0;
};

/// Per-edge spatial fluxes psi(v1)-psi(v0); boundary edges of impermeable
/// meshes carry an exact zero.
std::vector<double> spatial_edge_fluxes(const Mesh& mesh, const VelocityField& field);

/// Signed fluxes V_KL^n oriented from the left cell into the right cell,
/// factored as (spatial flux) x (time average of g over step n). For a
/// constant time factor the table is identical for every step.
class EdgeFluxTable {
  public:
    EdgeFluxTable(const Mesh& mesh, const VelocityField& field, double dt,
                  int nsteps, int time_quad_points = 3);

    double flux(int edge, int n) const { return spatial_[edge] * gbar_[n]; }
    double spatial(int edge) const { return spatial_[edge]; }
    double gbar(int n) const { return gbar_[n]; }
    double dt() const { return dt_; }
    int nsteps() const { return static_cast<int>(gbar_.size()); }
    int n_edges() const { return static_cast<int>(spatial_.size()); }
    double max_abs_flux() const;

  private:
    std::vector<double> spatial_;
    std::vector<double> gbar_;
    double dt_ = 0.0;
};

/// Fluxes of a single step n (the V_KL^n entry set).
std::vector<double> edge_time_flux(const Mesh& mesh, const VelocityField& field,
                                   int n, double dt, int time_quad_points = 3);

/// Per cell K: sum over its edges of the outward-signed flux. Telescoping of
/// the stream increments around the closed loop keeps this at roundoff.
std::vector<double> discrete_divergence(const Mesh& mesh,
                                        const EdgeFluxTable& fluxes, int n);

}  // namespace advect
