#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advect/characteristics.hpp"
#include "advect/scheme.hpp"
#include "advect/summation.hpp"

namespace advect {

/// Discrete energy functionals of a run over [0, t] = [0, (N+1) dt]:
///   E_h   = sum |K||u^{n+1}-u^n|^2 + sum dt |V_KL^n||u_L-u_K|^2
///   Q_h   = sum dt |V_KL^n||u_L-u_K|          (flux-weighted BV in time)
///   eps_h = ||u_h(.,0)||_L2^2 - ||u_h(.,t)||_L2^2
/// identity_residual is |eps_h - RHS| / max(1,|eps_h|) for the exact
/// algebraic identity expressing eps_h through the jump sums.
struct EnergyReport {
    double E_h = 0.0;
    double Q_h = 0.0;
    double eps_h = 0.0;
    double identity_residual = 0.0;
    // split of E_h, for the xi-weighted inequality chain
    double E_time_part = 0.0;
    double E_flux_part = 0.0;
    /// Worst excess of |K||u^{n+1}-u^n|^2 over the per-cell Cauchy-Schwarz
    /// bound, beyond relative slack 1e-12 and a roundoff floor; 0 when the
    /// inequality held everywhere.
    double cauchy_schwarz_excess = 0.0;
};

/// Streaming accumulator so long runs do not need a stored trajectory.
class EnergyAccumulator {
  public:
    EnergyAccumulator(const Mesh& mesh, const EdgeFluxTable& fluxes);
    void add_step(std::span<const double> u_n, std::span<const double> u_np1, int n);
    /// u0 / u_final are the first and last grid values of the run.
    EnergyReport finalize(std::span<const double> u0,
                          std::span<const double> u_final) const;

  private:
    const Mesh& mesh_;
    const EdgeFluxTable& fluxes_;
    CompensatedSum e_time_, e_flux_, q_, rhs_;
    double cs_excess_ = 0.0;
    std::vector<double> inflow_v_, inflow_u_;  // per-cell scratch
};

EnergyReport energy_quantities(std::span<const GridFunction> trajectory,
                               const EdgeFluxTable& fluxes);
double energy_identity_residual(std::span<const GridFunction> trajectory,
                                const EdgeFluxTable& fluxes);

/// (1/2) sum_K sum_{L in dK} |K|L| |u_L - u_K| = sum over interior edges of
/// length times jump.
double discrete_total_variation(const GridFunction& u);

double l2_norm_squared(const GridFunction& u);
double l1_norm(const GridFunction& u);
double mass(const GridFunction& u);

struct ErrorReport {
    double l1_at_t = 0.0;
    double linf_t_l1 = 0.0;
    int sampling_density = 0;
    double estimated_quadrature_error = 0.0;
};

/// L1 distance between u_h and the exact solution at time t by per-cell
/// tensor midpoint sampling with k^2 points, weights |K|/k^2.
double l1_error(const GridFunction& u, const ExactSolution& exact, double t, int k);

/// l1_error at density k, doubled until the estimate moves by less than 1%
/// (or max_density is reached); the last difference is the error estimate.
ErrorReport l1_error_report(const GridFunction& u, const ExactSolution& exact,
                            double t, int k, bool autorefine = true,
                            int max_density = 64);

/// Smooth space-time test function interface for the weak formulation.
class TestFunction {
  public:
    virtual ~TestFunction() = default;
    virtual double value(Vec2 x, double t) const = 0;
    virtual double time_derivative(Vec2 x, double t) const = 0;
    virtual Vec2 gradient(Vec2 x, double t) const = 0;
    /// phi(x,s) = 0 for s >= support_end_time().
    virtual double support_end_time() const = 0;
    virtual Box support_box() const = 0;
};

/// Product of C-infinity bumps in x, y and time; analytic derivatives.
class SeparableBump : public TestFunction {
  public:
    SeparableBump(Vec2 center, double rx, double ry, double t_end,
                  double scale = 1.0);
    double value(Vec2 x, double t) const override;
    double time_derivative(Vec2 x, double t) const override;
    Vec2 gradient(Vec2 x, double t) const override;
    double support_end_time() const override { return t_end_; }
    Box support_box() const override;

  private:
    Vec2 center_;
    double rx_, ry_, t_end_, scale_;
};

/// C-infinity ramp built from exp(-1/s): 0 for s<=0, 1 for s>=1.
double smoothstep(double s);
double smoothstep_derivative(double s);
/// 0 for r <= 1/3, 1 for r >= 2/3.
double gamma_ramp(double r);
/// sup |gamma_ramp'| = 3 sup|smoothstep'| = 6.
double gamma_ramp_derivative_bound();

/// The test function of the h^{1/2} proof: phi_0 = +-Gamma(d(x,dA)/sqrt(t h))
/// composed with the backward flow, with a smooth temporal cutoff of width
/// cutoff after time t. Space/time derivatives by central differences.
class ProofTestFunction : public TestFunction {
  public:
    ProofTestFunction(std::vector<std::vector<Vec2>> polygons, FlowSampler sampler,
                      double t, double h, double cutoff);
    double phi0(Vec2 x) const;
    double value(Vec2 x, double t) const override;
    double time_derivative(Vec2 x, double t) const override;
    Vec2 gradient(Vec2 x, double t) const override;
    double support_end_time() const override { return t_ + cutoff_; }
    Box support_box() const override { return sampler_.domain; }
    double gradient_scale() const { return scale_; }

  private:
    std::vector<std::vector<Vec2>> polygons_;
    FlowSampler sampler_;
    double t_, scale_, cutoff_, fd_step_;
};

ProofTestFunction build_proof_test_function(std::vector<std::vector<Vec2>> polygons,
                                            FlowSampler sampler, double t, double h,
                                            double cutoff);

struct WeakFormResult {
    double lhs = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double residual = 0.0;
    /// Set when the test-function support touches the domain boundary.
    bool boundary_warning = false;
};

/// Evaluates both sides of the discrete weak formulation with tensor Gauss
/// quadrature of `order` points per axis; the trajectory must extend past
/// the support of phi.
WeakFormResult weak_form_residual(std::span<const GridFunction> trajectory,
                                  const EdgeFluxTable& fluxes,
                                  const VelocityField& field,
                                  const TestFunction& phi, int order);

struct LayerCakeComponent {
    double weight = 0.0;
    std::vector<double> indicator;  // one 0/1 entry per input value
};

/// Signed-weight decomposition into level-set indicators: positive values
/// contribute {v >= eta} layers, negative values {v <= eta} layers with
/// negative weight. The weighted sum of components reproduces the input (up
/// to roundoff of the level gaps).
std::vector<LayerCakeComponent> layer_cake_decompose(std::span<const double> values);

struct EocFit {
    double slope = 0.0;
    double residual = 0.0;  // RMS of the log-log fit
};

/// Least-squares slope of log e against log h; throws on non-positive
/// errors or fewer than two distinct h.
EocFit fit_eoc(std::span<const std::pair<double, double>> rows);
double estimate_eoc(std::span<const std::pair<double, double>> rows);

struct ConvergenceRow {
    double h = 0.0;
    double dt = 0.0;
    double xi = 0.0;
    std::string mesh;
    double l1_error = 0.0;
    double E_h = 0.0;
    double Q_h = 0.0;
    double eps_h = 0.0;
    double identity_residual = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;  // sorted by h descending
    EocFit fit;
};

inline constexpr const char* kConvergenceCsvHeader =
    "h,dt,xi,mesh,l1_error,E_h,Q_h,eps_h,identity_residual";

std::string convergence_rows_to_csv(std::span<const ConvergenceRow> rows);
std::vector<ConvergenceRow> convergence_rows_from_csv(const std::string& text);

}  // namespace advect
