#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "advect/analysis.hpp"
#include "advect/run.hpp"

namespace advect {

/// Raised on any schema or consistency failure of a config file; the CLI
/// maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeshSpec {
    std::string kind = "cartesian";  // cartesian | perturbed
    int nx = 16;
    int ny = 16;
    double perturbation = 0.0;
    std::uint64_t seed = 0;
};

struct FieldSpec {
    std::string stream = "uniform";  // uniform | cellular
    double a = 1.0;
    double b = 0.0;
    double amplitude = 1.0;
    std::string time = "constant";  // constant | cosine
    double omega = 1.0;
};

struct InitSpec {
    std::string kind = "indicator";  // indicator | piecewise | analytic
    std::vector<std::vector<Vec2>> polygons;
    int aux_nx = 1, aux_ny = 1;
    std::vector<double> values;
    std::string function = "constant";  // constant | gaussian
    double value = 1.0;
    double cx = 0.5, cy = 0.5, sigma = 0.1;
};

struct ExperimentConfig {
    MeshSpec mesh;
    Box domain;
    BoundaryKind boundary = BoundaryKind::periodic;
    FieldSpec field;
    InitSpec init;
    double xi = 0.1;
    double c0 = 1.0;
    double horizon = 0.5;
    std::vector<double> snapshots;
    int sampling_density = 8;
    bool sampling_autorefine = true;
    std::string output = "out";

    Mesh build_mesh() const;
    Mesh build_mesh(int n) const;  // level override, nx = ny = n
    VelocityField build_field() const;
    InitialData build_init() const;
    SchemeConfig scheme() const;
    FlowSampler build_sampler() const;
};

struct StudySpec {
    ExperimentConfig base;
    std::vector<int> levels;
    double window_lo = 0.4;
    double window_hi = 0.65;
};

/// Flat key = value format, '#' comments, unknown or inapplicable keys
/// rejected. Throws ConfigError with the offending key/line.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& file);
StudySpec parse_study_config(std::istream& in);
StudySpec load_study_config(const std::filesystem::path& file);

/// Output root override: $ADVECT_OUTPUT_ROOT/<config output> when the
/// environment variable is set.
std::filesystem::path resolve_output_dir(const std::string& configured);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitWindow = 4;

inline constexpr const char* kReportCsvHeader = "time,mass,min,max,l1,l2";
inline constexpr const char* kErrorCsvHeader =
    "l1_at_t,linf_t_l1,sampling_density,estimated_quadrature_error";

struct ExperimentOutcome {
    int exit_code = kExitOk;
    RunResult run;
    ConvergenceRow row;  // energy/error summary of the run
    ErrorReport error;
    std::filesystem::path directory;
};

/// Runs one configured experiment and writes report.csv, energy.csv,
/// error.csv and any requested snapshots. Numerical invariant violations
/// (CFL refusal, identity residual breach) yield exit code 3.
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log);

struct StudyOutcome {
    int exit_code = kExitOk;
    ConvergenceTable table;
    std::filesystem::path directory;
};

/// Runs every refinement level, writes convergence.csv and a data-driven
/// log-log SVG, and gates the fitted EOC against the study window (exit 4
/// when outside).
StudyOutcome converge_study(const StudySpec& study, std::ostream& log);

void write_loglog_svg(std::ostream& out, std::span<const ConvergenceRow> rows,
                      const EocFit& fit);

}  // namespace advect
