#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "advect/analysis.hpp"
#include "advect/experiment.hpp"
#include "advect/run.hpp"

namespace py = pybind11;
using namespace advect;

namespace {

std::vector<Vec2> to_points(const std::vector<std::pair<double, double>>& xy) {
    std::vector<Vec2> pts;
    pts.reserve(xy.size());
    for (const auto& [x, y] : xy) pts.push_back({x, y});
    return pts;
}

FlowSampler make_sampler(const VelocityField& field, const Box& domain,
                         BoundaryKind boundary, int substeps_per_dt,
                         double time_cell) {
    FlowSampler s;
    s.field = &field;
    s.domain = domain;
    s.boundary = boundary;
    s.substeps_per_dt = substeps_per_dt;
    s.time_cell = time_cell;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "2D upwind finite-volume solver for linear advection with "
              "divergence-free velocity, plus its analysis functionals";

    py::enum_<BoundaryKind>(m, "BoundaryKind")
        .value("impermeable", BoundaryKind::impermeable)
        .value("periodic", BoundaryKind::periodic);

    py::class_<Box>(m, "Box")
        .def(py::init([](double xmin, double xmax, double ymin, double ymax) {
                 return Box{xmin, xmax, ymin, ymax};
             }),
             py::arg("xmin") = 0.0, py::arg("xmax") = 1.0, py::arg("ymin") = 0.0,
             py::arg("ymax") = 1.0)
        .def_readwrite("xmin", &Box::xmin)
        .def_readwrite("xmax", &Box::xmax)
        .def_readwrite("ymin", &Box::ymin)
        .def_readwrite("ymax", &Box::ymax)
        .def("area", &Box::area);

    py::class_<RegularityReport>(m, "RegularityReport")
        .def_readonly("h", &RegularityReport::h)
        .def_readonly("alpha", &RegularityReport::alpha)
        .def_readonly("min_area", &RegularityReport::min_area)
        .def_readonly("max_perimeter", &RegularityReport::max_perimeter);

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("n_cells", &Mesh::n_cells)
        .def_property_readonly("n_edges", &Mesh::n_edges)
        .def_property_readonly("n_vertices", &Mesh::n_vertices)
        .def_property_readonly("boundary_kind",
                               [](const Mesh& mesh) { return mesh.boundary_kind; })
        .def("cell_areas",
             [](const Mesh& mesh) {
                 std::vector<double> areas;
                 for (const Cell& c : mesh.cells) areas.push_back(c.area);
                 return areas;
             })
        .def("cell_centroids",
             [](const Mesh& mesh) {
                 std::vector<std::pair<double, double>> out;
                 for (const Cell& c : mesh.cells)
                     out.push_back({c.centroid.x, c.centroid.y});
                 return out;
             })
        .def("serialize", [](const Mesh& mesh) {
            std::ostringstream out;
            write_mesh(out, mesh);
            return out.str();
        });

    m.def("build_cartesian", &build_cartesian, py::arg("nx"), py::arg("ny"),
          py::arg("domain"), py::arg("boundary") = BoundaryKind::impermeable);
    m.def("build_perturbed_cartesian", &build_perturbed_cartesian, py::arg("nx"),
          py::arg("ny"), py::arg("domain"), py::arg("magnitude"), py::arg("seed"),
          py::arg("boundary") = BoundaryKind::impermeable);
    m.def("validate_mesh", &validate_mesh);
    m.def("read_mesh", [](const std::string& text) {
        std::istringstream in(text);
        return read_mesh(in);
    });

    py::class_<VelocityField>(m, "VelocityField")
        .def_static("uniform", &VelocityField::uniform, py::arg("a"), py::arg("b"))
        .def_static("cellular", &VelocityField::cellular, py::arg("amplitude"))
        .def("with_cosine_time", &VelocityField::with_cosine_time,
             py::return_value_policy::reference_internal)
        .def("velocity",
             [](const VelocityField& f, double x, double y, double t) {
                 const Vec2 v = f.velocity({x, y}, t);
                 return std::pair{v.x, v.y};
             },
             py::arg("x"), py::arg("y"), py::arg("t") = 0.0)
        .def("stream",
             [](const VelocityField& f, double x, double y) {
                 return f.stream({x, y});
             })
        .def("sup_speed", &VelocityField::sup_speed)
        .def("sup_gradient", &VelocityField::sup_gradient)
        .def("tangent_on_boundary", &VelocityField::tangent_on_boundary);

    py::class_<InitialData>(m, "InitialData")
        .def_static("indicator_box",
                    [](double xlo, double ylo, double xhi, double yhi) {
                        return InitialData::indicator_box({xlo, xhi, ylo, yhi});
                    },
                    py::arg("xlo"), py::arg("ylo"), py::arg("xhi"), py::arg("yhi"))
        .def_static("indicator",
                    [](const std::vector<std::vector<std::pair<double, double>>>& polys) {
                        std::vector<std::vector<Vec2>> ps;
                        for (const auto& p : polys) ps.push_back(to_points(p));
                        return InitialData::indicator(std::move(ps));
                    })
        .def_static("piecewise",
                    [](int nx, int ny, const Box& box, std::vector<double> values) {
                        return InitialData::piecewise(nx, ny, box, std::move(values));
                    })
        .def_static("constant", &InitialData::analytic_constant)
        .def_static("gaussian",
                    [](double peak, double cx, double cy, double sigma) {
                        return InitialData::analytic_gaussian(peak, {cx, cy}, sigma);
                    })
        .def("eval", [](const InitialData& d, double x, double y) {
            return d.eval({x, y});
        });

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def(py::init([](double xi, double c0, int sample_density) {
                 SchemeConfig c;
                 c.xi = xi;
                 c.c0 = c0;
                 c.sample_density = sample_density;
                 c.validate();
                 return c;
             }),
             py::arg("xi") = 0.1, py::arg("c0") = 1.0, py::arg("sample_density") = 8)
        .def_readwrite("xi", &SchemeConfig::xi)
        .def_readwrite("c0", &SchemeConfig::c0)
        .def_readwrite("sample_density", &SchemeConfig::sample_density);

    py::class_<GridFunction>(m, "GridFunction")
        .def_property_readonly("values",
                               [](const GridFunction& u) { return u.values; })
        .def_readonly("step", &GridFunction::step)
        .def_readonly("time", &GridFunction::time);

    py::class_<CflResult>(m, "CflResult")
        .def_readonly("dt", &CflResult::dt)
        .def_readonly("n", &CflResult::n)
        .def_property_readonly("nsteps", &CflResult::nsteps)
        .def_readonly("dt_bound", &CflResult::dt_bound);

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("E_h", &EnergyReport::E_h)
        .def_readonly("Q_h", &EnergyReport::Q_h)
        .def_readonly("eps_h", &EnergyReport::eps_h)
        .def_readonly("identity_residual", &EnergyReport::identity_residual)
        .def_readonly("cauchy_schwarz_excess", &EnergyReport::cauchy_schwarz_excess);

    py::class_<RunDiagnostics>(m, "RunDiagnostics")
        .def_readonly("mass_drift_rel", &RunDiagnostics::mass_drift_rel)
        .def_readonly("overshoot", &RunDiagnostics::overshoot)
        .def_readonly("l1_growth_rel", &RunDiagnostics::l1_growth_rel)
        .def_readonly("l2_growth_rel", &RunDiagnostics::l2_growth_rel)
        .def_readonly("max_cfl_number", &RunDiagnostics::max_cfl_number);

    py::class_<StepLedgerRow>(m, "StepLedgerRow")
        .def_readonly("n", &StepLedgerRow::n)
        .def_readonly("time", &StepLedgerRow::time)
        .def_readonly("mass", &StepLedgerRow::mass)
        .def_readonly("min", &StepLedgerRow::min)
        .def_readonly("max", &StepLedgerRow::max)
        .def_readonly("l1", &StepLedgerRow::l1)
        .def_readonly("l2", &StepLedgerRow::l2);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("snapshots", &RunResult::snapshots)
        .def_readonly("ledger", &RunResult::ledger)
        .def_readonly("energy", &RunResult::energy)
        .def_readonly("diagnostics", &RunResult::diagnostics)
        .def_readonly("dt", &RunResult::dt)
        .def_readonly("nsteps", &RunResult::nsteps)
        .def_readonly("horizon", &RunResult::horizon);

    m.def("project_initial", &project_initial, py::arg("mesh"), py::arg("data"),
          py::arg("config"));
    m.def("cfl_timestep", &cfl_timestep, py::arg("mesh"), py::arg("field"),
          py::arg("config"), py::arg("horizon"));
    m.def("run_to_time",
          [](const Mesh& mesh, const VelocityField& field, const InitialData& data,
             const SchemeConfig& config, double horizon,
             std::vector<double> snapshot_times) {
              return run_to_time(mesh, field, data, config, horizon, snapshot_times);
          },
          py::arg("mesh"), py::arg("field"), py::arg("data"), py::arg("config"),
          py::arg("horizon"), py::arg("snapshot_times") = std::vector<double>{});
    m.def("run_steps",
          [](const Mesh& mesh, const VelocityField& field, const InitialData& data,
             const SchemeConfig& config, double dt, int nsteps,
             std::vector<double> snapshot_times) {
              return run_steps(mesh, field, data, config, dt, nsteps, snapshot_times);
          },
          py::arg("mesh"), py::arg("field"), py::arg("data"), py::arg("config"),
          py::arg("dt"), py::arg("nsteps"),
          py::arg("snapshot_times") = std::vector<double>{});

    m.def("exact_solution_at",
          [](const VelocityField& field, const InitialData& data, const Box& domain,
             BoundaryKind boundary, double x, double y, double t, int substeps,
             double time_cell) {
              const ExactSolution sol(data,
                                      make_sampler(field, domain, boundary, substeps,
                                                   time_cell));
              return sol.at({x, y}, t);
          },
          py::arg("field"), py::arg("data"), py::arg("domain"), py::arg("boundary"),
          py::arg("x"), py::arg("y"), py::arg("t"), py::arg("substeps_per_dt") = 16,
          py::arg("time_cell") = 0.25);
    m.def("l1_error",
          [](const GridFunction& u, const VelocityField& field,
             const InitialData& data, const Box& domain, BoundaryKind boundary,
             double t, int density) {
              const ExactSolution sol(
                  data, make_sampler(field, domain, boundary, 16, 0.25));
              return l1_error(u, sol, t, density);
          },
          py::arg("u"), py::arg("field"), py::arg("data"), py::arg("domain"),
          py::arg("boundary"), py::arg("t"), py::arg("density") = 8);
    m.def("jacobian_check",
          [](const VelocityField& field, const Box& domain,
             const std::vector<std::pair<double, double>>& points, double t,
             int substeps, double time_cell) {
              return jacobian_check(
                  make_sampler(field, domain, BoundaryKind::impermeable, substeps,
                               time_cell),
                  to_points(points), t);
          },
          py::arg("field"), py::arg("domain"), py::arg("points"), py::arg("t"),
          py::arg("substeps_per_dt") = 16, py::arg("time_cell") = 0.25);

    m.def("discrete_total_variation", &discrete_total_variation);
    m.def("mass", &mass);
    m.def("l1_norm", &l1_norm);
    m.def("l2_norm_squared", &l2_norm_squared);
    m.def("estimate_eoc",
          [](const std::vector<std::pair<double, double>>& rows) {
              return estimate_eoc(rows);
          });
    m.def("layer_cake_decompose",
          [](const std::vector<double>& values) {
              std::vector<std::pair<double, std::vector<double>>> out;
              for (auto& part : layer_cake_decompose(values))
                  out.push_back({part.weight, std::move(part.indicator)});
              return out;
          });

    m.def("run_experiment_file",
          [](const std::string& path) {
              std::ostringstream log;
              const auto outcome =
                  run_experiment(load_experiment_config(path), log);
              return std::tuple{outcome.exit_code, outcome.directory.string(),
                                log.str()};
          },
          py::arg("config_path"),
          "Run one experiment config; returns (exit_code, output_dir, log)");
    m.def("converge_study_file",
          [](const std::string& path) {
              std::ostringstream log;
              const auto outcome = converge_study(load_study_config(path), log);
              return std::tuple{outcome.exit_code, outcome.table.fit.slope,
                                outcome.directory.string(), log.str()};
          },
          py::arg("study_path"),
          "Run a refinement study; returns (exit_code, eoc, output_dir, log)");

    py::register_exception<ConfigError>(m, "ConfigError");
}
