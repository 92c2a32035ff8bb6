#include "advect/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace advect {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct KeyValues {
    std::map<std::string, std::string> kv;
    std::set<std::string> used;

    bool has(const std::string& key) const { return kv.count(key) != 0; }

    const std::string& raw(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("missing required key: " + key);
        used.insert(key);
        return it->second;
    }

    std::string get_string(const std::string& key, const char* fallback = nullptr) {
        if (!has(key)) {
            if (fallback) return fallback;
            throw ConfigError("missing required key: " + key);
        }
        return raw(key);
    }

    double get_double(const std::string& key) {
        const std::string& s = raw(key);
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw ConfigError("key " + key + ": not a number: " + s);
        }
        if (pos != s.size()) throw ConfigError("key " + key + ": trailing junk: " + s);
        return v;
    }

    double get_double(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    long long get_int(const std::string& key) {
        const double v = get_double(key);
        if (v != std::floor(v)) throw ConfigError("key " + key + ": expected integer");
        return static_cast<long long>(v);
    }

    long long get_int(const std::string& key, long long fallback) {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string s = raw(key);
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        throw ConfigError("key " + key + ": expected true/false");
    }

    std::vector<double> get_doubles(const std::string& key) {
        std::istringstream in(raw(key));
        std::vector<double> out;
        double v;
        while (in >> v) out.push_back(v);
        if (!in.eof()) throw ConfigError("key " + key + ": expected numbers");
        return out;
    }

    void reject_unused() const {
        for (const auto& [key, value] : kv)
            if (!used.count(key))
                throw ConfigError("unknown or inapplicable key: " + key);
    }
};

KeyValues read_key_values(std::istream& in) {
    KeyValues out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!out.kv.emplace(key, value).second)
            throw ConfigError("duplicate key: " + key);
    }
    return out;
}

std::vector<Vec2> parse_polygon(const std::vector<double>& coords,
                                const std::string& key) {
    if (coords.size() < 6 || coords.size() % 2 != 0)
        throw ConfigError("key " + key + ": expected x y pairs of >= 3 vertices");
    std::vector<Vec2> poly;
    for (std::size_t i = 0; i < coords.size(); i += 2)
        poly.push_back({coords[i], coords[i + 1]});
    return poly;
}

ExperimentConfig parse_experiment(KeyValues& kv) {
    ExperimentConfig cfg;

    cfg.mesh.kind = kv.get_string("mesh.kind", "cartesian");
    if (cfg.mesh.kind != "cartesian" && cfg.mesh.kind != "perturbed")
        throw ConfigError("mesh.kind must be cartesian or perturbed");
    if (kv.has("mesh.n")) {
        cfg.mesh.nx = cfg.mesh.ny = static_cast<int>(kv.get_int("mesh.n"));
        if (kv.has("mesh.nx") || kv.has("mesh.ny"))
            throw ConfigError("give either mesh.n or mesh.nx/mesh.ny, not both");
    } else {
        cfg.mesh.nx = static_cast<int>(kv.get_int("mesh.nx", 16));
        cfg.mesh.ny = static_cast<int>(kv.get_int("mesh.ny", 16));
    }
    if (cfg.mesh.nx < 1 || cfg.mesh.ny < 1)
        throw ConfigError("mesh resolution must be >= 1");
    if (cfg.mesh.kind == "perturbed") {
        cfg.mesh.perturbation = kv.get_double("mesh.perturbation");
        if (!(cfg.mesh.perturbation >= 0.0) || cfg.mesh.perturbation >= 0.5)
            throw ConfigError("mesh.perturbation must lie in [0, 0.5)");
        cfg.mesh.seed = static_cast<std::uint64_t>(kv.get_int("mesh.seed"));
    } else if (kv.has("mesh.perturbation") || kv.has("mesh.seed")) {
        throw ConfigError("mesh.perturbation/seed require mesh.kind = perturbed");
    }

    cfg.domain.xmin = kv.get_double("domain.xmin", 0.0);
    cfg.domain.xmax = kv.get_double("domain.xmax", 1.0);
    cfg.domain.ymin = kv.get_double("domain.ymin", 0.0);
    cfg.domain.ymax = kv.get_double("domain.ymax", 1.0);
    if (!(cfg.domain.width() > 0.0) || !(cfg.domain.height() > 0.0))
        throw ConfigError("domain must be non-degenerate");

    cfg.boundary = boundary_kind_from_string(kv.get_string("boundary", "periodic"));

    cfg.field.stream = kv.get_string("field.stream", "uniform");
    if (cfg.field.stream == "uniform") {
        cfg.field.a = kv.get_double("field.a", 1.0);
        cfg.field.b = kv.get_double("field.b", 0.0);
        if (kv.has("field.amplitude"))
            throw ConfigError("field.amplitude requires field.stream = cellular");
    } else if (cfg.field.stream == "cellular") {
        cfg.field.amplitude = kv.get_double("field.amplitude", 1.0);
        if (kv.has("field.a") || kv.has("field.b"))
            throw ConfigError("field.a/field.b require field.stream = uniform");
    } else {
        throw ConfigError("field.stream must be uniform or cellular");
    }
    cfg.field.time = kv.get_string("field.time", "constant");
    if (cfg.field.time == "cosine") {
        cfg.field.omega = kv.get_double("field.omega", 1.0);
    } else if (cfg.field.time == "constant") {
        if (kv.has("field.omega"))
            throw ConfigError("field.omega requires field.time = cosine");
    } else {
        throw ConfigError("field.time must be constant or cosine");
    }

    // velocity tangency: a uniform drift through an impermeable wall is the
    // documented misconfiguration
    if (cfg.boundary == BoundaryKind::impermeable &&
        !cfg.build_field().tangent_on_boundary(cfg.domain))
        throw ConfigError(
            "field is not tangent to an impermeable boundary; use boundary = "
            "periodic or a stream function constant on the walls");

    cfg.init.kind = kv.get_string("init.kind", "indicator");
    if (cfg.init.kind == "indicator") {
        if (kv.has("init.box")) {
            const auto b = kv.get_doubles("init.box");
            if (b.size() != 4)
                throw ConfigError("init.box: expected xlo ylo xhi yhi");
            if (!(b[0] < b[2] && b[1] < b[3]))
                throw ConfigError("init.box: expected xlo < xhi and ylo < yhi");
            cfg.init.polygons.push_back(
                {{b[0], b[1]}, {b[2], b[1]}, {b[2], b[3]}, {b[0], b[3]}});
        }
        for (int i = 0;; ++i) {
            const std::string key = "init.polygon." + std::to_string(i);
            if (!kv.has(key)) break;
            cfg.init.polygons.push_back(parse_polygon(kv.get_doubles(key), key));
        }
        if (cfg.init.polygons.empty())
            throw ConfigError("indicator data needs init.box or init.polygon.0 ...");
        for (const auto& poly : cfg.init.polygons)
            for (const Vec2& p : poly)
                if (!cfg.domain.contains(p, 1e-12))
                    throw ConfigError("init polygon leaves the domain");
    } else if (cfg.init.kind == "piecewise") {
        cfg.init.aux_nx = static_cast<int>(kv.get_int("init.aux_nx"));
        cfg.init.aux_ny = static_cast<int>(kv.get_int("init.aux_ny"));
        cfg.init.values = kv.get_doubles("init.values");
        if (cfg.init.aux_nx < 1 || cfg.init.aux_ny < 1)
            throw ConfigError("init.aux_nx/aux_ny must be >= 1");
        if (cfg.init.values.size() !=
            static_cast<std::size_t>(cfg.init.aux_nx) * cfg.init.aux_ny)
            throw ConfigError("init.values must hold aux_nx * aux_ny numbers");
    } else if (cfg.init.kind == "analytic") {
        cfg.init.function = kv.get_string("init.function", "constant");
        cfg.init.value = kv.get_double("init.value", 1.0);
        if (cfg.init.function == "gaussian") {
            cfg.init.cx = kv.get_double("init.cx");
            cfg.init.cy = kv.get_double("init.cy");
            cfg.init.sigma = kv.get_double("init.sigma");
            if (!(cfg.init.sigma > 0.0)) throw ConfigError("init.sigma must be > 0");
        } else if (cfg.init.function != "constant") {
            throw ConfigError("init.function must be constant or gaussian");
        }
    } else {
        throw ConfigError("init.kind must be indicator, piecewise or analytic");
    }

    cfg.xi = kv.get_double("xi", 0.1);
    if (!(cfg.xi >= 0.0) || cfg.xi >= 1.0)
        throw ConfigError("xi must lie in [0, 1)");
    cfg.c0 = kv.get_double("c0", 1.0);
    if (!(cfg.c0 > 0.0)) throw ConfigError("c0 must be > 0");
    cfg.horizon = kv.get_double("t");
    if (!(cfg.horizon > 0.0)) throw ConfigError("t must be > 0");

    if (kv.has("snapshots")) {
        cfg.snapshots = kv.get_doubles("snapshots");
        for (double s : cfg.snapshots)
            if (s < 0.0 || s > cfg.horizon * (1.0 + 1e-12))
                throw ConfigError("snapshots must lie in [0, t]");
    }
    cfg.sampling_density = static_cast<int>(kv.get_int("sampling.density", 8));
    if (cfg.sampling_density < 1)
        throw ConfigError("sampling.density must be >= 1");
    cfg.sampling_autorefine = kv.get_bool("sampling.autorefine", true);
    cfg.output = kv.get_string("output", "out");
    if (cfg.output.empty()) throw ConfigError("output must not be empty");
    return cfg;
}

}  // namespace

Mesh ExperimentConfig::build_mesh() const { return build_mesh(0); }

Mesh ExperimentConfig::build_mesh(int n) const {
    const int nx = n > 0 ? n : mesh.nx;
    const int ny = n > 0 ? n : mesh.ny;
    if (mesh.kind == "perturbed")
        return build_perturbed_cartesian(nx, ny, domain, mesh.perturbation,
                                         mesh.seed, boundary);
    return build_cartesian(nx, ny, domain, boundary);
}

VelocityField ExperimentConfig::build_field() const {
    VelocityField f = field.stream == "cellular"
                          ? VelocityField::cellular(field.amplitude)
                          : VelocityField::uniform(field.a, field.b);
    if (field.time == "cosine") f.with_cosine_time(field.omega);
    return f;
}

InitialData ExperimentConfig::build_init() const {
    if (init.kind == "indicator") return InitialData::indicator(init.polygons);
    if (init.kind == "piecewise")
        return InitialData::piecewise(init.aux_nx, init.aux_ny, domain, init.values);
    if (init.function == "gaussian")
        return InitialData::analytic_gaussian(init.value, {init.cx, init.cy},
                                              init.sigma);
    return InitialData::analytic_constant(init.value);
}

SchemeConfig ExperimentConfig::scheme() const {
    SchemeConfig s;
    s.xi = xi;
    s.c0 = c0;
    s.sample_density = sampling_density;
    return s;
}

FlowSampler ExperimentConfig::build_sampler() const {
    FlowSampler s;
    s.boundary = boundary;
    s.domain = domain;
    return s;
}

ExperimentConfig parse_experiment_config(std::istream& in) {
    KeyValues kv = read_key_values(in);
    ExperimentConfig cfg = parse_experiment(kv);
    kv.reject_unused();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file.string());
    return parse_experiment_config(in);
}

StudySpec parse_study_config(std::istream& in) {
    KeyValues kv = read_key_values(in);
    StudySpec study;
    study.base = parse_experiment(kv);
    const auto levels = kv.get_doubles("study.levels");
    for (double v : levels) {
        if (v != std::floor(v) || v < 1.0)
            throw ConfigError("study.levels must be positive integers");
        study.levels.push_back(static_cast<int>(v));
    }
    if (study.levels.size() < 2)
        throw ConfigError("study.levels needs at least two levels");
    std::set<int> uniq(study.levels.begin(), study.levels.end());
    if (uniq.size() != study.levels.size())
        throw ConfigError("study.levels contains a duplicate level (duplicate h)");
    study.window_lo = kv.get_double("study.window.lo");
    study.window_hi = kv.get_double("study.window.hi");
    if (!(study.window_lo < study.window_hi))
        throw ConfigError("study window must satisfy lo < hi");
    kv.reject_unused();
    return study;
}

StudySpec load_study_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open study file: " + file.string());
    return parse_study_config(in);
}

std::filesystem::path resolve_output_dir(const std::string& configured) {
    if (const char* root = std::getenv("ADVECT_OUTPUT_ROOT"))
        return std::filesystem::path(root) / configured;
    return configured;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

ConvergenceRow summarize_run(const ExperimentConfig& cfg, const Mesh& mesh,
                             const RunResult& run, double l1_err) {
    ConvergenceRow row;
    row.h = validate_mesh(mesh).h;
    row.dt = run.dt;
    row.xi = cfg.xi;
    row.mesh = cfg.mesh.kind;
    row.l1_error = l1_err;
    row.E_h = run.energy.E_h;
    row.Q_h = run.energy.Q_h;
    row.eps_h = run.energy.eps_h;
    row.identity_residual = run.energy.identity_residual;
    return row;
}

ExperimentOutcome run_one(const ExperimentConfig& cfg,
                          const std::filesystem::path& dir, std::ostream& log,
                          int level_n = 0) {
    std::filesystem::create_directories(dir);
    ExperimentOutcome out;
    out.directory = dir;

    const Mesh mesh = cfg.build_mesh(level_n);
    const VelocityField field = cfg.build_field();
    const InitialData data = cfg.build_init();

    try {
        out.run = run_to_time(mesh, field, data, cfg.scheme(), cfg.horizon,
                              cfg.snapshots);
    } catch (const CflViolation& e) {
        log << "invariant violation: " << e.what() << "\n";
        out.exit_code = kExitInvariant;
        return out;
    }

    // exact solution and error ledger over the snapshot times
    FlowSampler sampler = cfg.build_sampler();
    sampler.field = &field;
    ExactSolution exact(data, sampler);
    ErrorReport err;
    err.sampling_density = cfg.sampling_density;
    for (const GridFunction& snap : out.run.snapshots) {
        ErrorReport r = l1_error_report(snap, exact, snap.time, cfg.sampling_density,
                                        cfg.sampling_autorefine);
        err.linf_t_l1 = std::max(err.linf_t_l1, r.l1_at_t);
        if (&snap == &out.run.snapshots.back()) {
            err.l1_at_t = r.l1_at_t;
            err.sampling_density = r.sampling_density;
            err.estimated_quadrature_error = r.estimated_quadrature_error;
        }
    }
    out.error = err;
    out.row = summarize_run(cfg, mesh, out.run, err.l1_at_t);

    // report.csv: per-step conservation ledger
    std::ostringstream report;
    report << kReportCsvHeader << '\n';
    for (const StepLedgerRow& r : out.run.ledger)
        report << fmt17(r.time) << ',' << fmt17(r.mass) << ',' << fmt17(r.min) << ','
               << fmt17(r.max) << ',' << fmt17(r.l1) << ',' << fmt17(r.l2) << '\n';
    write_file(dir / "report.csv", report.str());

    write_file(dir / "energy.csv", convergence_rows_to_csv({&out.row, 1}));

    std::ostringstream errcsv;
    errcsv << kErrorCsvHeader << '\n'
           << fmt17(err.l1_at_t) << ',' << fmt17(err.linf_t_l1) << ','
           << err.sampling_density << ',' << fmt17(err.estimated_quadrature_error)
           << '\n';
    write_file(dir / "error.csv", errcsv.str());

    if (!cfg.snapshots.empty()) {
        for (const GridFunction& snap : out.run.snapshots) {
            std::ostringstream name;
            name << "snapshot_" << snap.step << ".txt";
            std::ofstream sf(dir / name.str(), std::ios::binary);
            write_gridfunction(sf, snap);
        }
    }

    if (out.run.energy.identity_residual > 1e-12) {
        log << "invariant violation: energy identity residual "
            << out.run.energy.identity_residual << " exceeds 1e-12\n";
        out.exit_code = kExitInvariant;
        return out;
    }
    // h <= c1 t is an assumption of the error theory, not of the scheme;
    // log the ratio so convergence studies can keep t fixed as h shrinks
    log << "run: h=" << out.row.h << " dt=" << out.run.dt << " steps="
        << out.run.nsteps << " h/t=" << out.row.h / cfg.horizon
        << " l1_error=" << err.l1_at_t
        << " mass_drift=" << out.run.diagnostics.mass_drift_rel << "\n";
    return out;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    return run_one(cfg, resolve_output_dir(cfg.output), log);
}

StudyOutcome converge_study(const StudySpec& study, std::ostream& log) {
    StudyOutcome out;
    out.directory = resolve_output_dir(study.base.output);
    std::filesystem::create_directories(out.directory);

    for (int n : study.levels) {
        ExperimentOutcome level = run_one(
            study.base, out.directory / ("level_" + std::to_string(n)), log, n);
        if (level.exit_code != kExitOk) {
            log << "level n=" << n << " failed\n";
            out.exit_code = level.exit_code;
            return out;
        }
        out.table.rows.push_back(level.row);
    }
    std::sort(out.table.rows.begin(), out.table.rows.end(),
              [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.h > b.h; });

    std::vector<std::pair<double, double>> he;
    for (const ConvergenceRow& r : out.table.rows) he.push_back({r.h, r.l1_error});
    out.table.fit = fit_eoc(he);

    write_file(out.directory / "convergence.csv",
               convergence_rows_to_csv(out.table.rows));
    std::ostringstream svg;
    write_loglog_svg(svg, out.table.rows, out.table.fit);
    write_file(out.directory / "convergence.svg", svg.str());

    log << "study: eoc=" << out.table.fit.slope << " window=[" << study.window_lo
        << ", " << study.window_hi << "]\n";
    if (out.table.fit.slope < study.window_lo || out.table.fit.slope > study.window_hi)
        out.exit_code = kExitWindow;
    return out;
}

void write_loglog_svg(std::ostream& out, std::span<const ConvergenceRow> rows,
                      const EocFit& fit) {
    const double W = 560, H = 420, ml = 70, mr = 20, mt = 30, mb = 50;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const ConvergenceRow& r : rows) {
        xlo = std::min(xlo, std::log10(r.h));
        xhi = std::max(xhi, std::log10(r.h));
        ylo = std::min(ylo, std::log10(r.l1_error));
        yhi = std::max(yhi, std::log10(r.l1_error));
    }
    const double padx = 0.08 * std::max(1e-12, xhi - xlo);
    const double pady = 0.08 * std::max(1e-12, yhi - ylo);
    xlo -= padx;
    xhi += padx;
    ylo -= pady;
    yhi += pady;
    auto X = [&](double lx) { return ml + (lx - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto Y = [&](double ly) { return H - mb - (ly - ylo) / (yhi - ylo) * (H - mt - mb); };

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
        << H << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='18' text-anchor='middle' font-size='14'>"
        << "L1 error vs h (log-log), fitted slope " << fmt17(fit.slope).substr(0, 6)
        << "</text>\n";
    // axes
    out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr
        << "' y2='" << H - mb << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
        << H - mb << "' stroke='black'/>\n";
    const int nticks = 5;
    for (int i = 0; i <= nticks; ++i) {
        const double lx = xlo + (xhi - xlo) * i / nticks;
        const double ly = ylo + (yhi - ylo) * i / nticks;
        out << "<line x1='" << X(lx) << "' y1='" << H - mb << "' x2='" << X(lx)
            << "' y2='" << H - mb + 5 << "' stroke='black'/>\n";
        out << "<text x='" << X(lx) << "' y='" << H - mb + 18
            << "' text-anchor='middle' font-size='10'>1e" << fmt17(lx).substr(0, 6)
            << "</text>\n";
        out << "<line x1='" << ml - 5 << "' y1='" << Y(ly) << "' x2='" << ml
            << "' y2='" << Y(ly) << "' stroke='black'/>\n";
        out << "<text x='" << ml - 8 << "' y='" << Y(ly) + 3
            << "' text-anchor='end' font-size='10'>1e" << fmt17(ly).substr(0, 6)
            << "</text>\n";
    }
    out << "<text x='" << (W + ml - mr) / 2 << "' y='" << H - 12
        << "' text-anchor='middle' font-size='12'>h</text>\n";
    // reference slope-1/2 line through the coarsest point
    if (!rows.empty()) {
        const double x0 = std::log10(rows.front().h);
        const double y0 = std::log10(rows.front().l1_error);
        out << "<line x1='" << X(xlo) << "' y1='" << Y(y0 + 0.5 * (xlo - x0))
            << "' x2='" << X(xhi) << "' y2='" << Y(y0 + 0.5 * (xhi - x0))
            << "' stroke='#999' stroke-dasharray='5,4'/>\n";
    }
    // fitted line
    double xbar = 0.0, ybar = 0.0;
    for (const ConvergenceRow& r : rows) {
        xbar += std::log10(r.h);
        ybar += std::log10(r.l1_error);
    }
    xbar /= static_cast<double>(rows.size());
    ybar /= static_cast<double>(rows.size());
    out << "<line x1='" << X(xlo) << "' y1='" << Y(ybar + fit.slope * (xlo - xbar))
        << "' x2='" << X(xhi) << "' y2='" << Y(ybar + fit.slope * (xhi - xbar))
        << "' stroke='#1f77b4'/>\n";
    for (const ConvergenceRow& r : rows)
        out << "<circle cx='" << X(std::log10(r.h)) << "' cy='"
            << Y(std::log10(r.l1_error)) << "' r='4' fill='#d62728'/>\n";
    out << "</svg>\n";
}

}  // namespace advect
