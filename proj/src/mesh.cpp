#include "advect/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "advect/summation.hpp"

namespace advect {

std::string to_string(BoundaryKind k) {
    return k == BoundaryKind::periodic ? "periodic" : "impermeable";
}

BoundaryKind boundary_kind_from_string(const std::string& s) {
    if (s == "periodic") return BoundaryKind::periodic;
    if (s == "impermeable") return BoundaryKind::impermeable;
    throw std::invalid_argument("unknown boundary kind: " + s);
}

std::vector<Vec2> Mesh::cell_polygon(int c) const {
    const Cell& cell = cells[c];
    std::vector<Vec2> poly;
    poly.reserve(cell.loop.size());
    for (int v : cell.loop) poly.push_back(vertices[v].pos);
    return poly;
}

int Mesh::neighbor(int cell, int edge) const {
    const Edge& e = edges[edge];
    return e.left == cell ? e.right : e.left;
}

namespace {

struct MeshBuilder {
    Mesh mesh;
    std::map<std::pair<int, int>, int> edge_of;  // (min v, max v) -> edge id

    void add_cell(std::vector<int> loop) {
        Cell cell;
        cell.id = static_cast<int>(mesh.cells.size());
        cell.loop = std::move(loop);
        const int n = static_cast<int>(cell.loop.size());
        for (int i = 0; i < n; ++i) {
            const int a = cell.loop[i];
            const int b = cell.loop[(i + 1) % n];
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                Edge e;
                e.id = static_cast<int>(mesh.edges.size());
                e.v0 = a;
                e.v1 = b;
                e.left = cell.id;
                edge_of.emplace(key, e.id);
                mesh.edges.push_back(e);
                cell.edges.push_back({e.id, 1.0});
            } else {
                Edge& e = mesh.edges[it->second];
                if (e.right != kBoundary)
                    throw std::runtime_error("edge shared by more than two cells");
                e.right = cell.id;
                cell.edges.push_back({e.id, -1.0});
            }
        }
        mesh.cells.push_back(std::move(cell));
    }

    void finalize_geometry() {
        for (Edge& e : mesh.edges) {
            const Vec2 a = mesh.vertices[e.v0].pos;
            const Vec2 b = mesh.vertices[e.v1].pos;
            e.length = distance(a, b);
            if (e.length <= 0.0)
                throw std::runtime_error("degenerate edge " + std::to_string(e.id));
            const Vec2 t = (1.0 / e.length) * (b - a);
            e.normal = {t.y, -t.x};
        }
        for (Cell& c : mesh.cells) {
            const auto poly = mesh.cell_polygon(c.id);
            c.area = polygon_area(poly);
            c.perimeter = polygon_perimeter(poly);
            c.centroid = polygon_centroid(poly);
            c.diameter = polygon_diameter(poly);
        }
    }
};

int vid(int i, int j, int nx) { return j * (nx + 1) + i; }

std::vector<Vec2> grid_positions(int nx, int ny, const Box& box) {
    std::vector<Vec2> pos;
    pos.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            pos.push_back({box.xmin + (static_cast<double>(i) * box.width()) / nx,
                           box.ymin + (static_cast<double>(j) * box.height()) / ny});
    return pos;
}

Mesh build_from_grid(int nx, int ny, const Box& box, std::vector<Vec2> positions,
                     BoundaryKind boundary) {
    MeshBuilder builder;
    builder.mesh.domain = box;
    builder.mesh.boundary_kind = boundary;
    builder.mesh.vertices.reserve(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k)
        builder.mesh.vertices.push_back({static_cast<int>(k), positions[k]});

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            builder.add_cell({vid(i, j, nx), vid(i + 1, j, nx),
                              vid(i + 1, j + 1, nx), vid(i, j + 1, nx)});

    if (boundary == BoundaryKind::periodic) {
        Mesh& m = builder.mesh;
        // Identify opposite boundary edges. The canonical edge keeps the
        // geometry of the max-side representative; boundary rows/columns are
        // never perturbed so the parallel coordinate partitions agree exactly.
        auto cell_of = [&](int i, int j) { return j * nx + i; };
        auto replace_cell_edge = [&](int cell, int old_edge, int new_edge) {
            for (CellEdge& ce : m.cells[cell].edges)
                if (ce.edge == old_edge) {
                    ce.edge = new_edge;
                    ce.sign = -1.0;
                    return;
                }
            throw std::runtime_error("periodic pairing: edge not found in cell");
        };
        std::vector<bool> dead(m.edges.size(), false);
        for (int j = 0; j < ny; ++j) {
            const int cwest = cell_of(0, j);
            const std::pair<int, int> keye{vid(nx, j, nx), vid(nx, j + 1, nx)};
            const std::pair<int, int> keyw{vid(0, j, nx), vid(0, j + 1, nx)};
            const int ee = builder.edge_of.at(keye);
            const int ew = builder.edge_of.at(keyw);
            m.edges[ee].right = cwest;
            m.edges[ee].wrap = true;
            replace_cell_edge(cwest, ew, ee);
            dead[ew] = true;
        }
        for (int i = 0; i < nx; ++i) {
            const int csouth = cell_of(i, 0);
            const std::pair<int, int> keyn{vid(i, ny, nx), vid(i + 1, ny, nx)};
            const std::pair<int, int> keys{vid(i, 0, nx), vid(i + 1, 0, nx)};
            const int en = builder.edge_of.at(keyn);
            const int es = builder.edge_of.at(keys);
            m.edges[en].right = csouth;
            m.edges[en].wrap = true;
            replace_cell_edge(csouth, es, en);
            dead[es] = true;
        }
        // compact edge ids
        std::vector<int> remap(m.edges.size(), -1);
        std::vector<Edge> kept;
        kept.reserve(m.edges.size());
        for (const Edge& e : m.edges) {
            if (dead[e.id]) continue;
            remap[e.id] = static_cast<int>(kept.size());
            kept.push_back(e);
            kept.back().id = remap[e.id];
        }
        m.edges = std::move(kept);
        for (Cell& c : m.cells)
            for (CellEdge& ce : c.edges) ce.edge = remap[ce.edge];
    }

    builder.finalize_geometry();
    return builder.mesh;
}

}  // namespace

Mesh build_cartesian(int nx, int ny, const Box& box, BoundaryKind boundary) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_cartesian: nx and ny must be >= 1");
    if (!(box.width() > 0.0) || !(box.height() > 0.0))
        throw std::invalid_argument("build_cartesian: degenerate domain");
    return build_from_grid(nx, ny, box, grid_positions(nx, ny, box), boundary);
}

Mesh build_perturbed_cartesian(int nx, int ny, const Box& box, double magnitude,
                               std::uint64_t seed, BoundaryKind boundary) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_perturbed_cartesian: nx, ny must be >= 1");
    if (!(magnitude >= 0.0) || magnitude >= 0.5)
        throw std::invalid_argument(
            "build_perturbed_cartesian: magnitude must lie in [0, 0.5)");
    auto positions = grid_positions(nx, ny, box);
    const double smin = std::min(box.width() / nx, box.height() / ny);
    std::mt19937_64 rng(seed);
    // map raw 64-bit draws to [0,1) directly; std::uniform_real_distribution
    // is implementation-defined and would break byte-identical reproducibility
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int j = 1; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double angle = 2.0 * std::numbers::pi * unit();
            const double radius = magnitude * smin * unit();
            Vec2& p = positions[vid(i, j, nx)];
            p.x += radius * std::cos(angle);
            p.y += radius * std::sin(angle);
        }
    Mesh mesh = build_from_grid(nx, ny, box, std::move(positions), boundary);
    for (const Cell& c : mesh.cells)
        if (!(c.area > 0.0))
            throw std::runtime_error("build_perturbed_cartesian: cell " +
                                     std::to_string(c.id) +
                                     " degenerated (non-positive area)");
    return mesh;
}

RegularityReport validate_mesh(const Mesh& mesh) {
    if (mesh.cells.empty()) throw std::runtime_error("validate_mesh: empty mesh");

    for (const Edge& e : mesh.edges) {
        const double nrm = norm(e.normal);
        if (std::abs(nrm - 1.0) > 1e-14)
            throw std::runtime_error("validate_mesh: edge " + std::to_string(e.id) +
                                     " has non-unit normal");
        const double len = distance(mesh.vertex_pos(e.v0), mesh.vertex_pos(e.v1));
        if (std::abs(len - e.length) > 1e-14 * std::max(1.0, len))
            throw std::runtime_error("validate_mesh: edge " + std::to_string(e.id) +
                                     " length mismatch");
        if (e.left == kBoundary)
            throw std::runtime_error("validate_mesh: edge " + std::to_string(e.id) +
                                     " has no left cell");
    }

    // edge pairing consistency: every cell alive, every reference reciprocal
    std::vector<int> refs(mesh.edges.size(), 0);
    for (const Cell& c : mesh.cells) {
        for (const CellEdge& ce : c.edges) {
            const Edge& e = mesh.edges[ce.edge];
            ++refs[ce.edge];
            const int expected = ce.sign > 0 ? e.left : e.right;
            if (expected != c.id)
                throw std::runtime_error("validate_mesh: cell " + std::to_string(c.id) +
                                         " references edge " + std::to_string(e.id) +
                                         " inconsistently");
        }
    }
    for (const Edge& e : mesh.edges) {
        const int expected = e.right == kBoundary ? 1 : 2;
        if (refs[e.id] != expected)
            throw std::runtime_error(
                "validate_mesh: interior edge " + std::to_string(e.id) +
                " referenced " + std::to_string(refs[e.id]) + " times");
    }

    CompensatedSum total_area;
    RegularityReport rep;
    rep.min_area = std::numeric_limits<double>::infinity();
    double alpha_area = std::numeric_limits<double>::infinity();
    double alpha_perim = std::numeric_limits<double>::infinity();
    for (const Cell& c : mesh.cells) {
        if (!(c.area > 0.0))
            throw std::runtime_error("validate_mesh: cell " + std::to_string(c.id) +
                                     " has non-positive area");
        const auto poly = mesh.cell_polygon(c.id);
        const double shoelace = polygon_area(poly);
        if (std::abs(shoelace - c.area) > 1e-13 * std::abs(c.area))
            throw std::runtime_error("validate_mesh: cell " + std::to_string(c.id) +
                                     " stored area disagrees with shoelace");
        // divergence theorem on constants: the closed polygon condition
        Vec2 closure{};
        for (const CellEdge& ce : c.edges) {
            const Edge& e = mesh.edges[ce.edge];
            closure = closure + (ce.sign * e.length) * e.normal;
        }
        if (norm(closure) > 1e-12 * std::max(1.0, c.perimeter))
            throw std::runtime_error("validate_mesh: cell " + std::to_string(c.id) +
                                     " edge loop does not close");
        total_area.add(c.area);
        rep.h = std::max(rep.h, c.diameter);
        rep.min_area = std::min(rep.min_area, c.area);
        rep.max_perimeter = std::max(rep.max_perimeter, c.perimeter);
    }
    const double domain_area = mesh.domain.area();
    if (std::abs(total_area.value() - domain_area) > 1e-12 * domain_area)
        throw std::runtime_error("validate_mesh: cell areas sum to " +
                                 std::to_string(total_area.value()) +
                                 ", domain area is " + std::to_string(domain_area));

    for (const Cell& c : mesh.cells) {
        alpha_area = std::min(alpha_area, c.area / (rep.h * rep.h));
        alpha_perim = std::min(alpha_perim, rep.h / c.perimeter);
    }
    rep.alpha = std::min(alpha_area, alpha_perim);
    if (!(rep.alpha > 0.0))
        throw std::runtime_error("validate_mesh: no admissible alpha > 0");
    return rep;
}

namespace {

void put_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << "mesh2d v1 " << mesh.n_vertices() << ' ' << mesh.n_edges() << ' '
        << mesh.n_cells() << ' ' << to_string(mesh.boundary_kind) << '\n';
    for (const Vertex& v : mesh.vertices) {
        out << "v ";
        put_double(out, v.pos.x);
        out << ' ';
        put_double(out, v.pos.y);
        out << '\n';
    }
    for (const Edge& e : mesh.edges)
        out << "e " << e.v0 << ' ' << e.v1 << ' ' << e.left << ' ' << e.right
            << '\n';
    for (const Cell& c : mesh.cells) {
        out << "c " << c.loop.size();
        for (int v : c.loop) out << ' ' << v;
        out << '\n';
    }
}

Mesh read_mesh(std::istream& in) {
    std::string magic, version, bk;
    int nv = 0, ne = 0, nc = 0;
    in >> magic >> version >> nv >> ne >> nc >> bk;
    if (magic != "mesh2d" || version != "v1")
        throw std::runtime_error("read_mesh: bad header");

    MeshBuilder builder;
    builder.mesh.boundary_kind = boundary_kind_from_string(bk);
    std::string tag;
    builder.mesh.vertices.resize(nv);
    for (int k = 0; k < nv; ++k) {
        in >> tag;
        if (tag != "v") throw std::runtime_error("read_mesh: expected vertex line");
        builder.mesh.vertices[k].id = k;
        in >> builder.mesh.vertices[k].pos.x >> builder.mesh.vertices[k].pos.y;
    }
    Box hull{builder.mesh.vertices[0].pos.x, builder.mesh.vertices[0].pos.x,
             builder.mesh.vertices[0].pos.y, builder.mesh.vertices[0].pos.y};
    for (const Vertex& v : builder.mesh.vertices) {
        hull.xmin = std::min(hull.xmin, v.pos.x);
        hull.xmax = std::max(hull.xmax, v.pos.x);
        hull.ymin = std::min(hull.ymin, v.pos.y);
        hull.ymax = std::max(hull.ymax, v.pos.y);
    }
    builder.mesh.domain = hull;

    struct RawEdge {
        int v0, v1, left, right;
    };
    std::vector<RawEdge> raw(ne);
    for (int k = 0; k < ne; ++k) {
        in >> tag;
        if (tag != "e") throw std::runtime_error("read_mesh: expected edge line");
        in >> raw[k].v0 >> raw[k].v1 >> raw[k].left >> raw[k].right;
    }
    builder.mesh.cells.resize(nc);
    for (int k = 0; k < nc; ++k) {
        in >> tag;
        if (tag != "c") throw std::runtime_error("read_mesh: expected cell line");
        std::size_t count = 0;
        in >> count;
        Cell& c = builder.mesh.cells[k];
        c.id = k;
        c.loop.resize(count);
        for (std::size_t i = 0; i < count; ++i) in >> c.loop[i];
    }
    if (!in) throw std::runtime_error("read_mesh: truncated input");

    // rebuild edge records and cell->edge links from the serialized pairing
    Mesh& m = builder.mesh;
    m.edges.resize(ne);
    for (int k = 0; k < ne; ++k) {
        Edge& e = m.edges[k];
        e.id = k;
        e.v0 = raw[k].v0;
        e.v1 = raw[k].v1;
        e.left = raw[k].left;
        e.right = raw[k].right;
        if (e.left < 0 || e.left >= nc || e.right < kBoundary || e.right >= nc)
            throw std::runtime_error("read_mesh: edge " + std::to_string(k) +
                                     " references unknown cell");
    }
    auto consecutive_in_loop = [&](const Cell& c, int a, int b) {
        const int n = static_cast<int>(c.loop.size());
        for (int i = 0; i < n; ++i) {
            const int p = c.loop[i], q = c.loop[(i + 1) % n];
            if ((p == a && q == b) || (p == b && q == a)) return true;
        }
        return false;
    };
    for (Edge& e : m.edges) {
        m.cells[e.left].edges.push_back({e.id, 1.0});
        if (e.right != kBoundary) {
            m.cells[e.right].edges.push_back({e.id, -1.0});
            e.wrap = !consecutive_in_loop(m.cells[e.right], e.v0, e.v1);
        }
    }
    builder.finalize_geometry();
    return m;
}

}  // namespace advect
