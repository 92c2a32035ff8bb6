#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "advect/geometry.hpp"

namespace advect {

enum class BoundaryKind { impermeable, periodic };

std::string to_string(BoundaryKind k);
BoundaryKind boundary_kind_from_string(const std::string& s);

/// Marks the outer side of a boundary edge.
inline constexpr int kBoundary = -1;

struct Vertex {
    int id = 0;
    Vec2 pos;
};

/// Oriented mesh edge. The unit normal points from left_cell into right_cell
/// and equals the tangent v0->v1 rotated by -90 degrees, so the flux of a
/// divergence-free field across the edge is the stream-function increment
/// psi(v1) - psi(v0).
struct Edge {
    int id = 0;
    int v0 = 0;
    int v1 = 0;
    int left = kBoundary;
    int right = kBoundary;
    Vec2 normal;
    double length = 0.0;
    /// Periodic identification: geometry stored on the left cell's side.
    bool wrap = false;
};

struct CellEdge {
    int edge = 0;
    /// +1 if the edge normal is outward for this cell, -1 otherwise.
    double sign = 1.0;
};

struct Cell {
    int id = 0;
    std::vector<int> loop;  // CCW vertex ids
    std::vector<CellEdge> edges;
    double area = 0.0;
    double perimeter = 0.0;
    double diameter = 0.0;
    Vec2 centroid;
};

/// Mesh size h and the tightest alpha admissible in the uniformity
/// conditions alpha*h^2 <= |K| and |dK| <= h/alpha.
struct RegularityReport {
    double h = 0.0;
    double alpha = 0.0;
    double min_area = 0.0;
    double max_perimeter = 0.0;
};

class Mesh {
  public:
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Cell> cells;
    Box domain;
    BoundaryKind boundary_kind = BoundaryKind::impermeable;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }

    Vec2 vertex_pos(int v) const { return vertices[v].pos; }
    std::vector<Vec2> cell_polygon(int c) const;
    /// Neighbor of `cell` across `edge`, or kBoundary.
    int neighbor(int cell, int edge) const;
};

Mesh build_cartesian(int nx, int ny, const Box& domain,
                     BoundaryKind boundary = BoundaryKind::impermeable);

/// Cartesian topology with interior vertices displaced by at most
/// magnitude * (min cell side), drawn from a seeded generator so repeated
/// calls are byte-identical. Domain boundary vertices are never moved.
Mesh build_perturbed_cartesian(int nx, int ny, const Box& domain,
                               double magnitude, std::uint64_t seed,
                               BoundaryKind boundary = BoundaryKind::impermeable);

/// Structural validation; throws std::runtime_error naming the offending
/// entity on inverted cells, unpaired interior edges or area-sum mismatch.
RegularityReport validate_mesh(const Mesh& mesh);

/// Plain-text serialization (mesh2d v1), floats at 17 significant digits.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace advect
