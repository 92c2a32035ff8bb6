#pragma once

#include <array>
#include <span>
#include <vector>

namespace advect {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);
double distance(Vec2 a, Vec2 b);

/// Axis-aligned bounding box; the computational domain.
struct Box {
    double xmin = 0.0;
    double xmax = 1.0;
    double ymin = 0.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double max_extent() const;
    bool contains(Vec2 p, double tol = 0.0) const;
};

/// Signed area by the shoelace formula; positive for counterclockwise loops.
double polygon_area(std::span<const Vec2> poly);
double polygon_perimeter(std::span<const Vec2> poly);
Vec2 polygon_centroid(std::span<const Vec2> poly);
/// Largest vertex-to-vertex distance (equals the diameter for simple polygons).
double polygon_diameter(std::span<const Vec2> poly);

/// Even-odd rule; points on the boundary count as inside.
bool point_in_polygon(Vec2 p, std::span<const Vec2> poly);

/// Sutherland-Hodgman clip of an arbitrary simple polygon against a convex
/// CCW polygon. The output may contain degenerate bridge edges when the true
/// intersection is disconnected; its shoelace area is still the intersection
/// area.
std::vector<Vec2> clip_polygon(std::span<const Vec2> subject,
                               std::span<const Vec2> convex_clip);

/// Ear-clipping triangulation of a simple CCW polygon; returns index triples.
std::vector<std::array<int, 3>> triangulate(std::span<const Vec2> poly);

/// Area of subject ∩ cell where cell is a simple CCW polygon (triangulated
/// internally so non-convex quads are handled).
double intersection_area(std::span<const Vec2> subject,
                         std::span<const Vec2> cell);

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_polygon_boundary(Vec2 p, std::span<const Vec2> poly);

}  // namespace advect
