#include "advect/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace advect {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

double Box::max_extent() const { return std::max(width(), height()); }

bool Box::contains(Vec2 p, double tol) const {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol &&
           p.y <= ymax + tol;
}

double polygon_area(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

double polygon_perimeter(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i) p += distance(poly[i], poly[(i + 1) % n]);
    return p;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    double cx = 0.0, cy = 0.0, twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double w = cross(a, b);
        twice += w;
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    if (twice == 0.0) return poly.empty() ? Vec2{} : poly[0];
    return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double polygon_diameter(std::span<const Vec2> poly) {
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, distance(poly[i], poly[j]));
    return d;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[j];
        const Vec2 b = poly[i];
        // on-segment check so boundary points count as inside
        const double c = cross(b - a, p - a);
        if (c == 0.0 && dot(p - a, p - b) <= 0.0) return true;
        if ((b.y > p.y) != (a.y > p.y)) {
            const double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

std::vector<Vec2> clip_polygon(std::span<const Vec2> subject,
                               std::span<const Vec2> convex_clip) {
    std::vector<Vec2> output(subject.begin(), subject.end());
    const std::size_t m = convex_clip.size();
    for (std::size_t e = 0; e < m && !output.empty(); ++e) {
        const Vec2 a = convex_clip[e];
        const Vec2 b = convex_clip[(e + 1) % m];
        const Vec2 dir = b - a;
        std::vector<Vec2> input;
        input.swap(output);
        const std::size_t n = input.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 p = input[i];
            const Vec2 q = input[(i + 1) % n];
            const double sp = cross(dir, p - a);
            const double sq = cross(dir, q - a);
            const bool pin = sp >= 0.0;
            const bool qin = sq >= 0.0;
            if (pin) output.push_back(p);
            if (pin != qin) {
                const double t = sp / (sp - sq);
                output.push_back(p + t * (q - p));
            }
        }
    }
    return output;
}

namespace {

bool triangle_contains(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
    const double d1 = cross(b - a, p - a);
    const double d2 = cross(c - b, p - b);
    const double d3 = cross(a - c, p - c);
    return d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
}

}  // namespace

std::vector<std::array<int, 3>> triangulate(std::span<const Vec2> poly) {
    const int n = static_cast<int>(poly.size());
    if (n < 3) throw std::invalid_argument("triangulate: fewer than 3 vertices");
    std::vector<std::array<int, 3>> tris;
    if (n == 3) {
        tris.push_back({0, 1, 2});
        return tris;
    }
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;

    // ear clipping; input must be simple and CCW
    int guard = 0;
    while (idx.size() > 3) {
        const int m = static_cast<int>(idx.size());
        bool clipped = false;
        for (int i = 0; i < m; ++i) {
            const int ip = idx[(i + m - 1) % m];
            const int ic = idx[i];
            const int in = idx[(i + 1) % m];
            const Vec2 a = poly[ip], b = poly[ic], c = poly[in];
            if (cross(b - a, c - b) <= 0.0) continue;  // reflex corner
            bool blocked = false;
            for (int k : idx) {
                if (k == ip || k == ic || k == in) continue;
                if (triangle_contains(a, b, c, poly[k])) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({ip, ic, in});
            idx.erase(idx.begin() + i);
            clipped = true;
            break;
        }
        if (!clipped) {
            if (++guard > 2)
                throw std::invalid_argument("triangulate: polygon not simple/CCW");
            // degenerate collinear corner; drop the flattest vertex and retry
            int drop = 0;
            double best = std::abs(cross(poly[idx[1]] - poly[idx[0]],
                                         poly[idx[2]] - poly[idx[1]]));
            const int m2 = static_cast<int>(idx.size());
            for (int i = 0; i < m2; ++i) {
                const Vec2 a = poly[idx[(i + m2 - 1) % m2]];
                const Vec2 b = poly[idx[i]];
                const Vec2 c = poly[idx[(i + 1) % m2]];
                const double s = std::abs(cross(b - a, c - b));
                if (s < best) {
                    best = s;
                    drop = i;
                }
            }
            idx.erase(idx.begin() + drop);
        }
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

double intersection_area(std::span<const Vec2> subject,
                         std::span<const Vec2> cell) {
    if (cell.size() == 4) {
        // quads: one diagonal always splits a simple quad into two CCW triangles
        const Vec2 v0 = cell[0], v1 = cell[1], v2 = cell[2], v3 = cell[3];
        auto tri_area = [&](Vec2 a, Vec2 b, Vec2 c) {
            const std::array<Vec2, 3> t{a, b, c};
            const auto clipped = clip_polygon(subject, t);
            return clipped.size() < 3 ? 0.0 : std::abs(polygon_area(clipped));
        };
        if (cross(v1 - v0, v2 - v0) > 0.0 && cross(v2 - v0, v3 - v0) > 0.0)
            return tri_area(v0, v1, v2) + tri_area(v0, v2, v3);
        return tri_area(v1, v2, v3) + tri_area(v1, v3, v0);
    }
    double area = 0.0;
    for (const auto& t : triangulate(cell)) {
        const std::array<Vec2, 3> tri{cell[t[0]], cell[t[1]], cell[t[2]]};
        const auto clipped = clip_polygon(subject, tri);
        if (clipped.size() >= 3) area += std::abs(polygon_area(clipped));
    }
    return area;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double distance_to_polygon_boundary(Vec2 p, std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        d = std::min(d, distance_to_segment(p, poly[i], poly[(i + 1) % n]));
    return d;
}

}  // namespace advect
