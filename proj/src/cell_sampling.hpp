#pragma once

// Internal sampling/quadrature visitors over cell polygons. Quads go through
// the bilinear chart; anything else is triangulated.

#include <vector>

#include "advect/geometry.hpp"
#include "advect/quadrature.hpp"

namespace advect::detail {

inline Vec2 bilinear_point(const std::vector<Vec2>& q, double xi, double eta) {
    return (1.0 - xi) * (1.0 - eta) * q[0] + xi * (1.0 - eta) * q[1] +
           xi * eta * q[2] + (1.0 - xi) * eta * q[3];
}

/// Tensor midpoint samples with weights summing to cell_area: k^2 equal
/// weights for quads, area-balanced triangle midpoints otherwise.
template <class Fn>
void visit_cell_midpoints(const std::vector<Vec2>& poly, int k, double cell_area,
                          Fn&& fn) {
    if (poly.size() == 4) {
        const double w = cell_area / (static_cast<double>(k) * k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                fn(bilinear_point(poly, (i + 0.5) / k, (j + 0.5) / k), w);
        return;
    }
    for (const auto& t : triangulate(poly)) {
        const Vec2 a = poly[t[0]], b = poly[t[1]], c = poly[t[2]];
        const double area = 0.5 * cross(b - a, c - a);
        const double w = area / (static_cast<double>(k) * k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i + j < k; ++i) {
                fn(a + ((i + 1.0 / 3.0) / k) * (b - a) + ((j + 1.0 / 3.0) / k) * (c - a), w);
                if (i + j < k - 1)
                    fn(a + ((i + 2.0 / 3.0) / k) * (b - a) + ((j + 2.0 / 3.0) / k) * (c - a), w);
            }
    }
}

/// Gauss quadrature with Jacobian weights; sum of weights equals the polygon
/// area (the bilinear/Duffy Jacobians are integrated exactly).
template <class Fn>
void visit_cell_gauss(const std::vector<Vec2>& poly, int order, Fn&& fn) {
    const GaussRule rule = gauss_rule(order);
    if (poly.size() == 4) {
        for (int j = 0; j < rule.n; ++j) {
            const double eta = 0.5 * (1.0 + rule.node[j]);
            for (int i = 0; i < rule.n; ++i) {
                const double xi = 0.5 * (1.0 + rule.node[i]);
                const Vec2 dxi = (1.0 - eta) * (poly[1] - poly[0]) + eta * (poly[2] - poly[3]);
                const Vec2 deta = (1.0 - xi) * (poly[3] - poly[0]) + xi * (poly[2] - poly[1]);
                const double jac = cross(dxi, deta);
                fn(bilinear_point(poly, xi, eta),
                   0.25 * rule.weight[i] * rule.weight[j] * jac);
            }
        }
        return;
    }
    for (const auto& t : triangulate(poly)) {
        const Vec2 a = poly[t[0]], b = poly[t[1]], c = poly[t[2]];
        const double twice_area = cross(b - a, c - a);
        for (int j = 0; j < rule.n; ++j) {
            const double eta = 0.5 * (1.0 + rule.node[j]);
            for (int i = 0; i < rule.n; ++i) {
                const double xi = 0.5 * (1.0 + rule.node[i]);
                const Vec2 p = a + xi * (b - a) + (xi * eta) * (c - b);
                fn(p, 0.25 * rule.weight[i] * rule.weight[j] * xi * twice_area);
            }
        }
    }
}

template <class Fn>
void visit_segment_gauss(Vec2 a, Vec2 b, int order, Fn&& fn) {
    const GaussRule rule = gauss_rule(order);
    const double len = distance(a, b);
    const Vec2 mid = 0.5 * (a + b);
    const Vec2 half = 0.5 * (b - a);
    for (int i = 0; i < rule.n; ++i)
        fn(mid + rule.node[i] * half, 0.5 * rule.weight[i] * len);
}

template <class Fn>
void visit_time_gauss(double t0, double t1, int order, Fn&& fn) {
    const GaussRule rule = gauss_rule(order);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    for (int i = 0; i < rule.n; ++i)
        fn(mid + rule.node[i] * half, half * rule.weight[i]);
}

}  // namespace advect::detail
