#include "advect/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advect {

InitialData InitialData::indicator(std::vector<std::vector<Vec2>> polygons) {
    for (const auto& poly : polygons) {
        if (poly.size() < 3)
            throw std::invalid_argument("indicator polygon needs >= 3 vertices");
        if (polygon_area(poly) <= 0.0)
            throw std::invalid_argument("indicator polygons must be CCW and non-degenerate");
    }
    InitialData d;
    d.payload_ = IndicatorData{std::move(polygons)};
    return d;
}

InitialData InitialData::indicator_box(const Box& b) {
    return indicator({{{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}}});
}

InitialData InitialData::piecewise(int nx, int ny, const Box& b,
                                   std::vector<double> values) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("piecewise data: nx, ny must be >= 1");
    if (values.size() != static_cast<std::size_t>(nx) * ny)
        throw std::invalid_argument("piecewise data: value count must be nx*ny");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("piecewise data: values must be finite");
    InitialData d;
    d.payload_ = PiecewiseConstantData{nx, ny, b, std::move(values)};
    return d;
}

InitialData InitialData::analytic_constant(double c) {
    InitialData d;
    d.payload_ = AnalyticData{AnalyticKind::constant, c, {}, 0.0};
    return d;
}

InitialData InitialData::analytic_gaussian(double peak, Vec2 center, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian data: sigma must be > 0");
    InitialData d;
    d.payload_ = AnalyticData{AnalyticKind::gaussian, peak, center, sigma};
    return d;
}

double InitialData::eval(Vec2 p) const {
    if (const auto* ind = std::get_if<IndicatorData>(&payload_)) {
        for (const auto& poly : ind->polygons)
            if (point_in_polygon(p, poly)) return 1.0;
        return 0.0;
    }
    if (const auto* pc = std::get_if<PiecewiseConstantData>(&payload_)) {
        if (!pc->box.contains(p)) return 0.0;
        int i = static_cast<int>((p.x - pc->box.xmin) / pc->box.width() * pc->nx);
        int j = static_cast<int>((p.y - pc->box.ymin) / pc->box.height() * pc->ny);
        i = std::clamp(i, 0, pc->nx - 1);
        j = std::clamp(j, 0, pc->ny - 1);
        return pc->values[static_cast<std::size_t>(j) * pc->nx + i];
    }
    const auto& an = std::get<AnalyticData>(payload_);
    if (an.kind == AnalyticKind::constant) return an.value;
    const double r2 = dot(p - an.center, p - an.center);
    return an.value * std::exp(-r2 / (2.0 * an.sigma * an.sigma));
}

bool InitialData::is_indicator() const {
    return std::holds_alternative<IndicatorData>(payload_);
}
bool InitialData::is_piecewise() const {
    return std::holds_alternative<PiecewiseConstantData>(payload_);
}
bool InitialData::is_analytic() const {
    return std::holds_alternative<AnalyticData>(payload_);
}
const IndicatorData& InitialData::indicator_data() const {
    return std::get<IndicatorData>(payload_);
}
const PiecewiseConstantData& InitialData::piecewise_data() const {
    return std::get<PiecewiseConstantData>(payload_);
}
const AnalyticData& InitialData::analytic_data() const {
    return std::get<AnalyticData>(payload_);
}

double InitialData::min_value() const {
    if (is_indicator()) return 0.0;
    if (const auto* pc = std::get_if<PiecewiseConstantData>(&payload_))
        return std::min(0.0, *std::min_element(pc->values.begin(), pc->values.end()));
    const auto& an = analytic_data();
    return std::min(0.0, an.value);
}

double InitialData::max_value() const {
    if (is_indicator()) return 1.0;
    if (const auto* pc = std::get_if<PiecewiseConstantData>(&payload_))
        return std::max(0.0, *std::max_element(pc->values.begin(), pc->values.end()));
    const auto& an = analytic_data();
    return std::max(0.0, an.value);
}

}  // namespace advect
