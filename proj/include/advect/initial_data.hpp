#pragma once

#include <variant>
#include <vector>

#include "advect/geometry.hpp"

namespace advect {

/// u0 = 1_A for A a union of pairwise disjoint simple polygons.
struct IndicatorData {
    std::vector<std::vector<Vec2>> polygons;
};

/// Piecewise constant on an auxiliary cartesian grid (row-major values);
/// zero outside the grid box.
struct PiecewiseConstantData {
    int nx = 1;
    int ny = 1;
    Box box;
    std::vector<double> values;
};

enum class AnalyticKind { constant, gaussian };

struct AnalyticData {
    AnalyticKind kind = AnalyticKind::constant;
    double value = 1.0;  // constant level / gaussian peak
    Vec2 center;
    double sigma = 0.1;
};

class InitialData {
  public:
    static InitialData indicator(std::vector<std::vector<Vec2>> polygons);
    static InitialData indicator_box(const Box& b);
    static InitialData piecewise(int nx, int ny, const Box& b,
                                 std::vector<double> values);
    static InitialData analytic_constant(double c);
    static InitialData analytic_gaussian(double peak, Vec2 center, double sigma);

    double eval(Vec2 p) const;

    bool is_indicator() const;
    bool is_piecewise() const;
    bool is_analytic() const;
    const IndicatorData& indicator_data() const;
    const PiecewiseConstantData& piecewise_data() const;
    const AnalyticData& analytic_data() const;

    /// Extremes of the data values (indicator: {0,1}).
    double min_value() const;
    double max_value() const;

  private:
    std::variant<IndicatorData, PiecewiseConstantData, AnalyticData> payload_;
};

}  // namespace advect
