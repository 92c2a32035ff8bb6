#pragma once

#include <array>

namespace advect {

/// Gauss-Legendre nodes on [-1,1]; weights sum to 2. Orders 1..5.
struct GaussRule {
    std::array<double, 5> node{};
    std::array<double, 5> weight{};
    int n = 1;
};

GaussRule gauss_rule(int n);

}  // namespace advect
