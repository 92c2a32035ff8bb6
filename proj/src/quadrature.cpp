#include "advect/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace advect {

GaussRule gauss_rule(int n) {
    GaussRule r{};
    r.n = n;
    switch (n) {
        case 1:
            r.node = {0.0};
            r.weight = {2.0};
            break;
        case 2: {
            const double x = 1.0 / std::sqrt(3.0);
            r.node = {-x, x};
            r.weight = {1.0, 1.0};
            break;
        }
        case 3: {
            const double x = std::sqrt(3.0 / 5.0);
            r.node = {-x, 0.0, x};
            r.weight = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        }
        case 4: {
            const double x1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double x2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
            const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
            r.node = {-x2, -x1, x1, x2};
            r.weight = {w2, w1, w1, w2};
            break;
        }
        case 5: {
            const double x1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
            const double x2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
            const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
            const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
            r.node = {-x2, -x1, 0.0, x1, x2};
            r.weight = {w2, w1, 128.0 / 225.0, w1, w2};
            break;
        }
        default:
            throw std::invalid_argument("gauss_rule: supported orders are 1..5");
    }
    return r;
}

}  // namespace advect
