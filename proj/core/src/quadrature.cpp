// SPDX-License-Identifier: Apache-2.0
#include "nvsil/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nvsil {

QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: need at least one node");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("gauss_legendre: interval must be finite");

    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    const double mid = 0.5 * (b + a);
    const double half = 0.5 * (b - a);
    const double nd = static_cast<double>(n);

    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n from the Tricomi initial guess
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t j = 2; j <= n; ++j) {
                const double jd = static_cast<double>(j);
                const double p2 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p0) / jd;
                p0 = p1;
                p1 = p2;
            }
            dp = nd * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) < 1e-15)
                break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

} // namespace nvsil
