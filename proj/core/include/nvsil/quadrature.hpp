// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace nvsil {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b]. Nodes are ascending.
/// Throws std::invalid_argument for n == 0 or a non-finite interval.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

} // namespace nvsil
