#pragma once

#include <cstddef>
#include <vector>

namespace fsde {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], computed by Golub-Welsch.
QuadratureRule gauss_legendre(std::size_t n);

/// Gauss-Hermite rule for the weight e^{-x^2} on the real line.
QuadratureRule gauss_hermite(std::size_t n);

}  // namespace fsde
