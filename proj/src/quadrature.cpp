#include "fsde/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace fsde {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first components of the eigenvectors.
QuadratureRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
    const std::size_t n = offdiag.size() + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        J(k, k + 1) = offdiag[k];
        J(k + 1, k) = offdiag[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
    if (solver.info() != Eigen::Success) throw std::runtime_error("quadrature eigensolve failed");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()(k);
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
    if (n < 1) throw std::domain_error("quadrature order must be >= 1");
    std::vector<double> offdiag(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        offdiag[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return golub_welsch(offdiag, 2.0);
}

QuadratureRule gauss_hermite(std::size_t n) {
    if (n < 1) throw std::domain_error("quadrature order must be >= 1");
    std::vector<double> offdiag(n - 1);
    for (std::size_t k = 1; k < n; ++k) offdiag[k - 1] = std::sqrt(static_cast<double>(k) / 2.0);
    QuadratureRule rule = golub_welsch(offdiag, std::sqrt(M_PI));

    // The eigenvector first components lose all relative accuracy at extreme
    // nodes (the true weights underflow toward e^{-x^2}). Recompute the
    // weights from the Christoffel identity w = 1 / sum_j p_j(x)^2 with the
    // orthonormal Hermite polynomials, which the upward recurrence evaluates
    // to full relative precision.
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = rule.nodes[q];
        double prev = 0.0, cur = std::pow(M_PI, -0.25);
        double sum = cur * cur;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double jj = static_cast<double>(j);
            const double next =
                x * std::sqrt(2.0 / (jj + 1.0)) * cur - std::sqrt(jj / (jj + 1.0)) * prev;
            prev = cur;
            cur = next;
            sum += cur * cur;
        }
        rule.weights[q] = 1.0 / sum;
    }
    return rule;
}

}  // namespace fsde
