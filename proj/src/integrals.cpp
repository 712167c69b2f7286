#include "fsde/integrals.hpp"

#include <cmath>
#include <stdexcept>

namespace fsde {

KernelCache::KernelCache(const TimeGrid& grid, double H) : grid_(grid), H_(H) {
    if (!(H > 0.5) || !(H < 1.0)) throw std::domain_error("Hurst index must lie in (1/2, 1)");
    const double q = 2.0 * H - 1.0;
    const double dt = grid.dt();
    lag_.resize(grid.n + 1, 0.0);
    for (std::size_t d = 1; d <= grid.n; ++d) {
        const double dd = static_cast<double>(d);
        lag_[d] = std::pow(dt, q) * (std::pow(dd, q) - std::pow(dd - 1.0, q)) / q;
    }
}

double KernelCache::row_sum_exact(std::size_t k) const {
    const double q = 2.0 * H_ - 1.0;
    return std::pow(grid_.time(k), q) / q;
}

double young_integral(const std::vector<double>& integrand, const std::vector<double>& w) {
    if (integrand.size() != w.size()) throw std::invalid_argument("length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) acc += integrand[k] * (w[k + 1] - w[k]);
    return acc;
}

std::vector<double> surrogate_weights(const CoupledPaths& coupled, const KernelCache& cache) {
    const std::size_t n = cache.grid().n;
    if (coupled.X_low.values.size() < n + 1)
        throw std::invalid_argument("coupled paths shorter than cache grid");
    std::vector<double> diff(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        diff[k] = coupled.X_high.values[k] - coupled.X_low.values[k];
        if (!(diff[k] > 0.0))
            throw std::runtime_error("nonpositive flow difference at grid index " +
                                     std::to_string(k));
    }
    std::vector<double> weights(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double inner = 0.0;
        for (std::size_t j = 0; j < k; ++j) inner += cache.cell(k, j) / diff[j];
        weights[k] = diff[k] * inner;
    }
    return weights;
}

double skorokhod_surrogate(const SdePath& X_low, const std::vector<double>& weights,
                           const std::function<double(double)>& phi,
                           const std::function<double(double)>& phi_prime, double sigma,
                           const KernelCache& cache) {
    const std::size_t n = cache.grid().n;
    const double dt = cache.grid().dt();

    double young = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        young += phi(X_low.values[k]) * (X_low.values[k + 1] - X_low.values[k]);

    double correction = 0.0;
    for (std::size_t k = 1; k < n; ++k)
        correction += phi_prime(X_low.values[k]) * weights[k];

    return young - cache.alpha_H() * sigma * sigma * dt * correction;
}

double skorokhod_surrogate(const CoupledPaths& coupled, const std::function<double(double)>& phi,
                           const std::function<double(double)>& phi_prime, double sigma,
                           const KernelCache& cache) {
    return skorokhod_surrogate(coupled.X_low, surrogate_weights(coupled, cache), phi, phi_prime,
                               sigma, cache);
}

double skorokhod_surrogate_shift(const SdePath& X, const std::function<double(double)>& phi,
                                 const std::function<double(double)>& phi_prime, double sigma,
                                 const KernelCache& cache, double alpha, double epsilon) {
    if (!(alpha > 0.5) || !(alpha < cache.H()))
        throw std::domain_error("Holder exponent alpha must lie in (1/2, H)");
    if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
    const std::size_t n = cache.grid().n;
    const double dt = cache.grid().dt();
    const double eta = std::pow(epsilon, 1.0 / alpha);
    const std::size_t shift = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(eta / dt)));
    if (X.values.size() < n + shift + 1)
        throw std::invalid_argument("path must extend " + std::to_string(shift) +
                                    " steps beyond the cache horizon");

    std::vector<double> incr(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        incr[k] = X.values[k + shift] - X.values[k];
        if (std::abs(incr[k]) <= 1e-14)
            throw std::runtime_error("vanishing shifted increment at grid index " +
                                     std::to_string(k));
    }

    double young = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        young += phi(X.values[k]) * (X.values[k + 1] - X.values[k]);

    double correction = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        double inner = 0.0;
        for (std::size_t j = 0; j < k; ++j) inner += cache.cell(k, j) / incr[j];
        correction += phi_prime(X.values[k]) * incr[k] * inner;
    }
    return young - cache.alpha_H() * sigma * sigma * dt * correction;
}

double surrogate_error_constant(double H, double M, double t) {
    const double q = 2.0 * H - 1.0;
    if (M < 0.0) return 1.0 / (M * M * q);
    if (M > 0.0) return std::exp(2.0 * M * t) / (M * M * q);
    return t * t / (2.0 * H * (2.0 * H + 1.0));
}

}  // namespace fsde
