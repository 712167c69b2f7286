#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fsde/fbm.hpp"
#include "fsde/sde.hpp"

namespace fsde {

/// Exact per-cell integrals of the singular kernel (t_k - v)^{2H-2} on a
/// uniform grid. By stationarity the cell value depends only on the lag:
///   I(k, j) = [(t_k - t_j)^{2H-1} - (t_k - t_{j+1})^{2H-1}] / (2H - 1).
class KernelCache {
public:
    KernelCache(const TimeGrid& grid, double H);

    double H() const { return H_; }
    const TimeGrid& grid() const { return grid_; }
    double alpha_H() const { return H_ * (2.0 * H_ - 1.0); }

    /// I(k, j) for a v-cell [t_j, t_{j+1}] with j < k.
    double cell(std::size_t k, std::size_t j) const { return lag_[k - j]; }

    /// Closed-form row sum: sum_{j<k} I(k,j) = t_k^{2H-1} / (2H-1).
    double row_sum_exact(std::size_t k) const;

private:
    TimeGrid grid_;
    double H_;
    std::vector<double> lag_;  // lag_[d] = I(k, k-d), d >= 1
};

/// Left-endpoint Riemann sum sum_k integrand[k] (w[k+1] - w[k]).
double young_integral(const std::vector<double>& integrand, const std::vector<double>& w);

/// Inner correction weights shared by every basis function:
///   weight[k] = d(t_k) * sum_{j<k} I(k,j) / d(t_j),  d = X_high - X_low.
/// Reused by skorokhod_surrogate across phi.
std::vector<double> surrogate_weights(const CoupledPaths& coupled, const KernelCache& cache);

/// Computable approximation of the Skorokhod integral int phi(X) dX^Skorokhod:
/// pathwise Young term minus the trace correction built from the coupled flow
/// difference ratio and the exact kernel cells.
double skorokhod_surrogate(const CoupledPaths& coupled, const std::function<double(double)>& phi,
                           const std::function<double(double)>& phi_prime, double sigma,
                           const KernelCache& cache);

/// Same with precomputed weights (path loop hoisted out of the basis loop).
double skorokhod_surrogate(const SdePath& X_low, const std::vector<double>& weights,
                           const std::function<double(double)>& phi,
                           const std::function<double(double)>& phi_prime, double sigma,
                           const KernelCache& cache);

/// Single-path variant: the flow-difference ratio is replaced by the ratio of
/// time-shifted increments X(. + eps^{1/alpha}) - X(.). The path must extend
/// at least ceil(eps^{1/alpha} / dt) steps beyond the cache horizon.
double skorokhod_surrogate_shift(const SdePath& X_extended,
                                 const std::function<double(double)>& phi,
                                 const std::function<double(double)>& phi_prime, double sigma,
                                 const KernelCache& cache, double alpha, double epsilon);

/// Approximation-error constant of the surrogate bound: m_{H,M}(t).
double surrogate_error_constant(double H, double M, double t);

}  // namespace fsde
