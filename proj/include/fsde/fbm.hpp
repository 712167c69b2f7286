#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsde {

/// Uniform grid t_k = k T / n on [0, T].
struct TimeGrid {
    double T = 1.0;
    std::size_t n = 2;

    TimeGrid() = default;
    TimeGrid(double horizon, std::size_t steps);

    double dt() const { return T / static_cast<double>(n); }
    double time(std::size_t k) const { return static_cast<double>(k) * T / static_cast<double>(n); }
    std::size_t size() const { return n + 1; }

    bool operator==(const TimeGrid& other) const = default;
};

/// One fractional Brownian motion sample path on a uniform grid.
/// values[0] == 0 always; H is restricted to (1/2, 1).
struct FbmPath {
    TimeGrid grid;
    double H = 0.75;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

/// Covariance of fBm: 0.5 (s^{2H} + t^{2H} - |t - s|^{2H}).
double fbm_covariance(double s, double t, double H);

/// Samples `count` independent fBm paths. Deterministic in (grid, H, seed, count).
/// Uses circulant embedding of the increment covariance; falls back to a dense
/// Cholesky factorization of the full covariance when the embedding is not
/// nonnegative definite.
std::vector<FbmPath> sample_fbm(const TimeGrid& grid, double H, std::uint64_t seed,
                                std::size_t count);

/// Reusable sampler holding the circulant spectrum (or dense factor) for one
/// (grid, H). Immutable after construction; sampling is pure given the seed.
class FbmSampler {
public:
    FbmSampler(const TimeGrid& grid, double H);

    FbmPath sample(std::uint64_t seed) const;
    bool uses_fallback() const { return fallback_; }

private:
    TimeGrid grid_;
    double H_;
    bool fallback_ = false;
    std::vector<double> spectrum_;              // circulant eigenvalues, length 2n
    std::vector<double> chol_;                  // row-major lower factor, n x n, fallback only
};

/// Writes `t,value` rows with 17 significant digits.
void write_path_csv(const std::string& filename, const TimeGrid& grid,
                    const std::vector<double>& values);

}  // namespace fsde
