#include "fsde/fbm.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <stdexcept>

namespace fsde {

namespace {

void check_hurst(double H) {
    if (!(H > 0.5) || !(H < 1.0))
        throw std::domain_error("Hurst index must lie in (1/2, 1)");
}

// Stationary increment autocovariance gamma(k) = Cov(B(t_{j+1})-B(t_j), B(t_{j+k+1})-B(t_{j+k})).
double increment_autocov(std::size_t k, double dt, double H) {
    const double kk = static_cast<double>(k);
    const double a = std::pow(std::abs(kk + 1.0), 2.0 * H);
    const double b = std::pow(std::abs(kk), 2.0 * H);
    const double c = k == 0 ? std::pow(1.0, 2.0 * H) : std::pow(std::abs(kk - 1.0), 2.0 * H);
    return 0.5 * std::pow(dt, 2.0 * H) * (a - 2.0 * b + c);
}

// splitmix64, used to decorrelate consecutive path seeds before feeding mt19937_64.
std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

TimeGrid::TimeGrid(double horizon, std::size_t steps) : T(horizon), n(steps) {
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
    if (steps < 2) throw std::domain_error("grid needs at least 2 steps");
}

double fbm_covariance(double s, double t, double H) {
    check_hurst(H);
    if (s < 0.0 || t < 0.0) throw std::domain_error("times must be nonnegative");
    const double twoH = 2.0 * H;
    return 0.5 * (std::pow(s, twoH) + std::pow(t, twoH) - std::pow(std::abs(t - s), twoH));
}

FbmSampler::FbmSampler(const TimeGrid& grid, double H) : grid_(grid), H_(H) {
    check_hurst(H);
    const std::size_t n = grid.n;
    const std::size_t m = 2 * n;
    const double dt = grid.dt();

    std::vector<double> circ(m);
    for (std::size_t k = 0; k <= n; ++k) circ[k] = increment_autocov(k, dt, H);
    for (std::size_t k = n + 1; k < m; ++k) circ[k] = circ[m - k];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq(m);
    fft.fwd(freq, circ);

    spectrum_.resize(m);
    double max_eig = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        spectrum_[k] = freq[k].real();
        max_eig = std::max(max_eig, spectrum_[k]);
    }

    double worst = 0.0;
    for (double& lam : spectrum_) {
        if (lam < 0.0) {
            if (-lam <= 1e-12 * max_eig) {
                lam = 0.0;
            } else {
                worst = std::min(worst, lam);
            }
        }
    }

    if (worst < 0.0) {
        // Embedding rejected; factor the dense increment covariance instead.
        fallback_ = true;
        Eigen::MatrixXd cov(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                cov(i, j) = increment_autocov(i >= j ? i - j : j - i, dt, H);
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error(
                "fBm sampling failed: circulant eigenvalue " + std::to_string(worst) +
                " and dense Cholesky factorization both rejected");
        Eigen::MatrixXd L = llt.matrixL();
        chol_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) chol_[i * n + j] = L(i, j);
        spectrum_.clear();
    }
}

FbmPath FbmSampler::sample(std::uint64_t seed) const {
    const std::size_t n = grid_.n;
    std::mt19937_64 rng(mix_seed(seed));
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> increments(n);
    if (!fallback_) {
        const std::size_t m = 2 * n;
        std::vector<std::complex<double>> coef(m);
        coef[0] = std::sqrt(spectrum_[0] / static_cast<double>(m)) * gauss(rng);
        coef[n] = std::sqrt(spectrum_[n] / static_cast<double>(m)) * gauss(rng);
        for (std::size_t k = 1; k < n; ++k) {
            const double scale = std::sqrt(spectrum_[k] / (2.0 * static_cast<double>(m)));
            const double u = gauss(rng);
            const double v = gauss(rng);
            coef[k] = std::complex<double>(scale * u, scale * v);
            coef[m - k] = std::conj(coef[k]);
        }
        Eigen::FFT<double> fft;
        std::vector<std::complex<double>> out(m);
        fft.fwd(out, coef);
        for (std::size_t k = 0; k < n; ++k) increments[k] = out[k].real();
    } else {
        std::vector<double> z(n);
        for (double& zi : z) zi = gauss(rng);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += chol_[i * n + j] * z[j];
            increments[i] = acc;
        }
    }

    FbmPath path;
    path.grid = grid_;
    path.H = H_;
    path.seed = seed;
    path.values.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) path.values[k + 1] = path.values[k] + increments[k];
    return path;
}

std::vector<FbmPath> sample_fbm(const TimeGrid& grid, double H, std::uint64_t seed,
                                std::size_t count) {
    if (count < 1) throw std::domain_error("count must be >= 1");
    FbmSampler sampler(grid, H);
    std::vector<FbmPath> paths;
    paths.reserve(count);
    for (std::size_t i = 0; i < count; ++i) paths.push_back(sampler.sample(seed + i));
    return paths;
}

void write_path_csv(const std::string& filename, const TimeGrid& grid,
                    const std::vector<double>& values) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out.precision(17);
    out << "t,value\n";
    for (std::size_t k = 0; k < values.size(); ++k) out << grid.time(k) << "," << values[k] << "\n";
}

}  // namespace fsde
