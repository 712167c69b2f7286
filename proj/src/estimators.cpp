#include "fsde/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fsde/integrals.hpp"

namespace fsde {

namespace {

constexpr double singular_ratio = 1e-13;

struct Eigendecomposition {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    double opnorm_inv = 0.0;
    bool singular = false;
};

Eigendecomposition decompose(const Eigen::MatrixXd& psi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(psi);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Gram eigensolve failed");
    Eigendecomposition d;
    d.values = solver.eigenvalues();
    d.vectors = solver.eigenvectors();
    const double lam_min = d.values(0);
    const double lam_max = d.values(d.values.size() - 1);
    if (lam_min <= singular_ratio * std::max(lam_max, 0.0)) {
        d.singular = true;
        d.opnorm_inv = std::numeric_limits<double>::infinity();
    } else {
        d.opnorm_inv = 1.0 / lam_min;
    }
    return d;
}

bool event_holds(double L_m, double opnorm_inv, double kappa, std::size_t N, double T) {
    const double NT = static_cast<double>(N) * T;
    if (!(NT > 1.0)) throw std::domain_error("truncation event needs NT > 1");
    return L_m * std::max(opnorm_inv, 1.0) <= truncation_constant(kappa, T) * NT / std::log(NT);
}

// Basis values along a path, row k = phi(X(t_k)); optionally derivatives too.
Eigen::MatrixXd basis_along_path(const BasisSpec& basis, const std::vector<double>& values,
                                 bool derivative) {
    Eigen::MatrixXd out(values.size(), basis.m);
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto phi = derivative ? eval_basis_deriv(basis, values[k]) : eval_basis(basis, values[k]);
        for (std::size_t j = 0; j < basis.m; ++j) out(k, j) = phi[j];
    }
    return out;
}

// Shared tail of both fits: apply the truncation rule, then solve Psi theta = rhs
// reusing the eigendecomposition computed for the stability check.
FitResult solve_with_truncation(const GramMatrix& gm, const Eigen::VectorXd& rhs,
                                const BasisSpec& basis, double kappa) {
    FitResult fit;
    fit.basis = basis;
    fit.kappa = kappa;
    fit.N = gm.N;
    fit.T = gm.T;
    fit.L_m = stability_quantities(basis).L;
    fit.coeffs.assign(basis.m, 0.0);

    const auto eig = decompose(gm.psi);
    fit.opnorm_inv = eig.opnorm_inv;
    if (!event_holds(fit.L_m, fit.opnorm_inv, kappa, gm.N, gm.T)) {
        fit.truncated = true;
        return fit;
    }
    if (eig.singular)
        throw std::runtime_error("internal inconsistency: truncation passed on singular Gram");
    Eigen::VectorXd theta =
        eig.vectors * (eig.values.cwiseInverse().asDiagonal() * (eig.vectors.transpose() * rhs));
    for (std::size_t j = 0; j < basis.m; ++j) fit.coeffs[j] = theta(j);
    return fit;
}

void check_coupled_set(const std::vector<CoupledPaths>& set) {
    if (set.empty()) throw std::invalid_argument("need at least one coupled path");
    for (const auto& c : set) {
        if (!(c.X_low.grid == set.front().X_low.grid))
            throw std::invalid_argument("coupled paths must share a common grid");
        if (c.epsilon != set.front().epsilon)
            throw std::invalid_argument("coupled paths must share epsilon");
    }
}

}  // namespace

double FitResult::evaluate(double x) const {
    const auto phi = eval_basis(basis, x);
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * phi[j];
    return acc;
}

GramMatrix gram(const std::vector<SdePath>& paths, const BasisSpec& basis) {
    if (paths.empty()) throw std::invalid_argument("need at least one path");
    const TimeGrid& grid = paths.front().grid;
    const double dt = grid.dt();
    const std::size_t n = grid.n;
    const auto m = static_cast<Eigen::Index>(basis.m);

    GramMatrix gm;
    gm.N = paths.size();
    gm.T = grid.T;
    gm.psi = Eigen::MatrixXd::Zero(m, m);

    Eigen::VectorXd phi(m);
    for (const auto& path : paths) {
        if (!(path.grid == grid)) throw std::invalid_argument("paths must share a common grid");
        for (std::size_t k = 0; k <= n; ++k) {
            const auto vals = eval_basis(basis, path.values[k]);
            for (Eigen::Index j = 0; j < m; ++j) phi(j) = vals[j];
            const double w = (k == 0 || k == n) ? 0.5 * dt : dt;  // trapezoid
            gm.psi.selfadjointView<Eigen::Lower>().rankUpdate(phi, w);
        }
    }
    gm.psi = gm.psi.selfadjointView<Eigen::Lower>();
    gm.psi /= static_cast<double>(gm.N) * gm.T;
    return gm;
}

double truncation_constant(double kappa, double T) {
    if (kappa < 0.0) throw std::domain_error("kappa must be >= 0");
    if (!(T > 0.0)) throw std::domain_error("T must be positive");
    return (3.0 * std::log(1.5) - 1.0) / ((7.0 + kappa) * T);
}

bool truncation_event(const GramMatrix& gm, double L_m, double kappa, std::size_t N, double T) {
    return event_holds(L_m, decompose(gm.psi).opnorm_inv, kappa, N, T);
}

FitResult fit_drift(const std::vector<CoupledPaths>& coupled_set, const BasisSpec& basis,
                    double sigma, double H, double kappa) {
    check_coupled_set(coupled_set);
    const TimeGrid& grid = coupled_set.front().X_low.grid;
    const std::size_t n = grid.n;
    const double dt = grid.dt();
    const double NT = static_cast<double>(coupled_set.size()) * grid.T;
    const KernelCache cache(grid, H);

    std::vector<SdePath> lows;
    lows.reserve(coupled_set.size());
    for (const auto& c : coupled_set) lows.push_back(c.X_low);
    GramMatrix gm = gram(lows, basis);

    Eigen::VectorXd design = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.m));
    for (const auto& coupled : coupled_set) {
        const auto& x = coupled.X_low.values;
        const auto weights = surrogate_weights(coupled, cache);
        const auto phi = basis_along_path(basis, x, false);
        const auto dphi = basis_along_path(basis, x, true);
        for (std::size_t j = 0; j < basis.m; ++j) {
            double young = 0.0, correction = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                young += phi(k, j) * (x[k + 1] - x[k]);
                correction += dphi(k, j) * weights[k];
            }
            design(static_cast<Eigen::Index>(j)) +=
                young - cache.alpha_H() * sigma * sigma * dt * correction;
        }
    }
    design /= NT;
    return solve_with_truncation(gm, design, basis, kappa);
}

FitResult fit_drift_derivative(const std::vector<CoupledPaths>& coupled_set,
                               const BasisSpec& basis) {
    check_coupled_set(coupled_set);
    const TimeGrid& grid = coupled_set.front().X_low.grid;
    const std::size_t n = grid.n;
    const double NT = static_cast<double>(coupled_set.size()) * grid.T;

    std::vector<SdePath> lows;
    lows.reserve(coupled_set.size());
    for (const auto& c : coupled_set) lows.push_back(c.X_low);
    GramMatrix gm = gram(lows, basis);

    Eigen::VectorXd design = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.m));
    std::vector<double> logdiff(n + 1);
    for (const auto& coupled : coupled_set) {
        const auto& x = coupled.X_low.values;
        for (std::size_t k = 0; k <= n; ++k) {
            const double d = coupled.X_high.values[k] - x[k];
            if (!(d > 0.0))
                throw std::runtime_error("nonpositive flow difference at grid index " +
                                         std::to_string(k));
            logdiff[k] = std::log(d / coupled.epsilon);
        }
        const auto phi = basis_along_path(basis, x, false);
        for (std::size_t j = 0; j < basis.m; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += phi(k, j) * (logdiff[k + 1] - logdiff[k]);
            design(static_cast<Eigen::Index>(j)) += acc;
        }
    }
    design /= NT;
    return solve_with_truncation(gm, design, basis, 0.0);
}

AnchoredPrimitive primitive_from_derivative(const FitResult& fit, double anchor_point,
                                            double anchor_value) {
    if (fit.basis.kind != BasisKind::trigonometric)
        throw std::invalid_argument("primitive requires a compactly supported (trig) basis");
    AnchoredPrimitive prim;
    prim.anchor_point = anchor_point;
    prim.anchor_value = anchor_value;
    prim.derivative_fit = fit;
    return prim;
}

double AnchoredPrimitive::evaluate(double x) const {
    const BasisSpec& basis = derivative_fit.basis;
    const double l = basis.left, r = basis.right;
    const double width = r - l;
    const double norm = std::sqrt(2.0 / width);

    // F(x) = int_l^x sum theta_j phi_j, closed form per basis function;
    // the integrand vanishes outside [l, r], so clamp the endpoint.
    auto antiderivative = [&](double point) {
        const double y = std::clamp(point, l, r);
        double acc = derivative_fit.coeffs[0] * (y - l) / std::sqrt(width);
        for (std::size_t j = 1; 2 * j < basis.m; ++j) {
            const double omega = 2.0 * std::numbers::pi * static_cast<double>(j) / width;
            const double arg = omega * (y - l);
            acc += derivative_fit.coeffs[2 * j - 1] * norm * (1.0 - std::cos(arg)) / omega;
            acc += derivative_fit.coeffs[2 * j] * norm * std::sin(arg) / omega;
        }
        return acc;
    };
    return anchor_value + antiderivative(x) - antiderivative(anchor_point);
}

double epsilon_rule(std::size_t N, double T) {
    const double NT = static_cast<double>(N) * T;
    if (!(NT > std::numbers::e)) throw std::domain_error("epsilon rule needs NT > e");
    return std::log(NT) / (std::sqrt(NT) * NT);
}

std::size_t m_opt(BasisKind kind, std::size_t N, double T, double H, double smoothness,
                  double kappa) {
    if (!(smoothness > 0.0)) throw std::domain_error("smoothness must be positive");
    const double base = static_cast<double>(N) * std::pow(T, 2.0 - 2.0 * H);
    double exponent;
    if (kind == BasisKind::trigonometric)
        exponent = 1.0 / (2.0 * smoothness + 3.0);
    else
        exponent = 1.0 / (smoothness + 1.5 + kappa / 2.0);
    auto m = static_cast<std::size_t>(std::floor(std::pow(base, exponent)));
    if (m < 1) m = 1;
    if (kind == BasisKind::trigonometric && m % 2 == 0) m -= 1;
    return m;
}

void write_fit_csv(const std::string& filename, const FitResult& fit, double epsilon,
                   std::uint64_t seed) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out.precision(17);
    out << "j,theta_j\n";
    for (std::size_t j = 0; j < fit.coeffs.size(); ++j) out << j << "," << fit.coeffs[j] << "\n";

    std::ofstream meta(filename + ".meta");
    if (!meta) throw std::runtime_error("cannot open " + filename + ".meta");
    meta.precision(17);
    meta << "basis = " << fit.basis.to_string() << "\n"
         << "truncated = " << (fit.truncated ? "true" : "false") << "\n"
         << "opnorm_inv = " << fit.opnorm_inv << "\n"
         << "L_m = " << fit.L_m << "\n"
         << "kappa = " << fit.kappa << "\n"
         << "N = " << fit.N << "\n"
         << "T = " << fit.T << "\n"
         << "epsilon = " << epsilon << "\n"
         << "seed = " << seed << "\n";
}

}  // namespace fsde
