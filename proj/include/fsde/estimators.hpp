#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "fsde/basis.hpp"
#include "fsde/sde.hpp"

namespace fsde {

/// Empirical Gram matrix of the basis along the observed paths,
/// entries (1/(NT)) sum_i int_0^T phi_j(X^i) phi_k(X^i) ds.
struct GramMatrix {
    Eigen::MatrixXd psi;
    std::size_t N = 0;
    double T = 0.0;
};

/// Least-squares fit with its stability diagnostics. When the truncation
/// event fails the estimator is the zero function and `truncated` is set.
struct FitResult {
    std::vector<double> coeffs;
    bool truncated = false;
    double opnorm_inv = 0.0;  // ||Psi^{-1}||_op, +inf when singular
    double L_m = 0.0;
    double kappa = 0.0;
    BasisSpec basis;
    std::size_t N = 0;
    double T = 0.0;

    double evaluate(double x) const;
};

/// Antiderivative of a derivative fit, pinned to anchor_value at anchor_point.
struct AnchoredPrimitive {
    double anchor_point = 0.0;
    double anchor_value = 0.0;
    FitResult derivative_fit;

    double evaluate(double x) const;
};

GramMatrix gram(const std::vector<SdePath>& paths, const BasisSpec& basis);

/// Stability constant c_{kappa,T} = (3 log(3/2) - 1) / ((7 + kappa) T).
double truncation_constant(double kappa, double T);

/// True iff L(m) (||Psi^{-1}||_op v 1) <= c_{kappa,T} NT / log(NT).
/// Singular matrices (lambda_min <= 1e-13 lambda_max) map to false.
bool truncation_event(const GramMatrix& gram, double L_m, double kappa, std::size_t N, double T);

/// Drift estimator from Skorokhod surrogates of the coupled observations.
FitResult fit_drift(const std::vector<CoupledPaths>& coupled_set, const BasisSpec& basis,
                    double sigma, double H, double kappa);

/// Derivative estimator from the log-flow-difference observations
/// Y(t) = log((X_high(t) - X_low(t)) / epsilon); truncation uses kappa = 0.
FitResult fit_drift_derivative(const std::vector<CoupledPaths>& coupled_set,
                               const BasisSpec& basis);

/// Integrates a trigonometric derivative fit in closed form. Hermite fits are
/// rejected: the primitive construction needs a compact support.
AnchoredPrimitive primitive_from_derivative(const FitResult& fit, double anchor_point,
                                            double anchor_value);

/// Initial-condition gap epsilon_{N,T} = (NT)^{-1/2} (NT / log(NT))^{-1}.
double epsilon_rule(std::size_t N, double T);

/// Bias-variance balancing dimension; trig results are odd-adjusted downward.
std::size_t m_opt(BasisKind kind, std::size_t N, double T, double H, double smoothness,
                  double kappa);

/// Writes `j,theta_j` rows plus a metadata sidecar `<filename>.meta`.
void write_fit_csv(const std::string& filename, const FitResult& fit, double epsilon,
                   std::uint64_t seed);

}  // namespace fsde
