#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fsde/fbm.hpp"

namespace fsde {

/// Scalar drift with certified derivative bounds m_bound <= b' <= M_bound
/// and |b''| <= b_second_sup.
struct DriftModel {
    std::string name;
    std::function<double(double)> b;
    std::function<double(double)> b_prime;
    std::function<double(double)> b_second;
    double m_bound = 0.0;
    double M_bound = 0.0;
    double b_second_sup = 0.0;
};

/// Built-in registry: "linear" (mu x), "damped_sine" (-theta x + a sin x),
/// "shifted_tanh" (-theta x + a tanh x), "zero".
DriftModel make_drift(const std::string& name, const std::vector<double>& params);

struct SdeConfig {
    DriftModel drift;
    double x0 = 1.0;
    double sigma = 1.0;
    TimeGrid grid;
    double H = 0.75;
};

struct SdePath {
    TimeGrid grid;
    std::vector<double> values;
};

/// Two solutions from x0 and x0 + epsilon driven by the same noise.
struct CoupledPaths {
    SdePath X_low;
    SdePath X_high;
    double epsilon = 0.0;
    FbmPath noise;
};

/// Explicit Euler with left-endpoint drift; noise enters additively.
SdePath euler_solve(const SdeConfig& config, const FbmPath& noise);

/// Solves from x0 and x0 + epsilon on the identical noise. Throws if the
/// order X_high > X_low is violated at any grid point.
CoupledPaths coupled_solve(const SdeConfig& config, double epsilon, const FbmPath& noise);

/// Exact flow derivative d/dx0 X(t) = exp(int_0^t b'(X(s)) ds), trapezoid rule.
SdePath flow_derivative(const SdeConfig& config, const SdePath& X);

/// Variance kernel of the fractional Ornstein-Uhlenbeck process:
/// alpha_H sigma^2 int_0^t int_0^t |v-u|^{2H-2} e^{mu(2t-v-u)} du dv.
/// Reduces exactly to sigma^2 t^{2H} at mu = 0.
double ou_variance(double mu, double t, double H, double sigma);

}  // namespace fsde
