#include "fsde/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "fsde/quadrature.hpp"

namespace fsde {

DriftModel make_drift(const std::string& name, const std::vector<double>& params) {
    auto need = [&](std::size_t k) {
        if (params.size() != k)
            throw std::invalid_argument("drift '" + name + "' expects " + std::to_string(k) +
                                        " parameter(s)");
    };
    DriftModel d;
    d.name = name;
    if (name == "linear") {
        need(1);
        const double mu = params[0];
        d.b = [mu](double x) { return mu * x; };
        d.b_prime = [mu](double) { return mu; };
        d.b_second = [](double) { return 0.0; };
        d.m_bound = mu;
        d.M_bound = mu;
        d.b_second_sup = 0.0;
    } else if (name == "damped_sine") {
        need(2);
        const double theta = params[0], a = params[1];
        if (a < 0.0) throw std::invalid_argument("damped_sine amplitude must be >= 0");
        d.b = [theta, a](double x) { return -theta * x + a * std::sin(x); };
        d.b_prime = [theta, a](double x) { return -theta + a * std::cos(x); };
        d.b_second = [a](double x) { return -a * std::sin(x); };
        d.m_bound = -theta - a;
        d.M_bound = -theta + a;
        d.b_second_sup = a;
    } else if (name == "shifted_tanh") {
        need(2);
        const double theta = params[0], a = params[1];
        if (a < 0.0) throw std::invalid_argument("shifted_tanh amplitude must be >= 0");
        d.b = [theta, a](double x) { return -theta * x + a * std::tanh(x); };
        d.b_prime = [theta, a](double x) {
            const double c = std::cosh(x);
            return -theta + a / (c * c);
        };
        d.b_second = [a](double x) {
            const double c = std::cosh(x);
            return -2.0 * a * std::tanh(x) / (c * c);
        };
        d.m_bound = -theta;
        d.M_bound = -theta + a;
        // sup of 2a sech^2(x) |tanh(x)| is 4a/(3 sqrt(3)).
        d.b_second_sup = 4.0 * a / (3.0 * std::sqrt(3.0));
    } else if (name == "zero") {
        need(0);
        d.b = [](double) { return 0.0; };
        d.b_prime = [](double) { return 0.0; };
        d.b_second = [](double) { return 0.0; };
    } else {
        throw std::invalid_argument("unknown drift model '" + name + "'");
    }
    return d;
}

SdePath euler_solve(const SdeConfig& config, const FbmPath& noise) {
    if (!(noise.grid == config.grid)) throw std::invalid_argument("noise grid mismatch");
    if (noise.H != config.H) throw std::invalid_argument("noise Hurst index mismatch");
    const std::size_t n = config.grid.n;
    const double dt = config.grid.dt();

    SdePath path;
    path.grid = config.grid;
    path.values.resize(n + 1);
    path.values[0] = config.x0;
    for (std::size_t k = 0; k < n; ++k) {
        path.values[k + 1] = path.values[k] + config.drift.b(path.values[k]) * dt +
                             config.sigma * (noise.values[k + 1] - noise.values[k]);
    }
    return path;
}

CoupledPaths coupled_solve(const SdeConfig& config, double epsilon, const FbmPath& noise) {
    if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
    CoupledPaths coupled;
    coupled.epsilon = epsilon;
    coupled.noise = noise;
    coupled.X_low = euler_solve(config, noise);
    SdeConfig high = config;
    high.x0 = config.x0 + epsilon;
    coupled.X_high = euler_solve(high, noise);
    for (std::size_t k = 0; k < coupled.X_low.values.size(); ++k) {
        if (!(coupled.X_high.values[k] > coupled.X_low.values[k]))
            throw std::runtime_error("coupled solve: flow order violated at grid index " +
                                     std::to_string(k));
    }
    return coupled;
}

SdePath flow_derivative(const SdeConfig& config, const SdePath& X) {
    const std::size_t n = X.grid.n;
    const double dt = X.grid.dt();
    SdePath out;
    out.grid = X.grid;
    out.values.resize(n + 1);
    double integral = 0.0;
    out.values[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        integral += 0.5 * dt * (config.drift.b_prime(X.values[k]) +
                                config.drift.b_prime(X.values[k + 1]));
        out.values[k + 1] = std::exp(integral);
    }
    return out;
}

double ou_variance(double mu, double t, double H, double sigma) {
    if (t < 0.0) throw std::domain_error("time must be nonnegative");
    if (t == 0.0) return 0.0;
    const double alpha_H = H * (2.0 * H - 1.0);
    const double p = 2.0 * H - 2.0;  // integrable singularity, p in (-1, 0)

    // Inner integral G(u) = int_0^u w^p e^{mu w} dw: exact kernel integration
    // per cell with the exponential frozen at the cell midpoint.
    const std::size_t inner_cells = 256;
    auto inner = [&](double u) {
        const double h = u / static_cast<double>(inner_cells);
        double acc = 0.0;
        for (std::size_t j = 0; j < inner_cells; ++j) {
            const double a = static_cast<double>(j) * h;
            const double b = a + h;
            const double cell = (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
            acc += cell * std::exp(mu * 0.5 * (a + b));
        }
        return acc;
    };

    // Outer integral 2 int_0^t e^{2 mu (t-u)} G(u) du on panels graded
    // geometrically toward u = 0 where the integrand behaves like u^{2H-1}.
    static const QuadratureRule rule = gauss_legendre(12);
    double total = 0.0;
    double hi = t;
    for (int panel = 0; panel < 48; ++panel) {
        const double lo = panel == 47 ? 0.0 : hi * 0.5;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double u = mid + half * rule.nodes[q];
            total += half * rule.weights[q] * std::exp(2.0 * mu * (t - u)) * inner(u);
        }
        hi = lo;
        if (hi == 0.0) break;
    }
    return 2.0 * alpha_H * sigma * sigma * total;
}

}  // namespace fsde
