#include "fsde/basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fsde {

namespace {

constexpr double pi = std::numbers::pi;

void validate(const BasisSpec& spec) {
    if (spec.m < 1) throw std::domain_error("basis dimension must be >= 1");
    if (spec.kind == BasisKind::trigonometric) {
        if (!(spec.left < spec.right)) throw std::domain_error("basis interval must have l < r");
        if (spec.m % 2 == 0) throw std::domain_error("trigonometric dimension must be odd");
    }
}

// Hermite functions h_0..h_{count-1} by the normalized three-term recurrence;
// stable for all x because the Gaussian factor is kept inside.
std::vector<double> hermite_values(std::size_t count, double x) {
    std::vector<double> h(count);
    h[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    if (count > 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (std::size_t j = 1; j + 1 < count; ++j) {
        const double jj = static_cast<double>(j);
        h[j + 1] = x * std::sqrt(2.0 / (jj + 1.0)) * h[j] - std::sqrt(jj / (jj + 1.0)) * h[j - 1];
    }
    return h;
}

}  // namespace

BasisSpec BasisSpec::trig(double l, double r, std::size_t m) {
    BasisSpec spec{BasisKind::trigonometric, m, l, r};
    validate(spec);
    return spec;
}

BasisSpec BasisSpec::hermite(std::size_t m) {
    BasisSpec spec{BasisKind::hermite, m, 0.0, 0.0};
    validate(spec);
    return spec;
}

BasisSpec BasisSpec::parse(const std::string& text) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw std::invalid_argument("cannot parse basis '" + text + "'");
    const std::string kind = text.substr(0, open);
    std::string args = text.substr(open + 1, close - open - 1);
    for (char& c : args)
        if (c == ',') c = ' ';
    std::istringstream in(args);
    if (kind == "trig") {
        double l, r;
        std::size_t m;
        if (!(in >> l >> r >> m)) throw std::invalid_argument("trig basis expects (l,r,m)");
        return trig(l, r, m);
    }
    if (kind == "hermite") {
        std::size_t m;
        if (!(in >> m)) throw std::invalid_argument("hermite basis expects (m)");
        return hermite(m);
    }
    throw std::invalid_argument("unknown basis kind '" + kind + "'");
}

std::string BasisSpec::to_string() const {
    std::ostringstream out;
    if (kind == BasisKind::trigonometric)
        out << "trig(" << left << "," << right << "," << m << ")";
    else
        out << "hermite(" << m << ")";
    return out.str();
}

std::vector<double> eval_basis(const BasisSpec& spec, double x) {
    validate(spec);
    if (spec.kind == BasisKind::hermite) return hermite_values(spec.m, x);

    std::vector<double> phi(spec.m, 0.0);
    if (x < spec.left || x > spec.right) return phi;
    const double width = spec.right - spec.left;
    const double norm = std::sqrt(2.0 / width);
    phi[0] = 1.0 / std::sqrt(width);
    for (std::size_t j = 1; 2 * j < spec.m; ++j) {
        const double arg = 2.0 * pi * static_cast<double>(j) * (x - spec.left) / width;
        phi[2 * j - 1] = norm * std::sin(arg);
        phi[2 * j] = norm * std::cos(arg);
    }
    return phi;
}

std::vector<double> eval_basis_deriv(const BasisSpec& spec, double x) {
    validate(spec);
    if (spec.kind == BasisKind::hermite) {
        const auto h = hermite_values(spec.m + 1, x);
        std::vector<double> dh(spec.m);
        dh[0] = -std::sqrt(0.5) * h[1];
        for (std::size_t j = 1; j < spec.m; ++j) {
            const double jj = static_cast<double>(j);
            dh[j] = std::sqrt(jj / 2.0) * h[j - 1] - std::sqrt((jj + 1.0) / 2.0) * h[j + 1];
        }
        return dh;
    }

    std::vector<double> dphi(spec.m, 0.0);
    if (x < spec.left || x > spec.right) return dphi;
    const double width = spec.right - spec.left;
    const double norm = std::sqrt(2.0 / width);
    for (std::size_t j = 1; 2 * j < spec.m; ++j) {
        const double omega = 2.0 * pi * static_cast<double>(j) / width;
        const double arg = omega * (x - spec.left);
        dphi[2 * j - 1] = norm * omega * std::cos(arg);
        dphi[2 * j] = -norm * omega * std::sin(arg);
    }
    return dphi;
}

std::vector<double> default_probe_grid(std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = -12.0 + 24.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

StabilityQuantities stability_quantities(const BasisSpec& spec,
                                         const std::vector<double>& probe_grid) {
    validate(spec);
    StabilityQuantities q;
    if (spec.kind == BasisKind::trigonometric) {
        const double width = spec.right - spec.left;
        q.L = static_cast<double>(spec.m) / width;
        // Each sin/cos pair contributes the constant 2 omega_j^2 / width.
        const std::size_t pairs = (spec.m - 1) / 2;
        double sum_sq = 0.0;
        for (std::size_t j = 1; j <= pairs; ++j)
            sum_sq += static_cast<double>(j) * static_cast<double>(j);
        q.R = 2.0 / width * std::pow(2.0 * pi / width, 2.0) * sum_sq;
        return q;
    }
    const auto& grid = probe_grid.empty() ? default_probe_grid() : probe_grid;
    for (double x : grid) {
        const auto h = eval_basis(spec, x);
        const auto dh = eval_basis_deriv(spec, x);
        double sum = 0.0, dsum = 0.0;
        for (std::size_t j = 0; j < spec.m; ++j) {
            sum += h[j] * h[j];
            dsum += dh[j] * dh[j];
        }
        q.L = std::max(q.L, sum);
        q.R = std::max(q.R, dsum);
    }
    return q;
}

}  // namespace fsde
