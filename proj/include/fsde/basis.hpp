#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fsde {

enum class BasisKind { trigonometric, hermite };

/// A finite orthonormal family: the compactly supported trigonometric basis
/// on [l, r] (dimension forced odd) or the Hermite functions on R.
///
/// Trigonometric layout: index 0 is the constant, then sin/cos pairs of
/// increasing frequency: phi_{2j-1} = sqrt(2/(r-l)) sin(2 pi j (x-l)/(r-l)),
/// phi_{2j} = sqrt(2/(r-l)) cos(2 pi j (x-l)/(r-l)); all vanish outside [l, r].
struct BasisSpec {
    BasisKind kind = BasisKind::trigonometric;
    std::size_t m = 1;
    double left = 0.0;
    double right = 1.0;

    static BasisSpec trig(double l, double r, std::size_t m);
    static BasisSpec hermite(std::size_t m);

    /// Parses "trig(l,r,m)" or "hermite(m)".
    static BasisSpec parse(const std::string& text);
    std::string to_string() const;
};

std::vector<double> eval_basis(const BasisSpec& spec, double x);
std::vector<double> eval_basis_deriv(const BasisSpec& spec, double x);

struct StabilityQuantities {
    double L = 0.0;  // sup of sum phi_j^2
    double R = 0.0;  // sup of sum (phi_j')^2
};

/// Trigonometric values are analytic; Hermite values are maxima over the
/// probe grid (lower bounds of the true sup).
StabilityQuantities stability_quantities(const BasisSpec& spec,
                                         const std::vector<double>& probe_grid = {});

/// Default probe grid for Hermite sup quantities: uniform on [-12, 12].
std::vector<double> default_probe_grid(std::size_t points = 4096);

}  // namespace fsde
