#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "fsde/basis.hpp"
#include "fsde/estimators.hpp"
#include "fsde/fbm.hpp"
#include "fsde/integrals.hpp"
#include "fsde/sde.hpp"

using namespace fsde;

namespace {

SdePath constant_path(const TimeGrid& grid, double value) {
    SdePath path;
    path.grid = grid;
    path.values.assign(grid.n + 1, value);
    return path;
}

std::vector<CoupledPaths> simulate_coupled(const SdeConfig& config, double epsilon,
                                           std::size_t count, std::uint64_t seed) {
    const FbmSampler sampler(config.grid, config.H);
    std::vector<CoupledPaths> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(coupled_solve(config, epsilon, sampler.sample(seed + i)));
    return out;
}

}  // namespace

TEST_CASE("gram of a constant path") {
    TimeGrid grid(1.0, 32);
    const auto basis = BasisSpec::trig(-2.0, 2.0, 1);
    const auto gm = gram({constant_path(grid, 0.5)}, basis);
    CHECK(gm.psi(0, 0) == doctest::Approx(0.25).epsilon(1e-12));  // 1/(r-l)

    // a path entirely outside the support contributes nothing
    const auto outside = gram({constant_path(grid, 5.0)}, BasisSpec::trig(-2.0, 2.0, 3));
    CHECK(outside.psi.norm() == 0.0);
}

TEST_CASE("gram approaches the population matrix") {
    // two independent groups must agree entrywise within 3 combined SEs
    TimeGrid grid(1.0, 64);
    const double H = 0.75;
    SdeConfig config{make_drift("linear", {-1.0}), 1.0, 0.5, grid, H};
    const auto basis = BasisSpec::trig(-2.0, 2.0, 3);
    const std::size_t N = 2000;
    const FbmSampler sampler(grid, H);

    auto per_path_entries = [&](std::uint64_t seed_base) {
        std::vector<Eigen::MatrixXd> entries;
        for (std::size_t i = 0; i < N; ++i) {
            const auto path = euler_solve(config, sampler.sample(seed_base + i));
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
            for (std::size_t k = 0; k <= grid.n; ++k) {
                const auto phi = eval_basis(basis, path.values[k]);
                const double w = (k == 0 || k == grid.n) ? 0.5 * grid.dt() : grid.dt();
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) acc(a, b) += w * phi[a] * phi[b];
            }
            entries.push_back(acc / grid.T);
        }
        return entries;
    };
    const auto group_a = per_path_entries(1000000);
    const auto group_b = per_path_entries(9000000);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            double ma = 0.0, mb = 0.0, va = 0.0, vb = 0.0;
            for (const auto& e : group_a) ma += e(a, b);
            for (const auto& e : group_b) mb += e(a, b);
            ma /= static_cast<double>(N);
            mb /= static_cast<double>(N);
            for (const auto& e : group_a) va += (e(a, b) - ma) * (e(a, b) - ma);
            for (const auto& e : group_b) vb += (e(a, b) - mb) * (e(a, b) - mb);
            const double se = std::sqrt((va + vb) / static_cast<double>(N - 1)) /
                              std::sqrt(static_cast<double>(N));
            CHECK(std::abs(ma - mb) <= 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("truncation constant") {
    CHECK(truncation_constant(1.0, 1.0) == doctest::Approx(0.0270494).epsilon(1e-5));
    CHECK(truncation_constant(0.0, 1.0) == doctest::Approx(0.0309136).epsilon(1e-5));
    CHECK(truncation_constant(1.0, 2.0) == doctest::Approx(truncation_constant(1.0, 1.0) / 2.0));
    CHECK_THROWS(truncation_constant(-1.0, 1.0));
}

TEST_CASE("truncation event arithmetic") {
    GramMatrix identity;
    identity.psi = Eigen::MatrixXd::Identity(3, 3);
    identity.N = 1000;
    identity.T = 1.0;
    // 3 <= 0.02705 * 1000 / ln(1000) ~ 3.916
    CHECK(truncation_event(identity, 3.0, 1.0, 1000, 1.0));
    // 3 <= 0.02705 * 3 / ln(3) ~ 0.0739 fails
    CHECK_FALSE(truncation_event(identity, 3.0, 1.0, 3, 1.0));

    GramMatrix singular;
    singular.psi = Eigen::MatrixXd::Zero(3, 3);
    singular.psi(0, 0) = 1.0;  // rank deficient
    CHECK_FALSE(truncation_event(singular, 0.01, 1.0, 100000, 1.0));
}

TEST_CASE("fit_drift: zero drift without noise gives zero coefficients") {
    TimeGrid grid(1.0, 16);
    SdeConfig config{make_drift("zero", {}), 0.5, 0.0, grid, 0.75};
    std::vector<CoupledPaths> set;
    FbmPath flat;
    flat.grid = grid;
    flat.H = 0.75;
    flat.values.assign(grid.n + 1, 0.0);
    for (std::size_t i = 0; i < 400; ++i) set.push_back(coupled_solve(config, 1e-3, flat));
    const auto fit = fit_drift(set, BasisSpec::trig(0.0, 1.0, 1), 0.0, 0.75, 1.0);
    CHECK_FALSE(fit.truncated);
    CHECK(std::abs(fit.coeffs[0]) < 1e-12);
}

TEST_CASE("fit_drift: failed truncation zeroes the estimator") {
    TimeGrid grid(1.0, 32);
    SdeConfig config{make_drift("linear", {-1.0}), 1.0, 0.5, grid, 0.75};
    const auto set = simulate_coupled(config, 1e-3, 20, 77);
    const auto fit = fit_drift(set, BasisSpec::trig(-2.0, 2.0, 5), config.sigma, config.H, 1.0);
    CHECK(fit.truncated);
    for (double c : fit.coeffs) CHECK(c == 0.0);
    CHECK(fit.evaluate(0.3) == 0.0);
}

TEST_CASE("fit_drift satisfies the normal equations") {
    TimeGrid grid(1.0, 64);
    const double H = 0.75, sigma = 0.5;
    SdeConfig config{make_drift("linear", {-1.0}), 1.0, sigma, grid, H};
    const auto set = simulate_coupled(config, 1e-3, 400, 123);
    const auto basis = BasisSpec::trig(-2.0, 2.0, 1);
    const auto fit = fit_drift(set, basis, sigma, H, 1.0);
    REQUIRE_FALSE(fit.truncated);

    // independent route to the design vector through the public surrogate API
    std::vector<SdePath> lows;
    for (const auto& c : set) lows.push_back(c.X_low);
    const auto gm = gram(lows, basis);
    const KernelCache cache(grid, H);
    Eigen::VectorXd design = Eigen::VectorXd::Zero(1);
    for (const auto& c : set) {
        design(0) += skorokhod_surrogate(
            c, [&](double x) { return eval_basis(basis, x)[0]; },
            [&](double x) { return eval_basis_deriv(basis, x)[0]; }, sigma, cache);
    }
    design /= static_cast<double>(set.size()) * grid.T;

    Eigen::VectorXd theta(1);
    theta(0) = fit.coeffs[0];
    CHECK((gm.psi * theta - design).norm() <= 1e-10 * design.norm());
}

TEST_CASE("fit_drift_derivative recovers a constant derivative") {
    TimeGrid grid(1.0, 256);
    const double mu = -1.0;
    SdeConfig config{make_drift("linear", {mu}), 1.0, 0.5, grid, 0.75};
    const auto set = simulate_coupled(config, 1e-3, 400, 321);
    const auto basis = BasisSpec::trig(-2.0, 2.0, 1);
    const auto fit = fit_drift_derivative(set, basis);
    REQUIRE_FALSE(fit.truncated);
    // the left-point log increment carries an O(dt/2) relative bias
    for (double x : {-1.0, 0.0, 0.5, 1.5})
        CHECK(std::abs(fit.evaluate(x) - mu) < 5e-3);

    // Y is epsilon-free for a linear flow, so fits at eps and eps/2 coincide
    const auto set_half = simulate_coupled(config, 5e-4, 400, 321);
    const auto fit_half = fit_drift_derivative(set_half, basis);
    CHECK(std::abs(fit.coeffs[0] - fit_half.coeffs[0]) < 1e-12);
}

TEST_CASE("fit_drift_derivative of a zero drift is zero") {
    TimeGrid grid(1.0, 64);
    SdeConfig config{make_drift("zero", {}), 0.5, 0.3, grid, 0.75};
    const auto set = simulate_coupled(config, 1e-3, 400, 55);
    const auto fit = fit_drift_derivative(set, BasisSpec::trig(-2.0, 2.0, 1));
    REQUIRE_FALSE(fit.truncated);
    CHECK(std::abs(fit.evaluate(0.4)) < 1e-6);
}

TEST_CASE("derivative fit matches a brute-force projection of b'") {
    // noiseless model: the design vector equals <phi_j, b'>_N up to O(dt + eps)
    TimeGrid grid(1.0, 512);
    SdeConfig config{make_drift("damped_sine", {1.0, 0.5}), 0.7, 0.4, grid, 0.75};
    const auto drift = config.drift;
    const auto set = simulate_coupled(config, 1e-6, 300, 999);
    const auto basis = BasisSpec::trig(-2.0, 2.0, 1);
    const auto fit = fit_drift_derivative(set, basis);
    REQUIRE_FALSE(fit.truncated);

    std::vector<SdePath> lows;
    for (const auto& c : set) lows.push_back(c.X_low);
    const auto gm = gram(lows, basis);
    double design = 0.0;
    for (const auto& path : lows) {
        for (std::size_t k = 0; k <= grid.n; ++k) {
            const double w = (k == 0 || k == grid.n) ? 0.5 * grid.dt() : grid.dt();
            design += w * eval_basis(basis, path.values[k])[0] * drift.b_prime(path.values[k]);
        }
    }
    design /= static_cast<double>(lows.size()) * grid.T;
    const double brute = design / gm.psi(0, 0);
    CHECK(std::abs(fit.coeffs[0] - brute) < 5e-2 * std::abs(brute));
}

TEST_CASE("anchored primitive") {
    const auto basis = BasisSpec::trig(-2.0, 2.0, 5);
    FitResult fit;
    fit.basis = basis;
    fit.coeffs.assign(5, 0.0);

    SUBCASE("integrating a constant derivative gives a line") {
        const double mu = -1.0;
        fit.coeffs[0] = mu * 2.0;  // mu * sqrt(r - l)
        const auto prim = primitive_from_derivative(fit, -2.0, mu * -2.0);
        for (double x : {-2.0, -1.0, 0.0, 1.3, 2.0})
            CHECK(prim.evaluate(x) == doctest::Approx(mu * x).epsilon(1e-12));
    }
    SUBCASE("perturbing the anchor shifts the output") {
        fit.coeffs[0] = 1.0;
        fit.coeffs[1] = 0.5;
        const auto a = primitive_from_derivative(fit, -2.0, 0.0);
        const auto b = primitive_from_derivative(fit, -2.0, 0.25);
        for (double x : {-1.5, 0.0, 1.9}) CHECK(b.evaluate(x) == doctest::Approx(a.evaluate(x) + 0.25));
    }
    SUBCASE("zero derivative fit is the anchored constant") {
        const auto prim = primitive_from_derivative(fit, 0.5, 3.0);
        for (double x : {-2.0, 0.0, 2.0}) CHECK(prim.evaluate(x) == doctest::Approx(3.0));
        CHECK(prim.evaluate(prim.anchor_point) == 3.0);
    }
    SUBCASE("closed-form antiderivative matches numeric integration") {
        fit.coeffs = {0.3, -0.7, 0.2, 0.4, -0.1};
        const auto prim = primitive_from_derivative(fit, -2.0, 0.0);
        double numeric = 0.0;
        const double h = 4.0 / 40000.0;
        for (int i = 0; i < 40000; ++i) {
            const double x = -2.0 + (static_cast<double>(i) + 0.5) * h;
            numeric += h * fit.evaluate(x);
            if (i % 4000 == 3999)
                CHECK(prim.evaluate(-2.0 + (i + 1) * h) == doctest::Approx(numeric).epsilon(1e-6));
        }
    }
    SUBCASE("hermite basis is rejected") {
        FitResult hfit;
        hfit.basis = BasisSpec::hermite(4);
        hfit.coeffs.assign(4, 0.0);
        CHECK_THROWS(primitive_from_derivative(hfit, 0.0, 0.0));
    }
}

TEST_CASE("epsilon rule") {
    CHECK(epsilon_rule(100, 1.0) == doctest::Approx(0.0046052).epsilon(1e-4));
    CHECK(epsilon_rule(1000, 1.0) == doctest::Approx(2.1846e-4).epsilon(1e-4));
    double prev = epsilon_rule(10, 1.0);
    for (std::size_t N : {20ul, 50ul, 200ul, 5000ul}) {
        const double cur = epsilon_rule(N, 1.0);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS(epsilon_rule(2, 1.0));
}

TEST_CASE("m_opt") {
    CHECK(m_opt(BasisKind::trigonometric, 1000, 1.0, 0.75, 1.0, 1.0) == 3);
    CHECK(m_opt(BasisKind::trigonometric, 100000, 1.0, 0.75, 1.0, 1.0) == 9);
    CHECK(m_opt(BasisKind::trigonometric, 1, 1.0, 0.75, 1.0, 1.0) == 1);
    CHECK(m_opt(BasisKind::hermite, 1, 1.0, 0.75, 2.0, 1.0) == 1);
    CHECK(m_opt(BasisKind::hermite, 1000, 1.0, 0.75, 2.0, 1.0) ==
          static_cast<std::size_t>(std::floor(std::pow(1000.0, 1.0 / 4.0))));
}

TEST_CASE("fit csv and sidecar") {
    FitResult fit;
    fit.basis = BasisSpec::trig(0.0, 1.0, 3);
    fit.coeffs = {1.5, -0.25, 0.0};
    fit.N = 10;
    fit.T = 1.0;
    fit.L_m = 3.0;
    write_fit_csv("fit_test.csv", fit, 1e-3, 42);
    std::ifstream in("fit_test.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "j,theta_j");
    std::getline(in, line);
    CHECK(line == "0,1.5");
    std::ifstream meta("fit_test.csv.meta");
    bool saw_truncated = false;
    while (std::getline(meta, line))
        if (line == "truncated = false") saw_truncated = true;
    CHECK(saw_truncated);
    std::remove("fit_test.csv");
    std::remove("fit_test.csv.meta");
}
