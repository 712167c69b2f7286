#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fsde/basis.hpp"
#include "fsde/estimators.hpp"
#include "fsde/sde.hpp"

namespace fsde {

enum class EstimationTarget { drift, drift_derivative };

struct EpsilonPolicy {
    bool use_rule = true;  // epsilon_{N,T}; otherwise the fixed value below
    double fixed = 1e-3;
};

struct DimensionPolicy {
    bool use_m_opt = false;
    double smoothness = 1.0;  // only read when use_m_opt
};

struct TrialConfig {
    std::string drift_name = "linear";
    std::vector<double> drift_params = {-1.0};
    double x0 = 1.0;
    double sigma = 0.5;
    double H = 0.75;
    double T = 1.0;
    std::size_t n = 256;
    std::size_t N_train = 100;
    std::size_t N_eval = 0;  // 0 = match N_train
    BasisSpec basis = BasisSpec::trig(-2.0, 2.0, 5);
    double kappa = 1.0;
    EpsilonPolicy epsilon_policy;
    DimensionPolicy m_policy;
    EstimationTarget target = EstimationTarget::drift;
    std::uint64_t master_seed = 1;

    DriftModel drift() const { return make_drift(drift_name, drift_params); }
    TimeGrid grid() const { return TimeGrid(T, n); }
};

struct RiskReport {
    double empirical_risk_train = 0.0;
    double weighted_risk_holdout = 0.0;
    bool truncated = false;
    std::size_t m_used = 0;
    double epsilon_used = 0.0;
    TrialConfig config;
    std::uint64_t replication_seed = 0;
};

struct SweepRow {
    std::size_t N = 0;
    double mean_risk = 0.0;
    double se = 0.0;
    double truncation_rate = 0.0;
    std::size_t m = 0;
    double epsilon = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0.0;  // least-squares slope of log(mean risk) vs log(N)
};

struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;  // mass per bin divided by bin width
    double total_mass = 0.0;
};

/// Empirical risk (1/(NT)) sum_i int (fit(X^i) - truth(X^i))^2 ds, trapezoid
/// in time. For compactly supported bases the truth is masked to the support.
double empirical_risk(const FitResult& fit, const std::function<double(double)>& truth,
                      const std::vector<SdePath>& paths);

/// Derives deterministic, decorrelated sub-seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Simulates, fits, and evaluates one replication. Deterministic per seed.
RiskReport run_trial(const TrialConfig& config, std::uint64_t replication_seed);

/// Mean holdout risk per N with standard errors and the fitted log-log slope.
/// Requires >= 4 strictly increasing N values. `jobs` > 1 parallelizes the
/// replications; the reduction order is fixed, so results do not depend on it.
SweepResult rate_sweep(const TrialConfig& config, const std::vector<std::size_t>& N_list,
                       std::size_t replications, std::size_t jobs = 1);

/// Time-and-path-averaged histogram of path values, estimating the
/// occupation density f_T.
Histogram occupation_density(const std::vector<SdePath>& paths,
                             const std::vector<double>& bin_edges);

void write_sweep_csv(const std::string& filename, const SweepResult& sweep);
void write_density_csv(const std::string& filename, const Histogram& hist);

}  // namespace fsde
