#include "fsde/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace fsde {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix(splitmix(master ^ (stream * 0xd1342543de82ef95ULL)) + index);
}

double empirical_risk(const FitResult& fit, const std::function<double(double)>& truth,
                      const std::vector<SdePath>& paths) {
    if (paths.empty()) throw std::invalid_argument("need at least one path");
    const TimeGrid& grid = paths.front().grid;
    const double dt = grid.dt();
    const std::size_t n = grid.n;
    const bool compact = fit.basis.kind == BasisKind::trigonometric;

    double acc = 0.0;
    for (const auto& path : paths) {
        for (std::size_t k = 0; k <= n; ++k) {
            const double x = path.values[k];
            double target = truth(x);
            if (compact && (x < fit.basis.left || x > fit.basis.right)) target = 0.0;
            const double diff = fit.evaluate(x) - target;
            const double w = (k == 0 || k == n) ? 0.5 * dt : dt;
            acc += w * diff * diff;
        }
    }
    return acc / (static_cast<double>(paths.size()) * grid.T);
}

RiskReport run_trial(const TrialConfig& config, std::uint64_t replication_seed) {
    const TimeGrid grid = config.grid();
    const DriftModel drift = config.drift();
    SdeConfig sde{drift, config.x0, config.sigma, grid, config.H};

    RiskReport report;
    report.config = config;
    report.replication_seed = replication_seed;
    report.epsilon_used = config.epsilon_policy.use_rule
                              ? epsilon_rule(config.N_train, config.T)
                              : config.epsilon_policy.fixed;

    BasisSpec basis = config.basis;
    if (config.m_policy.use_m_opt) {
        basis.m = m_opt(basis.kind, config.N_train, config.T, config.H,
                        config.m_policy.smoothness, config.kappa);
    }
    report.m_used = basis.m;

    const FbmSampler sampler(grid, config.H);
    const std::uint64_t train_base = derive_seed(config.master_seed, 1, replication_seed);
    const std::uint64_t eval_base = derive_seed(config.master_seed, 2, replication_seed);

    std::vector<CoupledPaths> train;
    train.reserve(config.N_train);
    for (std::size_t i = 0; i < config.N_train; ++i)
        train.push_back(coupled_solve(sde, report.epsilon_used, sampler.sample(train_base + i)));

    FitResult fit;
    std::function<double(double)> truth;
    if (config.target == EstimationTarget::drift) {
        fit = fit_drift(train, basis, config.sigma, config.H, config.kappa);
        truth = drift.b;
    } else {
        fit = fit_drift_derivative(train, basis);
        truth = drift.b_prime;
    }
    report.truncated = fit.truncated;

    std::vector<SdePath> train_lows;
    train_lows.reserve(train.size());
    for (const auto& c : train) train_lows.push_back(c.X_low);
    report.empirical_risk_train = empirical_risk(fit, truth, train_lows);

    // N_eval = 0 means "match N_train"
    const std::size_t n_eval = config.N_eval > 0 ? config.N_eval : config.N_train;
    std::vector<SdePath> holdout;
    holdout.reserve(n_eval);
    for (std::size_t i = 0; i < n_eval; ++i)
        holdout.push_back(euler_solve(sde, sampler.sample(eval_base + i)));
    report.weighted_risk_holdout = empirical_risk(fit, truth, holdout);

    return report;
}

SweepResult rate_sweep(const TrialConfig& config, const std::vector<std::size_t>& N_list,
                       std::size_t replications, std::size_t jobs) {
    if (N_list.size() < 4) throw std::invalid_argument("rate sweep needs at least 4 values of N");
    if (!std::is_sorted(N_list.begin(), N_list.end()) ||
        std::adjacent_find(N_list.begin(), N_list.end()) != N_list.end())
        throw std::invalid_argument("N_list must be strictly increasing");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (jobs < 1) jobs = 1;

    SweepResult sweep;
    for (std::size_t ni = 0; ni < N_list.size(); ++ni) {
        TrialConfig cfg = config;
        cfg.N_train = N_list[ni];

        std::vector<RiskReport> reports(replications);
        auto worker = [&](std::size_t begin, std::size_t step) {
            for (std::size_t r = begin; r < replications; r += step)
                reports[r] = run_trial(cfg, derive_seed(cfg.master_seed, 100 + ni, r));
        };
        if (jobs == 1) {
            worker(0, 1);
        } else {
            std::vector<std::thread> threads;
            for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker, t, jobs);
            for (auto& th : threads) th.join();
        }

        SweepRow row;
        row.N = N_list[ni];
        row.m = reports.front().m_used;
        row.epsilon = reports.front().epsilon_used;
        double sum = 0.0, sum_sq = 0.0, truncated = 0.0;
        for (const auto& rep : reports) {
            sum += rep.weighted_risk_holdout;
            sum_sq += rep.weighted_risk_holdout * rep.weighted_risk_holdout;
            if (rep.truncated) truncated += 1.0;
        }
        const double R = static_cast<double>(replications);
        row.mean_risk = sum / R;
        row.se = replications > 1
                     ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / R) / (R - 1.0)) / R)
                     : 0.0;
        row.truncation_rate = truncated / R;
        sweep.rows.push_back(row);
    }

    // log-log regression of mean risk on N
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(sweep.rows.size());
    for (const auto& row : sweep.rows) {
        const double lx = std::log(static_cast<double>(row.N));
        const double ly = std::log(std::max(row.mean_risk, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    sweep.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return sweep;
}

Histogram occupation_density(const std::vector<SdePath>& paths,
                             const std::vector<double>& bin_edges) {
    if (paths.empty()) throw std::invalid_argument("need at least one path");
    if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end()))
        throw std::invalid_argument("bin edges must be increasing with >= 2 entries");

    Histogram hist;
    hist.edges = bin_edges;
    hist.density.assign(bin_edges.size() - 1, 0.0);

    const TimeGrid& grid = paths.front().grid;
    const double dt = grid.dt();
    const std::size_t n = grid.n;
    const double total_weight = static_cast<double>(paths.size()) * grid.T;

    for (const auto& path : paths) {
        for (std::size_t k = 0; k <= n; ++k) {
            const double x = path.values[k];
            const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), x);
            if (it == bin_edges.begin() || it == bin_edges.end()) continue;
            const auto bin = static_cast<std::size_t>(it - bin_edges.begin() - 1);
            const double w = (k == 0 || k == n) ? 0.5 * dt : dt;
            hist.density[bin] += w / total_weight;
        }
    }
    for (std::size_t b = 0; b < hist.density.size(); ++b) {
        hist.total_mass += hist.density[b];
        hist.density[b] /= bin_edges[b + 1] - bin_edges[b];
    }
    return hist;
}

void write_sweep_csv(const std::string& filename, const SweepResult& sweep) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out.precision(17);
    out << "N,mean_risk,se,truncation_rate,m,epsilon\n";
    for (const auto& row : sweep.rows)
        out << row.N << "," << row.mean_risk << "," << row.se << "," << row.truncation_rate << ","
            << row.m << "," << row.epsilon << "\n";
}

void write_density_csv(const std::string& filename, const Histogram& hist) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out.precision(17);
    out << "left,right,density\n";
    for (std::size_t b = 0; b < hist.density.size(); ++b)
        out << hist.edges[b] << "," << hist.edges[b + 1] << "," << hist.density[b] << "\n";
}

}  // namespace fsde
