#include "fsde/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsde {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile config;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        config.entries_[section.empty() ? key : section + "." + key] = value;
    }
    return config;
}

bool ConfigFile::has(const std::string& key) const { return entries_.contains(key); }

std::string ConfigFile::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw MissingKey(key);
    return it->second;
}

std::string ConfigFile::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key) const {
    const std::string raw = get(key);
    std::size_t used = 0;
    double value;
    try {
        value = std::stod(raw, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("config field " + key + ": expected a number, got '" + raw + "'");
    }
    if (used != raw.size())
        throw std::runtime_error("config field " + key + ": trailing junk in '" + raw + "'");
    return value;
}

std::size_t ConfigFile::get_size(const std::string& key) const {
    const double value = get_double(key);
    if (value < 0.0 || value != static_cast<double>(static_cast<std::size_t>(value)))
        throw std::runtime_error("config field " + key + ": expected a nonnegative integer");
    return static_cast<std::size_t>(value);
}

std::vector<double> ConfigFile::get_doubles(const std::string& key) const {
    std::string raw = get(key);
    for (char& c : raw)
        if (c == ',') c = ' ';
    std::istringstream in(raw);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof())
        throw std::runtime_error("config field " + key + ": expected a list of numbers");
    return values;
}

std::vector<std::size_t> ConfigFile::get_sizes(const std::string& key) const {
    std::vector<std::size_t> out;
    for (double v : get_doubles(key)) {
        if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw std::runtime_error("config field " + key + ": expected nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

TrialConfig trial_config_from(const ConfigFile& config) {
    TrialConfig trial;
    trial.drift_name = config.get("model.drift");
    trial.drift_params =
        config.has("model.params") ? config.get_doubles("model.params") : std::vector<double>{};
    trial.x0 = config.get_double("model.x0");
    trial.sigma = config.get_double("model.sigma");
    trial.H = config.get_double("model.H");
    trial.T = config.get_double("grid.T");
    trial.n = config.get_size("grid.n");
    trial.basis = BasisSpec::parse(config.get("estimation.basis"));
    trial.N_train = config.get_size("estimation.N_train");
    trial.N_eval = config.has("estimation.N_eval") ? config.get_size("estimation.N_eval") : 0;
    trial.kappa = config.has("estimation.kappa") ? config.get_double("estimation.kappa") : 1.0;
    trial.master_seed = config.get_size("estimation.seed");

    const std::string target = config.get_or("estimation.target", "b");
    if (target == "b")
        trial.target = EstimationTarget::drift;
    else if (target == "bprime")
        trial.target = EstimationTarget::drift_derivative;
    else
        throw std::runtime_error("config field estimation.target: expected b or bprime");

    const std::string eps = config.get_or("estimation.epsilon", "rule");
    if (eps == "rule") {
        trial.epsilon_policy.use_rule = true;
    } else {
        trial.epsilon_policy.use_rule = false;
        trial.epsilon_policy.fixed = std::stod(eps);
        if (!(trial.epsilon_policy.fixed > 0.0))
            throw std::runtime_error("config field estimation.epsilon: must be positive or 'rule'");
    }

    const std::string m = config.get_or("estimation.m", "fixed");
    if (m == "fixed") {
        trial.m_policy.use_m_opt = false;
    } else if (m.rfind("opt", 0) == 0) {
        trial.m_policy.use_m_opt = true;
        const auto colon = m.find(':');
        trial.m_policy.smoothness = colon == std::string::npos ? 1.0 : std::stod(m.substr(colon + 1));
    } else {
        throw std::runtime_error("config field estimation.m: expected 'fixed' or 'opt:<smoothness>'");
    }
    return trial;
}

SweepSettings sweep_settings_from(const ConfigFile& config) {
    SweepSettings settings;
    settings.N_list = config.get_sizes("sweep.N_list");
    settings.replications = config.get_size("sweep.replications");
    return settings;
}

}  // namespace fsde
