#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsde/experiments.hpp"

namespace fsde {

struct MissingKey : std::runtime_error {
    explicit MissingKey(const std::string& key)
        : std::runtime_error("missing config field: " + key) {}
};

/// Flat key = value file with [section] tables. Keys are stored as
/// "section.key"; keys before any section header keep their bare name.
class ConfigFile {
public:
    static ConfigFile load(const std::string& path);
    static ConfigFile parse(const std::string& text);

    bool has(const std::string& key) const;
    /// Throws MissingKey naming the key when absent.
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    std::size_t get_size(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<std::size_t> get_sizes(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

struct SweepSettings {
    std::vector<std::size_t> N_list;
    std::size_t replications = 0;
};

/// Builds a TrialConfig from the [model], [grid], and [estimation] tables.
TrialConfig trial_config_from(const ConfigFile& config);

/// Reads the [sweep] table.
SweepSettings sweep_settings_from(const ConfigFile& config);

}  // namespace fsde
