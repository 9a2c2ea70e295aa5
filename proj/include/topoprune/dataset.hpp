#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace topoprune {

// A labeled collection of multivariate time series instances. Every instance
// holds n_vars * n_timesteps finite values, stored row-major as [var][time].
// Instances keep their source order; variable names are unique.
struct mts_dataset {
    std::vector<std::string> variable_names;
    std::vector<std::string> instance_ids;
    int n_vars = 0;
    int n_timesteps = 0;
    std::vector<std::vector<double>> instances;
    std::optional<std::vector<std::string>> labels;

    double value(int instance, int var, int t) const {
        return instances[static_cast<std::size_t>(instance)]
                        [static_cast<std::size_t>(var) * static_cast<std::size_t>(n_timesteps) +
                         static_cast<std::size_t>(t)];
    }
    double& value(int instance, int var, int t) {
        return instances[static_cast<std::size_t>(instance)]
                        [static_cast<std::size_t>(var) * static_cast<std::size_t>(n_timesteps) +
                         static_cast<std::size_t>(t)];
    }
    int n_instances() const { return static_cast<int>(instances.size()); }
    bool labeled() const { return labels.has_value(); }
};

enum class csv_format { long_csv, wide_csv };

// Throws validation_error when any invariant fails (shape mismatch,
// non-finite value, duplicate variable name, label count mismatch).
void validate_dataset(const mts_dataset& dataset);

mts_dataset load_dataset(const std::filesystem::path& path, csv_format format);
mts_dataset parse_dataset(std::istream& in, csv_format format, const std::string& source_name);

// Serializes in the long_csv schema (with a label column when present),
// using round-trip exact number formatting.
void write_long_csv(const mts_dataset& dataset, std::ostream& out);
std::string long_csv_string(const mts_dataset& dataset);

// New dataset containing only the variables in `kept` (indices into the
// original order, preserved).
mts_dataset select_variables(const mts_dataset& dataset, const std::vector<int>& kept);

// Per-variable mean and standard deviation over all instances and timesteps.
struct zscore_stats {
    std::vector<double> mean;
    std::vector<double> stddev;
};

zscore_stats fit_zscore(const mts_dataset& dataset);

// (x - mean) / stddev; variables with stddev below the variance guard map to 0.
double apply_zscore(const zscore_stats& stats, int var, double x);

} // namespace topoprune
