#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topoprune/correlation.hpp"
#include "topoprune/dataset.hpp"
#include "topoprune/persistence.hpp"
#include "topoprune/simplicial_complex.hpp"

namespace topoprune {

struct pipeline_config {
    int max_dim = -1; // -1: min(n_vars - 1, 3)
    bool include_degenerate = false;
    std::optional<double> epsilon_override;
    bool normalize_sheaf = true;
};

int effective_max_dim(int configured, int n_vars);

// Median with the even-count convention mean-of-middle-two. Values need not
// be sorted; the list must be non-empty.
double median_of(std::vector<double> values);

struct epsilon_result {
    double epsilon = 0.0;
    std::vector<double> death_times; // sorted ascending; the list the median ran over
};

// The death-time collection: N is the largest dimension <= max_dim holding a
// finite usable bar; death times of dimensions 1..N feed the median. With no
// usable bar above dimension 0 the finite dimension-0 deaths (component merge
// scales) are used instead, and with nothing at all epsilon falls back to 0.
// Degenerate (zero-length) bars only count when include_degenerate is set.
epsilon_result optimal_epsilon(const distance_matrix& d, int max_dim,
                               bool include_degenerate = false);

struct prune_result {
    double epsilon_optimal = 0.0;
    std::vector<int> kept;
    std::vector<int> pruned;
    simplicial_complex complex_at_epsilon; // over all original variables
    std::vector<double> death_times_used;
    std::vector<std::string> variable_names; // original order
    mts_dataset pruned_dataset;
};

// Removes variables of degree 0 in VR(d, epsilon, max_dim). Throws
// degenerate_error("empty pruned dataset") when nothing survives.
prune_result prune(const mts_dataset& dataset, const distance_matrix& d, double epsilon,
                   int max_dim = -1, std::vector<double> death_times = {});

// compute_correlation -> correlation_to_distance -> optimal_epsilon -> prune.
prune_result run_pipeline(const mts_dataset& dataset, const pipeline_config& config = {});

std::string prune_result_to_json(const prune_result& result, const std::string& config_digest);

} // namespace topoprune
