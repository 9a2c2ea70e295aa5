#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topoprune/dataset.hpp"
#include "topoprune/pruner.hpp"

namespace topoprune {

struct split_spec {
    double train_fraction = 0.8;
    int folds = 5;
    std::uint64_t seed = 42;
};

void validate_split(const split_spec& split);

// Macro-averaged over classes; f1 is the harmonic mean of the macro
// precision and macro recall.
struct metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

enum class eval_variant { full, pruned, pruned_plus_sheaf };

const char* variant_name(eval_variant variant);

// 1-nearest-neighbor under Euclidean distance on flattened series, z-scored
// per variable with statistics fit on the training set. Ties break toward
// the lowest training index.
std::vector<std::string> classify_1nn(const mts_dataset& train, const mts_dataset& test);

struct evaluation_result {
    eval_variant variant = eval_variant::full;
    int folds = 0;
    metrics overall;
    std::vector<metrics> per_fold;
    // Variables kept by the training-fold pruning decision (one list per
    // fold; all variables for the `full` variant).
    std::vector<std::vector<std::string>> per_fold_kept;
};

// Stratified k-fold cross-validation. Pruning and all normalization
// statistics are fit on each training fold only, then applied to its test
// fold. Fold assignment is a seeded per-class shuffle dealt round-robin.
evaluation_result evaluate(const mts_dataset& dataset, const split_spec& split,
                           eval_variant variant, const pipeline_config& config = {});

std::string metrics_to_json(const evaluation_result& result, const std::string& config_digest);

} // namespace topoprune
