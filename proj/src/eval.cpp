#include "topoprune/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "topoprune/correlation.hpp"
#include "topoprune/errors.hpp"
#include "topoprune/sheaf.hpp"

namespace topoprune {

void validate_split(const split_spec& split) {
    if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
        throw validation_error("train_fraction must lie in (0, 1)");
    }
    if (split.folds < 2) throw validation_error("folds must be at least 2");
}

const char* variant_name(eval_variant variant) {
    switch (variant) {
        case eval_variant::full: return "full";
        case eval_variant::pruned: return "pruned";
        case eval_variant::pruned_plus_sheaf: return "pruned_plus_sheaf";
    }
    return "unknown";
}

namespace {

mts_dataset select_instances(const mts_dataset& dataset, const std::vector<int>& rows) {
    mts_dataset out;
    out.variable_names = dataset.variable_names;
    out.n_vars = dataset.n_vars;
    out.n_timesteps = dataset.n_timesteps;
    if (dataset.labels) out.labels.emplace();
    for (int k : rows) {
        out.instance_ids.push_back(dataset.instance_ids[static_cast<std::size_t>(k)]);
        out.instances.push_back(dataset.instances[static_cast<std::size_t>(k)]);
        if (dataset.labels) out.labels->push_back((*dataset.labels)[static_cast<std::size_t>(k)]);
    }
    return out;
}

std::vector<double> flatten_zscored(const mts_dataset& dataset, int instance,
                                    const zscore_stats& stats) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(dataset.n_vars) *
                 static_cast<std::size_t>(dataset.n_timesteps));
    for (int v = 0; v < dataset.n_vars; ++v) {
        for (int t = 0; t < dataset.n_timesteps; ++t) {
            flat.push_back(apply_zscore(stats, v, dataset.value(instance, v, t)));
        }
    }
    return flat;
}

metrics score(const std::vector<std::string>& truth, const std::vector<std::string>& predicted) {
    std::set<std::string> class_set(truth.begin(), truth.end());
    std::map<std::string, int> tp, fp, fn;
    int correct = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (predicted[k] == truth[k]) {
            ++correct;
            ++tp[truth[k]];
        } else {
            ++fn[truth[k]];
            ++fp[predicted[k]];
        }
    }
    double precision_sum = 0.0;
    double recall_sum = 0.0;
    for (const auto& cls : class_set) {
        const int tpc = tp.count(cls) ? tp[cls] : 0;
        const int fpc = fp.count(cls) ? fp[cls] : 0;
        const int fnc = fn.count(cls) ? fn[cls] : 0;
        precision_sum += tpc + fpc > 0 ? static_cast<double>(tpc) / (tpc + fpc) : 0.0;
        recall_sum += tpc + fnc > 0 ? static_cast<double>(tpc) / (tpc + fnc) : 0.0;
    }
    metrics m;
    m.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
    m.precision = class_set.empty() ? 0.0 : precision_sum / static_cast<double>(class_set.size());
    m.recall = class_set.empty() ? 0.0 : recall_sum / static_cast<double>(class_set.size());
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    return m;
}

// Deterministic Fisher-Yates driven directly by mt19937_64 output, so fold
// assignment is identical across platforms and standard libraries.
void shuffle_indices(std::vector<int>& indices, std::mt19937_64& rng) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(indices[i - 1], indices[j]);
    }
}

} // namespace

std::vector<std::string> classify_1nn(const mts_dataset& train, const mts_dataset& test) {
    if (train.n_instances() == 0) throw validation_error("empty training set");
    if (!train.labeled()) throw validation_error("training set is unlabeled");
    if (train.variable_names != test.variable_names || train.n_timesteps != test.n_timesteps) {
        throw validation_error("train and test variables do not match");
    }

    const zscore_stats stats = fit_zscore(train);
    std::vector<std::vector<double>> train_flat;
    train_flat.reserve(static_cast<std::size_t>(train.n_instances()));
    for (int k = 0; k < train.n_instances(); ++k) {
        train_flat.push_back(flatten_zscored(train, k, stats));
    }

    std::vector<std::string> predictions;
    predictions.reserve(static_cast<std::size_t>(test.n_instances()));
    for (int q = 0; q < test.n_instances(); ++q) {
        const std::vector<double> probe = flatten_zscored(test, q, stats);
        int best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int k = 0; k < train.n_instances(); ++k) {
            double dist = 0.0;
            for (std::size_t i = 0; i < probe.size(); ++i) {
                const double d = probe[i] - train_flat[static_cast<std::size_t>(k)][i];
                dist += d * d;
            }
            if (dist < best_dist) {
                best_dist = dist;
                best = k;
            }
        }
        predictions.push_back((*train.labels)[static_cast<std::size_t>(best)]);
    }
    return predictions;
}

evaluation_result evaluate(const mts_dataset& dataset, const split_spec& split,
                           eval_variant variant, const pipeline_config& config) {
    validate_dataset(dataset);
    validate_split(split);
    if (!dataset.labeled()) throw validation_error("evaluate requires a labeled dataset");

    // Stratified assignment: per class, a seeded shuffle dealt round-robin.
    std::map<std::string, std::vector<int>> by_class;
    for (int k = 0; k < dataset.n_instances(); ++k) {
        by_class[(*dataset.labels)[static_cast<std::size_t>(k)]].push_back(k);
    }
    std::vector<int> fold_of(static_cast<std::size_t>(dataset.n_instances()), 0);
    std::uint64_t class_index = 0;
    for (auto& [label, members] : by_class) {
        std::mt19937_64 rng(split.seed * 0x9e3779b97f4a7c15ull + class_index);
        shuffle_indices(members, rng);
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            fold_of[static_cast<std::size_t>(members[pos])] =
                static_cast<int>(pos % static_cast<std::size_t>(split.folds));
        }
        ++class_index;
    }

    evaluation_result result;
    result.variant = variant;
    result.folds = split.folds;

    for (int fold = 0; fold < split.folds; ++fold) {
        std::vector<int> train_rows;
        std::vector<int> test_rows;
        for (int k = 0; k < dataset.n_instances(); ++k) {
            (fold_of[static_cast<std::size_t>(k)] == fold ? test_rows : train_rows).push_back(k);
        }
        if (test_rows.empty()) {
            throw validation_error("fold " + std::to_string(fold) + " has no test instances");
        }
        mts_dataset train = select_instances(dataset, train_rows);
        mts_dataset test = select_instances(dataset, test_rows);

        const std::set<std::string> train_classes(train.labels->begin(), train.labels->end());
        for (const auto& [label, members] : by_class) {
            if (!train_classes.count(label)) {
                throw validation_error("class '" + label + "' is absent from training fold " +
                                       std::to_string(fold));
            }
        }

        if (variant == eval_variant::full) {
            result.per_fold_kept.push_back(dataset.variable_names);
        } else {
            // Fit the pipeline on the training fold only.
            prune_result pruned = run_pipeline(train, config);
            result.per_fold_kept.push_back(pruned.pruned_dataset.variable_names);
            test = select_variables(test, pruned.kept);
            if (variant == eval_variant::pruned_plus_sheaf) {
                mts_dataset pruned_train = std::move(pruned.pruned_dataset);
                const correlation_matrix c = compute_correlation(pruned_train);
                const distance_matrix d = correlation_to_distance(c);
                const sheaf_complex sheaf{
                    vietoris_rips(d, pruned.epsilon_optimal,
                                  effective_max_dim(config.max_dim, pruned_train.n_vars)),
                    1};
                const zscore_stats stats = fit_zscore(pruned_train);
                train = sheaf_features(pruned_train, sheaf, config.normalize_sheaf, &stats);
                test = sheaf_features(test, sheaf, config.normalize_sheaf, &stats);
            } else {
                train = std::move(pruned.pruned_dataset);
            }
        }

        const std::vector<std::string> predictions = classify_1nn(train, test);
        result.per_fold.push_back(score(*test.labels, predictions));
    }

    metrics& overall = result.overall;
    for (const auto& fold : result.per_fold) {
        overall.accuracy += fold.accuracy;
        overall.precision += fold.precision;
        overall.recall += fold.recall;
    }
    const double k = static_cast<double>(split.folds);
    overall.accuracy /= k;
    overall.precision /= k;
    overall.recall /= k;
    overall.f1 = overall.precision + overall.recall > 0.0
                     ? 2.0 * overall.precision * overall.recall /
                           (overall.precision + overall.recall)
                     : 0.0;
    return result;
}

std::string metrics_to_json(const evaluation_result& result, const std::string& config_digest) {
    nlohmann::json doc;
    doc["variant"] = variant_name(result.variant);
    doc["folds"] = result.folds;
    doc["accuracy"] = result.overall.accuracy;
    doc["precision"] = result.overall.precision;
    doc["recall"] = result.overall.recall;
    doc["f1"] = result.overall.f1;
    doc["per_fold"] = nlohmann::json::array();
    for (std::size_t fold = 0; fold < result.per_fold.size(); ++fold) {
        const metrics& m = result.per_fold[fold];
        nlohmann::json entry;
        entry["fold"] = fold;
        entry["accuracy"] = m.accuracy;
        entry["precision"] = m.precision;
        entry["recall"] = m.recall;
        entry["f1"] = m.f1;
        entry["kept"] = result.per_fold_kept[fold];
        doc["per_fold"].push_back(entry);
    }
    if (!config_digest.empty()) doc["config_digest"] = config_digest;
    return doc.dump(2) + "\n";
}

} // namespace topoprune
