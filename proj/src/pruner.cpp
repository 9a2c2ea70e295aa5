#include "topoprune/pruner.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "topoprune/errors.hpp"

namespace topoprune {

int effective_max_dim(int configured, int n_vars) {
    if (configured >= 0) return configured;
    return std::min(n_vars - 1, 3);
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

epsilon_result optimal_epsilon(const distance_matrix& d, int max_dim, bool include_degenerate) {
    if (d.size() < 2) throw validation_error("optimal_epsilon requires at least 2 variables");
    const barcode bars = reduce(build_filtration(d, max_dim));

    auto usable = [&](const persistence_pair& pair) {
        return pair.finite() && (include_degenerate || !pair.degenerate());
    };

    int top_dim = 0;
    for (const auto& pair : bars.pairs) {
        if (pair.dimension >= 1 && usable(pair)) top_dim = std::max(top_dim, pair.dimension);
    }

    epsilon_result result;
    if (top_dim >= 1) {
        for (const auto& pair : bars.pairs) {
            if (pair.dimension >= 1 && pair.dimension <= top_dim && usable(pair)) {
                result.death_times.push_back(pair.death);
            }
        }
    } else {
        // No loop-or-higher feature ever dies; the component merge scales are
        // the only distance information the barcode still carries.
        for (const auto& pair : bars.pairs) {
            if (pair.dimension == 0 && usable(pair)) result.death_times.push_back(pair.death);
        }
    }
    std::sort(result.death_times.begin(), result.death_times.end());
    result.epsilon = result.death_times.empty() ? 0.0 : median_of(result.death_times);
    return result;
}

prune_result prune(const mts_dataset& dataset, const distance_matrix& d, double epsilon,
                   int max_dim, std::vector<double> death_times) {
    if (epsilon < 0.0) throw validation_error("epsilon must be non-negative");
    if (d.size() != dataset.n_vars) {
        throw validation_error("distance matrix size does not match variable count");
    }
    simplicial_complex complex =
        vietoris_rips(d, epsilon, effective_max_dim(max_dim, dataset.n_vars));

    std::vector<int> kept;
    std::vector<int> pruned;
    for (int v = 0; v < dataset.n_vars; ++v) {
        (degree(complex, v) > 0 ? kept : pruned).push_back(v);
    }
    if (kept.empty()) throw degenerate_error("empty pruned dataset");

    prune_result result{epsilon,
                        std::move(kept),
                        std::move(pruned),
                        std::move(complex),
                        std::move(death_times),
                        dataset.variable_names,
                        {}};
    result.pruned_dataset = select_variables(dataset, result.kept);
    return result;
}

prune_result run_pipeline(const mts_dataset& dataset, const pipeline_config& config) {
    validate_dataset(dataset);
    const correlation_matrix c = compute_correlation(dataset);
    const distance_matrix d = correlation_to_distance(c);
    const int max_dim = effective_max_dim(config.max_dim, dataset.n_vars);
    if (config.epsilon_override) {
        return prune(dataset, d, *config.epsilon_override, max_dim);
    }
    epsilon_result eps = optimal_epsilon(d, max_dim, config.include_degenerate);
    return prune(dataset, d, eps.epsilon, max_dim, std::move(eps.death_times));
}

std::string prune_result_to_json(const prune_result& result, const std::string& config_digest) {
    nlohmann::json doc;
    doc["epsilon"] = result.epsilon_optimal;
    doc["death_times"] = result.death_times_used;
    doc["kept"] = nlohmann::json::array();
    for (int v : result.kept) doc["kept"].push_back(result.variable_names[static_cast<std::size_t>(v)]);
    doc["pruned"] = nlohmann::json::array();
    for (int v : result.pruned) {
        doc["pruned"].push_back(result.variable_names[static_cast<std::size_t>(v)]);
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : result.complex_at_epsilon.faces(1)) {
        doc["edges"].push_back({result.variable_names[static_cast<std::size_t>(e.vertices[0])],
                                result.variable_names[static_cast<std::size_t>(e.vertices[1])]});
    }
    if (!config_digest.empty()) doc["config_digest"] = config_digest;
    return doc.dump(2) + "\n";
}

} // namespace topoprune
