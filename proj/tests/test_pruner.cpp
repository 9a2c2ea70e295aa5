#include <doctest.h>

#include <cmath>
#include <random>

#include "synthetic.hpp"
#include "topoprune/errors.hpp"
#include "topoprune/pruner.hpp"
#include "topoprune/rank_oracle.hpp"

using namespace topoprune;
using namespace topoprune::testing;

TEST_CASE("median follows the mean-of-middle-two convention") {
    CHECK(median_of({0.8, 1.0, 1.4}) == 1.0);
    CHECK(median_of({1.4, 0.8}) == doctest::Approx(1.1));
    CHECK(median_of({5.0}) == 5.0);
    CHECK(median_of({1.0, 2.0, 3.0, 4.0}) == 2.5);
    CHECK_THROWS_AS(median_of({}), std::invalid_argument);
}

TEST_CASE("optimal epsilon of the unit square is sqrt(2)") {
    const auto result = optimal_epsilon(square_distances(), 2);
    REQUIRE(result.death_times == std::vector<double>{std::sqrt(2.0)});
    CHECK(result.epsilon == std::sqrt(2.0));
}

TEST_CASE("epsilon falls back to component merge scales without loops") {
    // Three near-collinear points: no dimension >= 1 features at all.
    const distance_matrix d(3, {0.0, 0.5, 1.5,
                                0.5, 0.0, 1.0,
                                1.5, 1.0, 0.0});
    const auto result = optimal_epsilon(d, 2);
    CHECK(result.death_times == std::vector<double>{0.5, 1.0});
    CHECK(result.epsilon == 0.75);
}

TEST_CASE("degenerate bars are excluded from death times unless requested") {
    // Two coincident points: the only finite dim-0 bar has zero length.
    const distance_matrix d(2, {0.0, 0.0, 0.0, 0.0});
    const auto skip = optimal_epsilon(d, 1);
    CHECK(skip.death_times.empty());
    CHECK(skip.epsilon == 0.0);
    const auto keep = optimal_epsilon(d, 1, true);
    CHECK(keep.death_times == std::vector<double>{0.0});
    CHECK(keep.epsilon == 0.0);
}

TEST_CASE("prune removes exactly the isolated variables") {
    const auto dataset = block_dataset();
    const auto d = correlation_to_distance(compute_correlation(dataset));

    SUBCASE("at the pipeline epsilon only the noise variable is isolated") {
        const auto result = run_pipeline(dataset);
        CHECK(result.kept == std::vector<int>{0, 1, 2, 3, 4});
        CHECK(result.pruned == std::vector<int>{5});
        CHECK(result.pruned_dataset.variable_names ==
              std::vector<std::string>{"b0", "b1", "b2", "b3", "b4"});
        // 1 of 6 variables went away: 16.67% reduction.
        CHECK(result.pruned.size() * 6 == result.variable_names.size());
        CHECK(result.epsilon_optimal == doctest::Approx(std::sqrt(0.2)).epsilon(1e-12));
        CHECK(result.epsilon_optimal == median_of(result.death_times_used));
        for (int v : result.kept) CHECK(degree(result.complex_at_epsilon, v) >= 1);
        for (int v : result.pruned) CHECK(degree(result.complex_at_epsilon, v) == 0);
    }

    SUBCASE("epsilon = 2 yields the complete graph and prunes nothing") {
        const auto result = prune(dataset, d, 2.0);
        CHECK(result.pruned.empty());
        CHECK(result.kept.size() == 6);
    }

    SUBCASE("epsilon = 0 with distinct distances empties the dataset") {
        CHECK_THROWS_WITH_AS(prune(dataset, d, 0.0), "empty pruned dataset", degenerate_error);
    }
}

TEST_CASE("two perfectly correlated variables survive at any epsilon") {
    const std::vector<double> a{1, 2, 3, 4};
    std::vector<double> b;
    for (double x : a) b.push_back(2 * x + 1);
    const auto dataset = dataset_from_series({"a", "b"}, {{a, b}});
    const auto d = correlation_to_distance(compute_correlation(dataset));
    CHECK(d(0, 1) == 0.0);
    for (double eps : {0.0, 0.5, 2.0}) {
        const auto result = prune(dataset, d, eps);
        CHECK(result.pruned.empty());
    }
}

TEST_CASE("mutually uncorrelated variables are never partially pruned") {
    // Orthogonal designs: all off-diagonal correlations exactly 0, distances
    // exactly sqrt(2).
    const int T = 8;
    std::vector<std::vector<double>> vars;
    for (int k = 1; k <= 4; ++k) vars.push_back(mix_rows({k}, {1.0}, T));
    const auto dataset = dataset_from_series({"a", "b", "c", "d"}, {vars});
    const auto d = correlation_to_distance(compute_correlation(dataset));

    const auto all_kept = prune(dataset, d, std::sqrt(2.0));
    CHECK(all_kept.pruned.empty());
    CHECK_THROWS_AS(prune(dataset, d, std::nextafter(std::sqrt(2.0), 0.0)), degenerate_error);
}

TEST_CASE("pipeline epsilon is the median of the logged death times") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = random_distances(5 + uniform_int(rng, 3), rng);
        const auto result = optimal_epsilon(d, 3);
        if (!result.death_times.empty()) {
            CHECK(result.epsilon == median_of(result.death_times));
            CHECK(std::is_sorted(result.death_times.begin(), result.death_times.end()));
        }
    }
}

TEST_CASE("increasing epsilon never moves a variable from kept to pruned") {
    std::mt19937_64 rng(42);
    const auto dataset = block_dataset();
    const auto d = correlation_to_distance(compute_correlation(dataset));
    for (int trial = 0; trial < 20; ++trial) {
        double e1 = 2.0 * uniform01(rng);
        double e2 = 2.0 * uniform01(rng);
        if (e1 > e2) std::swap(e1, e2);
        std::vector<int> kept1;
        std::vector<int> kept2;
        try {
            kept1 = prune(dataset, d, e1).kept;
        } catch (const degenerate_error&) {
            continue; // everything isolated at e1: nothing to compare
        }
        kept2 = prune(dataset, d, e2).kept;
        for (int v : kept1) {
            CHECK(std::find(kept2.begin(), kept2.end(), v) != kept2.end());
        }
    }
}

TEST_CASE("pipeline is deterministic for identical dataset bytes") {
    const auto dataset = block_dataset();
    const auto r1 = run_pipeline(dataset);
    const auto r2 = run_pipeline(dataset);
    CHECK(r1.epsilon_optimal == r2.epsilon_optimal);
    CHECK(r1.kept == r2.kept);
    CHECK(r1.death_times_used == r2.death_times_used);
    CHECK(prune_result_to_json(r1, "x") == prune_result_to_json(r2, "x"));
}

TEST_CASE("epsilon override skips the death-time optimization") {
    pipeline_config config;
    config.epsilon_override = 2.0;
    const auto result = run_pipeline(block_dataset(), config);
    CHECK(result.pruned.empty());
    CHECK(result.death_times_used.empty());
    CHECK(result.epsilon_optimal == 2.0);
}

TEST_CASE("prune result JSON lists names and edges") {
    const auto result = run_pipeline(block_dataset());
    const std::string json = prune_result_to_json(result, "cafebabe");
    CHECK(json.find("\"pruned\"") != std::string::npos);
    CHECK(json.find("\"noise\"") != std::string::npos);
    CHECK(json.find("\"config_digest\": \"cafebabe\"") != std::string::npos);
    CHECK(json.find("\"edges\"") != std::string::npos);
    CHECK(json.back() == '\n');
}

TEST_CASE("optimal_epsilon requires at least two variables") {
    const distance_matrix d(1, {0.0});
    CHECK_THROWS_AS(optimal_epsilon(d, 1), validation_error);
}
