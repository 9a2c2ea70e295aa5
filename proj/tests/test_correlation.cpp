#include <doctest.h>

#include <cmath>
#include <random>

#include "synthetic.hpp"
#include "topoprune/correlation.hpp"
#include "topoprune/errors.hpp"

using namespace topoprune;
using namespace topoprune::testing;

namespace {

// Independent two-pass Pearson oracle over one instance's time axis.
double pearson_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        mean_a += a[t];
        mean_b += b[t];
    }
    mean_a /= n;
    mean_b /= n;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        cov += (a[t] - mean_a) * (b[t] - mean_b);
        var_a += (a[t] - mean_a) * (a[t] - mean_a);
        var_b += (b[t] - mean_b) * (b[t] - mean_b);
    }
    return (cov / n) / std::sqrt((var_a / n) * (var_b / n));
}

} // namespace

TEST_CASE("perfect linear dependence gives correlation 1 and distance 0") {
    const std::vector<double> a{1, 2, 3, 4};
    std::vector<double> b;
    for (double x : a) b.push_back(2 * x + 1);
    const auto dataset = dataset_from_series({"a", "b"}, {{a, b}});
    const auto c = compute_correlation(dataset);
    CHECK(c(0, 1) == 1.0);
    const auto d = correlation_to_distance(c);
    CHECK(d(0, 1) == 0.0);
}

TEST_CASE("perfect anticorrelation gives -1 and distance 2") {
    const std::vector<double> a{1, 2, 3, 4};
    std::vector<double> b;
    for (double x : a) b.push_back(-x);
    const auto c = compute_correlation(dataset_from_series({"a", "b"}, {{a, b}}));
    CHECK(c(0, 1) == -1.0);
    CHECK(correlation_to_distance(c)(0, 1) == 2.0);
}

TEST_CASE("per-instance correlations average across instances") {
    // Instance 1 is constructed to have Pearson exactly 0.6, instance 2
    // exactly 1.0; the dataset-level value is their mean.
    const std::vector<double> a1{-9, -3, 3, 9};
    const std::vector<double> b1{-13, 9, -9, 13};
    const std::vector<double> a2{0, 1, 2, 3};
    const std::vector<double> b2{0, 2, 4, 6};
    const double r1 = pearson_oracle(a1, b1);
    const double r2 = pearson_oracle(a2, b2);
    CHECK(r1 == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(r2 == doctest::Approx(1.0).epsilon(1e-14));

    const auto dataset = dataset_from_series({"a", "b"}, {{a1, b1}, {a2, b2}});
    const auto c = compute_correlation(dataset);
    CHECK(c(0, 1) == doctest::Approx((r1 + r2) / 2.0).epsilon(1e-15));
    CHECK(c(0, 1) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("distance transform endpoints") {
    const correlation_matrix c(2, {1.0, 0.0, 0.0, 1.0});
    const auto d = correlation_to_distance(c);
    CHECK(d(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(d(0, 0) == 0.0);
}

TEST_CASE("zero-variance variable correlates 0 with everything and warns") {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> konst{5, 5, 5, 5};
    std::vector<std::string> warnings;
    const auto c =
        compute_correlation(dataset_from_series({"a", "k"}, {{a, konst}}), &warnings);
    CHECK(c(0, 1) == 0.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("'k'") != std::string::npos);
    CHECK(correlation_to_distance(c)(0, 1) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("instances where a pair is undefined are skipped for that pair") {
    // Instance 1: b constant (skip); instance 2: correlation 1.
    const auto dataset = dataset_from_series(
        {"a", "b"}, {{{1, 2, 3, 4}, {7, 7, 7, 7}}, {{1, 2, 3, 4}, {2, 4, 6, 8}}});
    std::vector<std::string> warnings;
    const auto c = compute_correlation(dataset, &warnings);
    CHECK(c(0, 1) == 1.0);
    CHECK(warnings.empty()); // b has variance in instance 2
}

TEST_CASE("correlation requires at least two timesteps") {
    const auto dataset = dataset_from_series({"a", "b"}, {{{1}, {2}}});
    CHECK_THROWS_AS(compute_correlation(dataset), validation_error);
}

TEST_CASE("inverting the distance transform recovers the correlation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const double c = 2.0 * uniform01(rng) - 1.0;
        const double d = std::sqrt(2.0 * (1.0 - c));
        CHECK(1.0 - d * d / 2.0 == doctest::Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("distance transform is strictly decreasing in correlation") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        double c1 = 2.0 * uniform01(rng) - 1.0;
        double c2 = 2.0 * uniform01(rng) - 1.0;
        if (c1 == c2) continue;
        if (c1 < c2) std::swap(c1, c2); // c1 > c2
        CHECK(std::sqrt(2.0 * (1.0 - c1)) < std::sqrt(2.0 * (1.0 - c2)));
    }
}

TEST_CASE("compute_correlation is permutation-equivariant") {
    const auto dataset = block_dataset();
    const auto c = compute_correlation(dataset);

    std::mt19937_64 rng(11);
    std::vector<int> perm(static_cast<std::size_t>(dataset.n_vars));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    shuffle_vec(perm, rng);

    const auto permuted = select_variables(dataset, perm);
    const auto cp = compute_correlation(permuted);
    for (int i = 0; i < dataset.n_vars; ++i) {
        for (int j = 0; j < dataset.n_vars; ++j) {
            CHECK(cp(i, j) == c(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
        }
    }
}

TEST_CASE("matrix constructors enforce their invariants") {
    CHECK_THROWS_AS(correlation_matrix(2, {1.0, 0.5, 0.4, 1.0}), validation_error); // asymmetric
    CHECK_THROWS_AS(correlation_matrix(2, {1.0, 1.5, 1.5, 1.0}), validation_error); // out of range
    CHECK_THROWS_AS(correlation_matrix(2, {0.5, 0.0, 0.0, 1.0}), validation_error); // diagonal
    CHECK_THROWS_AS(distance_matrix(2, {0.0, 2.5, 2.5, 0.0}), validation_error);    // out of range
    CHECK_THROWS_AS(distance_matrix(2, {0.5, 1.0, 1.0, 0.0}), validation_error);    // diagonal
}
