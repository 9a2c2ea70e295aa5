#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "synthetic.hpp"
#include "topoprune/errors.hpp"
#include "topoprune/eval.hpp"

using namespace topoprune;
using namespace topoprune::testing;

namespace {

// Tiny two-class dataset: class "a" near zero, class "b" near ten.
mts_dataset two_blobs(int per_class, double spread = 0.25) {
    std::vector<std::vector<std::vector<double>>> data;
    std::vector<std::string> labels;
    for (int cls = 0; cls < 2; ++cls) {
        for (int k = 0; k < per_class; ++k) {
            const double center = cls == 0 ? 0.0 : 10.0;
            const double offset = spread * k;
            data.push_back({{center + offset, center + 1, center + 2, center - 1},
                            {center - offset, center, center + 1, center + 2}});
            labels.push_back(cls == 0 ? "a" : "b");
        }
    }
    return dataset_from_series({"u", "v"}, data, labels);
}

} // namespace

TEST_CASE("1-NN assigns the label of an identical training instance") {
    const auto train = two_blobs(3);
    mts_dataset test = train;
    test.labels.reset();
    const auto predictions = classify_1nn(train, test);
    CHECK(predictions == *train.labels);
}

TEST_CASE("1-NN picks the nearby class") {
    const auto train = two_blobs(3);
    const auto probe = dataset_from_series({"u", "v"},
                                           {{{0.4, 1.1, 2.2, -0.8}, {0.1, 0.2, 1.1, 2.1}}});
    CHECK(classify_1nn(train, probe) == std::vector<std::string>{"a"});
    const auto far_probe = dataset_from_series({"u", "v"},
                                               {{{10.4, 11.1, 12.2, 8.8}, {10.1, 10.2, 11.1, 12.1}}});
    CHECK(classify_1nn(train, far_probe) == std::vector<std::string>{"b"});
}

TEST_CASE("1-NN ties break toward the lowest training index") {
    // Two training instances with identical values but different labels.
    const auto train = dataset_from_series(
        {"u"}, {{{1.0, 2.0}}, {{1.0, 2.0}}}, {"second?", "first?"});
    const auto probe = dataset_from_series({"u"}, {{{1.0, 2.0}}});
    CHECK(classify_1nn(train, probe) == std::vector<std::string>{"second?"});
}

TEST_CASE("1-NN validates its inputs") {
    const auto train = two_blobs(2);
    auto mismatched = two_blobs(2);
    mismatched.variable_names = {"x", "y"};
    CHECK_THROWS_AS(classify_1nn(train, mismatched), validation_error);

    mts_dataset empty = train;
    empty.instances.clear();
    empty.instance_ids.clear();
    empty.labels->clear();
    CHECK_THROWS_AS(classify_1nn(empty, train), validation_error);
}

TEST_CASE("evaluate is exact on a separable dataset for every variant") {
    const auto dataset = labeled_block_dataset(/*seed=*/3, /*per_class=*/10);
    const split_spec split{0.8, 5, 42};
    for (eval_variant variant :
         {eval_variant::full, eval_variant::pruned, eval_variant::pruned_plus_sheaf}) {
        const auto result = evaluate(dataset, split, variant);
        CHECK(result.overall.accuracy == 1.0);
        CHECK(result.overall.precision == 1.0);
        CHECK(result.overall.recall == 1.0);
        CHECK(result.overall.f1 == 1.0);
        REQUIRE(result.per_fold.size() == 5);
        REQUIRE(result.per_fold_kept.size() == 5);
    }
}

TEST_CASE("pruning the noise variable never costs more than 0.02 accuracy") {
    const auto dataset = labeled_block_dataset(/*seed=*/0, /*per_class=*/10);
    const split_spec split{0.8, 5, 42};
    const auto full = evaluate(dataset, split, eval_variant::full);
    const auto pruned = evaluate(dataset, split, eval_variant::pruned);
    CHECK(pruned.overall.accuracy >= full.overall.accuracy - 0.02);
    // The training-fold pipelines must drop exactly the noise channel.
    for (const auto& kept : pruned.per_fold_kept) {
        CHECK(kept == std::vector<std::string>{"b0", "b1", "b2", "b3", "b4"});
    }
}

TEST_CASE("constant appended channels leave the metrics untouched") {
    // Two identical variables: the pipeline keeps both at epsilon 0 and the
    // delta channel is constant zero, which z-scoring maps to all-zeros.
    std::vector<std::vector<std::vector<double>>> data;
    std::vector<std::string> labels;
    for (int cls = 0; cls < 2; ++cls) {
        for (int k = 0; k < 8; ++k) {
            const double center = cls == 0 ? 0.0 : 5.0;
            std::vector<double> series{center + 0.1 * k, center + 1, center + 2, center + 3};
            data.push_back({series, series});
            labels.push_back(cls == 0 ? "a" : "b");
        }
    }
    const auto dataset = dataset_from_series({"u", "u_copy"}, data, labels);
    const split_spec split{0.8, 4, 7};
    const auto pruned = evaluate(dataset, split, eval_variant::pruned);
    const auto with_sheaf = evaluate(dataset, split, eval_variant::pruned_plus_sheaf);
    REQUIRE(pruned.per_fold.size() == with_sheaf.per_fold.size());
    for (std::size_t fold = 0; fold < pruned.per_fold.size(); ++fold) {
        CHECK(pruned.per_fold[fold].accuracy == with_sheaf.per_fold[fold].accuracy);
        CHECK(pruned.per_fold[fold].precision == with_sheaf.per_fold[fold].precision);
        CHECK(pruned.per_fold[fold].recall == with_sheaf.per_fold[fold].recall);
    }
    CHECK(pruned.overall.accuracy == with_sheaf.overall.accuracy);
}

TEST_CASE("pruning decisions never look at the test fold") {
    const auto baseline = labeled_block_dataset(/*seed=*/5, /*per_class=*/8);
    const split_spec split{0.8, 4, 11};
    const auto reference = evaluate(baseline, split, eval_variant::pruned);

    // Reproduce the fold assignment (seeded per-class shuffle, round-robin)
    // to find a fold, then corrupt one of its test instances.
    std::map<std::string, std::vector<int>> by_class;
    for (int k = 0; k < baseline.n_instances(); ++k) {
        by_class[(*baseline.labels)[static_cast<std::size_t>(k)]].push_back(k);
    }
    std::vector<int> fold_of(static_cast<std::size_t>(baseline.n_instances()), 0);
    std::uint64_t class_index = 0;
    for (auto& [label, members] : by_class) {
        std::mt19937_64 rng(split.seed * 0x9e3779b97f4a7c15ull + class_index);
        for (std::size_t i = members.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(members[i - 1], members[j]);
        }
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            fold_of[static_cast<std::size_t>(members[pos])] =
                static_cast<int>(pos % static_cast<std::size_t>(split.folds));
        }
        ++class_index;
    }

    const int victim = 0;
    const int victim_fold = fold_of[victim];
    mts_dataset corrupted = baseline;
    // Wild values that would wreck every correlation were they in training.
    std::mt19937_64 noise(99);
    for (double& x : corrupted.instances[victim]) x = 1000.0 * uniform01(noise) - 500.0;

    const auto perturbed = evaluate(corrupted, split, eval_variant::pruned);
    // The fold where the victim sits in the *test* half must make the same
    // pruning decision as before.
    CHECK(perturbed.per_fold_kept[static_cast<std::size_t>(victim_fold)] ==
          reference.per_fold_kept[static_cast<std::size_t>(victim_fold)]);
}

TEST_CASE("metrics are deterministic given dataset and seed") {
    const auto dataset = labeled_block_dataset(/*seed=*/1, /*per_class=*/8);
    const split_spec split{0.8, 4, 13};
    const auto r1 = evaluate(dataset, split, eval_variant::pruned_plus_sheaf);
    const auto r2 = evaluate(dataset, split, eval_variant::pruned_plus_sheaf);
    CHECK(metrics_to_json(r1, "d") == metrics_to_json(r2, "d"));
}

TEST_CASE("f1 is the harmonic mean of macro precision and recall") {
    // Unbalanced predictions so precision != recall.
    auto skewed = two_blobs(4, 2.6);
    const split_spec split{0.8, 2, 3};
    for (eval_variant variant : {eval_variant::full, eval_variant::pruned}) {
        const auto result = evaluate(skewed, split, variant);
        const double p = result.overall.precision;
        const double r = result.overall.recall;
        const double expected = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        CHECK(result.overall.f1 == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("evaluate validates folds, labels and class coverage") {
    const auto dataset = two_blobs(3);
    CHECK_THROWS_AS(evaluate(dataset, split_spec{0.8, 1, 0}, eval_variant::full),
                    validation_error);
    CHECK_THROWS_AS(evaluate(dataset, split_spec{1.5, 2, 0}, eval_variant::full),
                    validation_error);

    auto unlabeled = dataset;
    unlabeled.labels.reset();
    CHECK_THROWS_AS(evaluate(unlabeled, split_spec{0.8, 2, 0}, eval_variant::full),
                    validation_error);

    // A class with a single instance must be absent from one training fold.
    auto lonely = dataset;
    (*lonely.labels)[0] = "lonely";
    CHECK_THROWS_AS(evaluate(lonely, split_spec{0.8, 3, 0}, eval_variant::full),
                    validation_error);
}

TEST_CASE("metrics JSON is sorted, newline-terminated and complete") {
    const auto dataset = labeled_block_dataset(2, 6);
    const auto result = evaluate(dataset, split_spec{0.8, 3, 5}, eval_variant::full);
    const std::string json = metrics_to_json(result, "beef");
    CHECK(json.find("\"variant\": \"full\"") != std::string::npos);
    CHECK(json.find("\"folds\": 3") != std::string::npos);
    CHECK(json.find("\"per_fold\"") != std::string::npos);
    CHECK(json.find("\"config_digest\": \"beef\"") != std::string::npos);
    CHECK(json.back() == '\n');
    CHECK(json.find("\"accuracy\"") < json.find("\"config_digest\""));
    CHECK(json.find("\"config_digest\"") < json.find("\"f1\""));
}
