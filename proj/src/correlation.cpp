#include "topoprune/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "topoprune/errors.hpp"

namespace topoprune {

namespace {

void check_square(int n, std::size_t count, const char* what) {
    if (n <= 0 || count != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw validation_error(std::string(what) + " must hold n*n values");
    }
}

} // namespace

correlation_matrix::correlation_matrix(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    check_square(n, values_.size(), "correlation matrix");
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
                throw validation_error("correlation entry out of [-1, 1]");
            }
            if (v != (*this)(j, i)) throw validation_error("correlation matrix not symmetric");
        }
        if ((*this)(i, i) != 1.0) throw validation_error("correlation diagonal must be 1");
    }
}

distance_matrix::distance_matrix(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    check_square(n, values_.size(), "distance matrix");
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > 2.0) {
                throw validation_error("distance entry out of [0, 2]");
            }
            if (v != (*this)(j, i)) throw validation_error("distance matrix not symmetric");
        }
        if ((*this)(i, i) != 0.0) throw validation_error("distance diagonal must be 0");
    }
}

correlation_matrix compute_correlation(const mts_dataset& dataset,
                                       std::vector<std::string>* warnings) {
    if (dataset.n_timesteps < 2) {
        throw validation_error("correlation requires at least 2 timesteps");
    }
    const int n = dataset.n_vars;
    const int n_inst = dataset.n_instances();
    const int T = dataset.n_timesteps;

    // Two-pass mean/covariance per instance; a variable with zero variance in
    // an instance makes all its pairs undefined for that instance.
    std::vector<double> means(static_cast<std::size_t>(n));
    std::vector<double> variances(static_cast<std::size_t>(n));
    std::vector<double> sum(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    std::vector<int> valid(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    std::vector<bool> ever_defined(static_cast<std::size_t>(n), false);

    for (int k = 0; k < n_inst; ++k) {
        for (int v = 0; v < n; ++v) {
            double s = 0.0;
            for (int t = 0; t < T; ++t) s += dataset.value(k, v, t);
            means[static_cast<std::size_t>(v)] = s / T;
            double ss = 0.0;
            for (int t = 0; t < T; ++t) {
                const double d = dataset.value(k, v, t) - means[static_cast<std::size_t>(v)];
                ss += d * d;
            }
            variances[static_cast<std::size_t>(v)] = ss / T;
            if (variances[static_cast<std::size_t>(v)] > 0.0) {
                ever_defined[static_cast<std::size_t>(v)] = true;
            }
        }
        for (int i = 0; i < n; ++i) {
            if (variances[static_cast<std::size_t>(i)] <= 0.0) continue;
            for (int j = i + 1; j < n; ++j) {
                if (variances[static_cast<std::size_t>(j)] <= 0.0) continue;
                double cov = 0.0;
                for (int t = 0; t < T; ++t) {
                    cov += (dataset.value(k, i, t) - means[static_cast<std::size_t>(i)]) *
                           (dataset.value(k, j, t) - means[static_cast<std::size_t>(j)]);
                }
                cov /= T;
                const double r = cov / std::sqrt(variances[static_cast<std::size_t>(i)] *
                                                 variances[static_cast<std::size_t>(j)]);
                const std::size_t idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                        static_cast<std::size_t>(j);
                sum[idx] += r;
                valid[idx] += 1;
            }
        }
    }

    for (int v = 0; v < n; ++v) {
        if (!ever_defined[static_cast<std::size_t>(v)]) {
            const std::string message = "variable '" +
                                        dataset.variable_names[static_cast<std::size_t>(v)] +
                                        "' has zero variance; its correlations default to 0";
            if (warnings) {
                warnings->push_back(message);
            } else {
                std::cerr << "[warn] " << message << '\n';
            }
        }
    }

    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(i)] = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const std::size_t idx =
                static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
            double r = valid[idx] > 0 ? sum[idx] / valid[idx] : 0.0;
            r = std::clamp(r, -1.0, 1.0);
            values[idx] = r;
            values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(i)] = r;
        }
    }
    return correlation_matrix(n, std::move(values));
}

distance_matrix correlation_to_distance(const correlation_matrix& c) {
    const int n = c.size();
    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(j)] =
                i == j ? 0.0 : std::sqrt(2.0 * (1.0 - c(i, j)));
        }
    }
    return distance_matrix(n, std::move(values));
}

} // namespace topoprune
