#pragma once

#include <vector>

#include "topoprune/dataset.hpp"

namespace topoprune {

// Symmetric n x n Pearson matrix: unit diagonal, entries in [-1, 1].
class correlation_matrix {
public:
    correlation_matrix(int n, std::vector<double> values);
    double operator()(int i, int j) const {
        return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                       static_cast<std::size_t>(j)];
    }
    int size() const { return n_; }

private:
    int n_;
    std::vector<double> values_;
};

// Symmetric n x n dissimilarity matrix: zero diagonal, entries in [0, 2].
class distance_matrix {
public:
    distance_matrix(int n, std::vector<double> values);
    double operator()(int i, int j) const {
        return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                       static_cast<std::size_t>(j)];
    }
    int size() const { return n_; }

private:
    int n_;
    std::vector<double> values_;
};

// Per-instance Pearson correlation over the time axis, averaged across
// instances in fixed instance order. Pairs that are undefined in one
// instance (a constant series) skip that instance; pairs undefined in every
// instance fall back to 0. Variables that are constant in every instance are
// reported through `warnings` when given (and to stderr otherwise).
correlation_matrix compute_correlation(const mts_dataset& dataset,
                                       std::vector<std::string>* warnings = nullptr);

// D_ij = sqrt(2 * (1 - C_ij)): correlation 1 -> distance 0, -1 -> 2, 0 -> sqrt(2).
distance_matrix correlation_to_distance(const correlation_matrix& c);

} // namespace topoprune
