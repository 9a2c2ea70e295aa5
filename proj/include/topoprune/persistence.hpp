#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "topoprune/correlation.hpp"
#include "topoprune/simplicial_complex.hpp"

namespace topoprune {

inline constexpr double k_infinite_death = std::numeric_limits<double>::infinity();

struct filtration_entry {
    simplex s;
    double appearance; // max pairwise distance among the vertices, 0 for vertices
};

// Simplices ordered so that every face precedes its cofaces and appearance
// values never decrease. build_filtration produces the canonical order
// (appearance, dimension, lexicographic vertices); reduce() accepts any
// order satisfying the two invariants.
struct filtration {
    std::vector<filtration_entry> entries;
};

filtration build_filtration(const distance_matrix& d, int max_dim);

struct persistence_pair {
    int dimension;
    double birth;
    double death; // k_infinite_death for unpaired creators

    bool finite() const { return death != k_infinite_death; }
    bool degenerate() const { return birth == death; }
};

struct barcode {
    std::vector<persistence_pair> pairs; // sorted by (dimension, birth, death)
    int max_dim = 0;
};

// Standard persistence column reduction over the two-element field, with the
// twist-style clearing of columns already known to be creators. Deterministic
// for a fixed entry order; the pair multiset is order-independent.
barcode reduce(const filtration& f);

// Betti numbers beta_0..beta_up_to by Gaussian elimination on explicit
// boundary matrices: beta_p = dim ker d_p - rank d_{p+1}. This is the
// reference route, independent of reduce().
std::vector<int> betti_numbers(const simplicial_complex& c, int up_to);

// Rank of the map H_p(C_i) -> H_p(C_j): bars of dimension p with
// birth <= i and death > j. Throws std::invalid_argument when i > j.
int persistent_betti(const barcode& b, int p, double i, double j);
int persistent_betti(const filtration& f, int p, double i, double j);

// CSV with header dimension,birth,death; infinite deaths as "inf"; rows
// sorted by (dimension, birth, death).
void write_barcode_csv(const barcode& b, std::ostream& out);
std::string barcode_csv_string(const barcode& b);

} // namespace topoprune
