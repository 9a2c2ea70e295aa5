#pragma once

#include <cstdint>
#include <vector>

namespace topoprune {

// Dense matrix over the two-element field, stored as bit-packed columns.
class gf2_matrix {
public:
    gf2_matrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c);
    bool get(int r, int c) const;

    // Appends the columns of `other` (same row count) on the right.
    void append_columns(const gf2_matrix& other);

    // Gaussian elimination over GF(2); both run on a working copy.
    int rank() const;
    // Columns spanning the null space; kernel dimension = result.cols().
    gf2_matrix kernel() const;

private:
    int rows_;
    int cols_;
    int words_;
    std::vector<std::uint64_t> bits_; // column-major, `words_` words per column

    std::uint64_t* column(int c) { return bits_.data() + static_cast<std::size_t>(c) * words_; }
    const std::uint64_t* column(int c) const {
        return bits_.data() + static_cast<std::size_t>(c) * words_;
    }
    static int lowest_set_row(const std::uint64_t* col, int words);
};

} // namespace topoprune
