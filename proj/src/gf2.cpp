#include "topoprune/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace topoprune {

gf2_matrix::gf2_matrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_((rows + 63) / 64) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
    if (words_ == 0) words_ = 1; // keep column pointers valid for 0-row matrices
    bits_.assign(static_cast<std::size_t>(cols) * static_cast<std::size_t>(words_), 0);
}

void gf2_matrix::set(int r, int c) {
    column(c)[r >> 6] ^= (1ull << (r & 63));
}

bool gf2_matrix::get(int r, int c) const {
    return (column(c)[r >> 6] >> (r & 63)) & 1ull;
}

void gf2_matrix::append_columns(const gf2_matrix& other) {
    if (other.rows_ != rows_) throw std::invalid_argument("row count mismatch");
    if (other.words_ != words_) throw std::invalid_argument("word count mismatch");
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    cols_ += other.cols_;
}

int gf2_matrix::lowest_set_row(const std::uint64_t* col, int words) {
    for (int w = 0; w < words; ++w) {
        if (col[w]) return w * 64 + std::countr_zero(col[w]);
    }
    return -1;
}

int gf2_matrix::rank() const {
    gf2_matrix work(*this);
    std::vector<int> pivot_of_row(static_cast<std::size_t>(rows_), -1);
    int rank = 0;
    for (int c = 0; c < work.cols_; ++c) {
        std::uint64_t* col = work.column(c);
        int low = lowest_set_row(col, work.words_);
        while (low >= 0 && pivot_of_row[static_cast<std::size_t>(low)] >= 0) {
            const std::uint64_t* pc = work.column(pivot_of_row[static_cast<std::size_t>(low)]);
            for (int w = 0; w < work.words_; ++w) col[w] ^= pc[w];
            low = lowest_set_row(col, work.words_);
        }
        if (low >= 0) {
            pivot_of_row[static_cast<std::size_t>(low)] = c;
            ++rank;
        }
    }
    return rank;
}

gf2_matrix gf2_matrix::kernel() const {
    // Eliminate columns while tracking the combination applied to each; a
    // column that reduces to zero yields its combination as a kernel vector.
    gf2_matrix work(*this);
    gf2_matrix combo(cols_, cols_);
    for (int c = 0; c < cols_; ++c) combo.set(c, c);

    std::vector<int> pivot_of_row(static_cast<std::size_t>(rows_), -1);
    std::vector<int> kernel_cols;
    for (int c = 0; c < cols_; ++c) {
        std::uint64_t* col = work.column(c);
        int low = lowest_set_row(col, work.words_);
        while (low >= 0 && pivot_of_row[static_cast<std::size_t>(low)] >= 0) {
            const int pc = pivot_of_row[static_cast<std::size_t>(low)];
            const std::uint64_t* src = work.column(pc);
            for (int w = 0; w < work.words_; ++w) col[w] ^= src[w];
            const std::uint64_t* csrc = combo.column(pc);
            std::uint64_t* cdst = combo.column(c);
            for (int w = 0; w < combo.words_; ++w) cdst[w] ^= csrc[w];
            low = lowest_set_row(col, work.words_);
        }
        if (low >= 0) {
            pivot_of_row[static_cast<std::size_t>(low)] = c;
        } else {
            kernel_cols.push_back(c);
        }
    }

    gf2_matrix result(cols_, static_cast<int>(kernel_cols.size()));
    for (std::size_t k = 0; k < kernel_cols.size(); ++k) {
        const std::uint64_t* src = combo.column(kernel_cols[k]);
        std::uint64_t* dst = result.column(static_cast<int>(k));
        for (int w = 0; w < result.words_; ++w) dst[w] = src[w];
    }
    return result;
}

} // namespace topoprune
