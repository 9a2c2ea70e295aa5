#pragma once

#include <numeric>
#include <vector>

namespace topoprune {

class union_find {
public:
    explicit union_find(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            // path halving
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }

    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (rank_[static_cast<std::size_t>(x)] < rank_[static_cast<std::size_t>(y)]) std::swap(x, y);
        parent_[static_cast<std::size_t>(y)] = x;
        if (rank_[static_cast<std::size_t>(x)] == rank_[static_cast<std::size_t>(y)]) {
            ++rank_[static_cast<std::size_t>(x)];
        }
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

} // namespace topoprune
