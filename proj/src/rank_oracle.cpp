#include "topoprune/rank_oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace topoprune {

int persistent_betti_bruteforce(const filtration& f, int p, double i, double j) {
    if (i > j) throw std::invalid_argument("persistent_betti requires i <= j");
    if (p < 0) throw std::invalid_argument("negative dimension");

    // Simplices of each relevant dimension, in filtration order.
    std::vector<std::vector<int>> p_faces_j;       // p-simplices alive at j (chain space basis)
    std::vector<std::size_t> p_faces_i;            // indices into p_faces_j alive already at i
    std::vector<std::vector<int>> pm1_faces_i;     // (p-1)-simplices alive at i
    std::vector<std::vector<int>> pp1_faces_j;     // (p+1)-simplices alive at j
    std::map<std::vector<int>, int> p_index_j;

    for (const auto& entry : f.entries) {
        const int dim = entry.s.dimension();
        if (dim == p && entry.appearance <= j) {
            if (entry.appearance <= i) p_faces_i.push_back(p_faces_j.size());
            p_index_j.emplace(entry.s.vertices, static_cast<int>(p_faces_j.size()));
            p_faces_j.push_back(entry.s.vertices);
        } else if (dim == p - 1 && entry.appearance <= i) {
            pm1_faces_i.push_back(entry.s.vertices);
        } else if (dim == p + 1 && entry.appearance <= j) {
            pp1_faces_j.push_back(entry.s.vertices);
        }
    }
    if (p_faces_i.empty()) return 0;

    std::map<std::vector<int>, int> pm1_index;
    for (std::size_t r = 0; r < pm1_faces_i.size(); ++r) {
        pm1_index.emplace(pm1_faces_i[r], static_cast<int>(r));
    }

    auto facets_into = [](const std::vector<int>& verts, auto&& emit) {
        std::vector<int> facet(verts.size() - 1);
        for (std::size_t omit = 0; omit < verts.size(); ++omit) {
            std::size_t w = 0;
            for (std::size_t k = 0; k < verts.size(); ++k) {
                if (k != omit) facet[w++] = verts[k];
            }
            emit(facet);
        }
    };

    // Z_p(C_i): kernel of d_p restricted to C_i, then embedded into the
    // C_j chain coordinates.
    gf2_matrix boundary_p_i(static_cast<int>(pm1_faces_i.size()),
                            static_cast<int>(p_faces_i.size()));
    if (p > 0) {
        for (std::size_t c = 0; c < p_faces_i.size(); ++c) {
            facets_into(p_faces_j[p_faces_i[c]], [&](const std::vector<int>& facet) {
                boundary_p_i.set(pm1_index.at(facet), static_cast<int>(c));
            });
        }
    }
    const gf2_matrix kernel = boundary_p_i.kernel(); // columns over p_faces_i coordinates
    gf2_matrix cycles(static_cast<int>(p_faces_j.size()), kernel.cols());
    for (int c = 0; c < kernel.cols(); ++c) {
        for (int r = 0; r < kernel.rows(); ++r) {
            if (kernel.get(r, c)) cycles.set(static_cast<int>(p_faces_i[static_cast<std::size_t>(r)]), c);
        }
    }

    // B_p(C_j): boundaries of the (p+1)-simplices alive at j.
    gf2_matrix boundaries(static_cast<int>(p_faces_j.size()),
                          static_cast<int>(pp1_faces_j.size()));
    for (std::size_t c = 0; c < pp1_faces_j.size(); ++c) {
        facets_into(pp1_faces_j[c], [&](const std::vector<int>& facet) {
            boundaries.set(p_index_j.at(facet), static_cast<int>(c));
        });
    }

    const int rank_b = boundaries.rank();
    gf2_matrix combined = boundaries;
    combined.append_columns(cycles);
    return combined.rank() - rank_b;
}

std::vector<double> appearance_values(const filtration& f) {
    std::vector<double> values;
    values.reserve(f.entries.size());
    for (const auto& entry : f.entries) values.push_back(entry.appearance);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

} // namespace topoprune
