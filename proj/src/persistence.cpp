#include "topoprune/persistence.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "topoprune/errors.hpp"
#include "topoprune/gf2.hpp"
#include "topoprune/text_io.hpp"

namespace topoprune {

namespace {

double diameter(const distance_matrix& d, const std::vector<int>& vertices) {
    double best = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            best = std::max(best, d(vertices[i], vertices[j]));
        }
    }
    return best;
}

void enumerate_subsets(const distance_matrix& d, int max_dim, std::vector<int>& current,
                       int next, filtration& out) {
    const int n = d.size();
    for (int v = next; v < n; ++v) {
        current.push_back(v);
        out.entries.push_back({simplex{current}, diameter(d, current)});
        if (static_cast<int>(current.size()) <= max_dim) {
            enumerate_subsets(d, max_dim, current, v + 1, out);
        }
        current.pop_back();
    }
}

} // namespace

filtration build_filtration(const distance_matrix& d, int max_dim) {
    if (max_dim < 0) throw validation_error("max_dim must be non-negative");
    filtration f;
    std::vector<int> current;
    enumerate_subsets(d, max_dim, current, 0, f);
    std::sort(f.entries.begin(), f.entries.end(),
              [](const filtration_entry& a, const filtration_entry& b) {
                  if (a.appearance != b.appearance) return a.appearance < b.appearance;
                  if (a.s.dimension() != b.s.dimension()) return a.s.dimension() < b.s.dimension();
                  return a.s.vertices < b.s.vertices;
              });
    return f;
}

barcode reduce(const filtration& f) {
    const std::size_t n = f.entries.size();

    // Positions of simplices in the given order, keyed by vertex set.
    std::map<std::vector<int>, std::uint32_t> position;
    int max_dim = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!position.emplace(f.entries[j].s.vertices, static_cast<std::uint32_t>(j)).second) {
            throw validation_error("filtration contains a duplicate simplex");
        }
        max_dim = std::max(max_dim, f.entries[j].s.dimension());
        if (j > 0 && f.entries[j].appearance < f.entries[j - 1].appearance) {
            throw validation_error("filtration appearance values must be non-decreasing");
        }
    }

    // Boundary of entry j as sorted positions of its facets.
    auto boundary = [&](std::size_t j) {
        const auto& verts = f.entries[j].s.vertices;
        std::vector<std::uint32_t> col;
        if (verts.size() < 2) return col;
        std::vector<int> facet(verts.size() - 1);
        for (std::size_t omit = 0; omit < verts.size(); ++omit) {
            std::size_t w = 0;
            for (std::size_t i = 0; i < verts.size(); ++i) {
                if (i != omit) facet[w++] = verts[i];
            }
            auto it = position.find(facet);
            if (it == position.end() || it->second >= j) {
                throw validation_error("filtration is missing a face before its coface");
            }
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
        return col;
    };

    std::vector<std::vector<std::uint32_t>> reduced(n); // destroyer columns, keyed by pivot
    std::vector<std::uint32_t> pivot_owner(n, UINT32_MAX);
    std::vector<char> cleared(n, 0); // creators already paired by a higher dimension
    std::vector<char> is_destroyer(n, 0);

    barcode result;
    result.max_dim = max_dim;

    // Reduce dimensions top-down: once a column pairs with pivot i, simplex i
    // is a known creator and its own column never needs reducing.
    std::vector<std::uint32_t> scratch;
    for (int dim = max_dim; dim >= 1; --dim) {
        for (std::size_t j = 0; j < n; ++j) {
            if (f.entries[j].s.dimension() != dim || cleared[j]) continue;
            std::vector<std::uint32_t> col = boundary(j);
            while (!col.empty()) {
                const std::uint32_t piv = col.back();
                const std::uint32_t owner = pivot_owner[piv];
                if (owner == UINT32_MAX) break;
                const auto& other = reduced[owner];
                scratch.clear();
                std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                              std::back_inserter(scratch));
                col.swap(scratch);
            }
            if (!col.empty()) {
                const std::uint32_t piv = col.back();
                pivot_owner[piv] = static_cast<std::uint32_t>(j);
                cleared[piv] = 1;
                is_destroyer[j] = 1;
                result.pairs.push_back({dim - 1, f.entries[piv].appearance, f.entries[j].appearance});
                reduced[static_cast<std::size_t>(j)] = std::move(col);
            }
        }
    }

    // Whatever is neither a destroyer nor a paired creator never dies.
    for (std::size_t j = 0; j < n; ++j) {
        if (!cleared[j] && !is_destroyer[j]) {
            result.pairs.push_back({f.entries[j].s.dimension(), f.entries[j].appearance,
                                    k_infinite_death});
        }
    }

    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const persistence_pair& a, const persistence_pair& b) {
                  if (a.dimension != b.dimension) return a.dimension < b.dimension;
                  if (a.birth != b.birth) return a.birth < b.birth;
                  return a.death < b.death;
              });
    return result;
}

namespace {

gf2_matrix boundary_matrix(const simplicial_complex& c, int p) {
    const auto& rows = c.faces(p - 1);
    const auto& cols = c.faces(p);
    gf2_matrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    std::map<std::vector<int>, int> row_index;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        row_index.emplace(rows[r].vertices, static_cast<int>(r));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto& verts = cols[j].vertices;
        std::vector<int> facet(verts.size() - 1);
        for (std::size_t omit = 0; omit < verts.size(); ++omit) {
            std::size_t w = 0;
            for (std::size_t i = 0; i < verts.size(); ++i) {
                if (i != omit) facet[w++] = verts[i];
            }
            m.set(row_index.at(facet), static_cast<int>(j));
        }
    }
    return m;
}

} // namespace

std::vector<int> betti_numbers(const simplicial_complex& c, int up_to) {
    if (up_to < 0 || up_to > c.max_dimension()) {
        throw std::invalid_argument("up_to exceeds the maximum available dimension");
    }
    std::vector<int> betti;
    int rank_dp = 0; // rank of d_p; zero for p = 0
    for (int p = 0; p <= up_to; ++p) {
        const int n_p = static_cast<int>(c.faces(p).size());
        const int rank_next =
            p + 1 <= c.max_dimension() ? boundary_matrix(c, p + 1).rank() : 0;
        betti.push_back(n_p - rank_dp - rank_next);
        rank_dp = rank_next;
    }
    return betti;
}

int persistent_betti(const barcode& b, int p, double i, double j) {
    if (i > j) throw std::invalid_argument("persistent_betti requires i <= j");
    int count = 0;
    for (const auto& pair : b.pairs) {
        if (pair.dimension == p && pair.birth <= i && pair.death > j) ++count;
    }
    return count;
}

int persistent_betti(const filtration& f, int p, double i, double j) {
    return persistent_betti(reduce(f), p, i, j);
}

void write_barcode_csv(const barcode& b, std::ostream& out) {
    out << "dimension,birth,death\n";
    for (const auto& pair : b.pairs) {
        out << pair.dimension << ',' << format_double(pair.birth) << ','
            << format_double(pair.death) << '\n';
    }
}

std::string barcode_csv_string(const barcode& b) {
    std::ostringstream out;
    write_barcode_csv(b, out);
    return out.str();
}

} // namespace topoprune
