#include "topoprune/simplicial_complex.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "topoprune/errors.hpp"
#include "topoprune/union_find.hpp"

namespace topoprune {

simplicial_complex::simplicial_complex(int n_vertices) : n_vertices_(n_vertices) {
    if (n_vertices <= 0) throw validation_error("complex needs at least one vertex");
    faces_.resize(1);
    faces_[0].reserve(static_cast<std::size_t>(n_vertices));
    for (int v = 0; v < n_vertices; ++v) faces_[0].push_back(simplex{{v}});
}

simplicial_complex::simplicial_complex(int n_vertices, std::vector<simplex> faces)
    : n_vertices_(n_vertices) {
    if (n_vertices <= 0) throw validation_error("complex needs at least one vertex");
    for (const auto& s : faces) {
        const int dim = s.dimension();
        if (dim < 0) throw validation_error("empty simplex");
        if (dim >= static_cast<int>(faces_.size())) faces_.resize(static_cast<std::size_t>(dim) + 1);
        faces_[static_cast<std::size_t>(dim)].push_back(s);
    }
    if (faces_.empty()) faces_.resize(1);
    normalize_and_check();
}

void simplicial_complex::normalize_and_check() {
    for (auto& level : faces_) {
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
    }
    while (faces_.size() > 1 && faces_.back().empty()) faces_.pop_back();

    // All vertices must be present as 0-faces.
    if (faces_[0].size() != static_cast<std::size_t>(n_vertices_)) {
        throw validation_error("complex must contain every vertex as a 0-face");
    }
    for (int v = 0; v < n_vertices_; ++v) {
        if (faces_[0][static_cast<std::size_t>(v)].vertices != std::vector<int>{v}) {
            throw validation_error("complex must contain every vertex as a 0-face");
        }
    }

    for (std::size_t d = 0; d < faces_.size(); ++d) {
        if (d > 0 && faces_[d].empty()) throw validation_error("empty dimension below a face");
        for (const auto& s : faces_[d]) {
            if (s.vertices.size() != d + 1) throw validation_error("face stored at wrong dimension");
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                if (s.vertices[i] < 0 || s.vertices[i] >= n_vertices_) {
                    throw validation_error("face vertex out of range");
                }
                if (i > 0 && s.vertices[i] <= s.vertices[i - 1]) {
                    throw validation_error("face vertices must be strictly increasing");
                }
            }
            if (d == 0) continue;
            // Downward closure: every facet must be present one level down.
            simplex facet;
            facet.vertices.resize(d);
            for (std::size_t omit = 0; omit <= d; ++omit) {
                std::size_t w = 0;
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i != omit) facet.vertices[w++] = s.vertices[i];
                }
                if (!std::binary_search(faces_[d - 1].begin(), faces_[d - 1].end(), facet)) {
                    throw validation_error("complex is not downward closed");
                }
            }
        }
    }
}

simplicial_complex simplicial_complex::closure(int n_vertices,
                                               const std::vector<simplex>& generators) {
    std::set<std::vector<int>> all;
    for (int v = 0; v < n_vertices; ++v) all.insert({v});
    for (const auto& g : generators) {
        const std::size_t k = g.vertices.size();
        if (k == 0) throw validation_error("empty simplex");
        if (k > 63) throw validation_error("generator face too large");
        // Every nonempty subset of the generator.
        for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
            std::vector<int> subset;
            for (std::size_t i = 0; i < k; ++i) {
                if (mask & (1ull << i)) subset.push_back(g.vertices[i]);
            }
            all.insert(std::move(subset));
        }
    }
    std::vector<simplex> faces;
    faces.reserve(all.size());
    for (const auto& v : all) faces.push_back(simplex{v});
    return simplicial_complex(n_vertices, std::move(faces));
}

const std::vector<simplex>& simplicial_complex::faces(int dim) const {
    static const std::vector<simplex> empty;
    if (dim < 0 || dim >= static_cast<int>(faces_.size())) return empty;
    return faces_[static_cast<std::size_t>(dim)];
}

bool simplicial_complex::contains(const simplex& s) const {
    const int dim = s.dimension();
    if (dim < 0 || dim >= static_cast<int>(faces_.size())) return false;
    const auto& level = faces_[static_cast<std::size_t>(dim)];
    return std::binary_search(level.begin(), level.end(), s);
}

std::size_t simplicial_complex::n_faces() const {
    std::size_t total = 0;
    for (const auto& level : faces_) total += level.size();
    return total;
}

namespace {

// Depth-first clique extension in lexicographic order; candidates are always
// neighbors of every vertex already chosen, and greater than the last one.
void extend_cliques(const distance_matrix& d, double epsilon, int max_dim,
                    std::vector<int>& current, const std::vector<int>& candidates,
                    std::vector<simplex>& out) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const int v = candidates[i];
        current.push_back(v);
        out.push_back(simplex{current});
        if (static_cast<int>(current.size()) <= max_dim) {
            std::vector<int> next;
            for (std::size_t j = i + 1; j < candidates.size(); ++j) {
                if (d(v, candidates[j]) <= epsilon) next.push_back(candidates[j]);
            }
            if (!next.empty()) extend_cliques(d, epsilon, max_dim, current, next, out);
        }
        current.pop_back();
    }
}

} // namespace

simplicial_complex vietoris_rips(const distance_matrix& d, double epsilon, int max_dim) {
    if (epsilon < 0.0) throw validation_error("epsilon must be non-negative");
    if (max_dim < 0) throw validation_error("max_dim must be non-negative");
    const int n = d.size();
    std::vector<simplex> faces;
    std::vector<int> current;
    for (int v = 0; v < n; ++v) {
        current.assign(1, v);
        faces.push_back(simplex{current});
        if (max_dim >= 1) {
            std::vector<int> candidates;
            for (int w = v + 1; w < n; ++w) {
                if (d(v, w) <= epsilon) candidates.push_back(w);
            }
            if (!candidates.empty()) extend_cliques(d, epsilon, max_dim, current, candidates, faces);
        }
    }
    return simplicial_complex(n, std::move(faces));
}

int degree(const simplicial_complex& c, int v) {
    if (v < 0 || v >= c.n_vertices()) throw std::out_of_range("vertex index out of range");
    int count = 0;
    for (const auto& e : c.faces(1)) {
        if (e.vertices[0] == v || e.vertices[1] == v) ++count;
    }
    return count;
}

std::vector<std::vector<int>> connected_components(const simplicial_complex& c) {
    union_find uf(c.n_vertices());
    for (const auto& e : c.faces(1)) uf.unite(e.vertices[0], e.vertices[1]);
    std::vector<std::vector<int>> by_root(static_cast<std::size_t>(c.n_vertices()));
    for (int v = 0; v < c.n_vertices(); ++v) {
        by_root[static_cast<std::size_t>(uf.find(v))].push_back(v);
    }
    std::vector<std::vector<int>> components;
    for (auto& group : by_root) {
        if (!group.empty()) components.push_back(std::move(group));
    }
    // Groups are collected by root in ascending vertex order, so components
    // are already sorted by their least vertex.
    return components;
}

std::string complex_to_json(const simplicial_complex& c) {
    // A face is maximal when no face one or more dimensions up contains it.
    std::vector<simplex> maximal;
    for (int d = 0; d <= c.max_dimension(); ++d) {
        for (const auto& s : c.faces(d)) {
            bool contained = false;
            for (int hd = d + 1; hd <= c.max_dimension() && !contained; ++hd) {
                for (const auto& big : c.faces(hd)) {
                    if (std::includes(big.vertices.begin(), big.vertices.end(),
                                      s.vertices.begin(), s.vertices.end())) {
                        contained = true;
                        break;
                    }
                }
            }
            if (!contained) maximal.push_back(s);
        }
    }
    std::sort(maximal.begin(), maximal.end(), [](const simplex& a, const simplex& b) {
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
        return a.vertices < b.vertices;
    });
    nlohmann::json doc;
    doc["n_vertices"] = c.n_vertices();
    doc["faces"] = nlohmann::json::array();
    for (const auto& s : maximal) doc["faces"].push_back(s.vertices);
    return doc.dump(2) + "\n";
}

simplicial_complex complex_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("invalid complex JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n_vertices") || !doc.contains("faces")) {
        throw validation_error("complex JSON must contain n_vertices and faces");
    }
    const int n = doc["n_vertices"].get<int>();
    std::vector<simplex> generators;
    for (const auto& item : doc["faces"]) {
        simplex s;
        for (const auto& v : item) s.vertices.push_back(v.get<int>());
        generators.push_back(std::move(s));
    }
    return simplicial_complex::closure(n, generators);
}

} // namespace topoprune
