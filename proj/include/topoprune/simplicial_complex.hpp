#pragma once

#include <string>
#include <vector>

#include "topoprune/correlation.hpp"

namespace topoprune {

// Vertex subset with strictly increasing indices; dimension = size - 1.
struct simplex {
    std::vector<int> vertices;

    int dimension() const { return static_cast<int>(vertices.size()) - 1; }
    bool operator==(const simplex& other) const { return vertices == other.vertices; }
    bool operator<(const simplex& other) const { return vertices < other.vertices; }
};

// Abstract simplicial complex over vertices 0..n-1. Immutable after
// construction; faces are stored per dimension in lexicographic order and
// downward closure is enforced by every constructor path.
class simplicial_complex {
public:
    // Vertices only.
    explicit simplicial_complex(int n_vertices);

    // All faces given explicitly; validates vertex ranges, sortedness and
    // downward closure, and normalizes ordering.
    simplicial_complex(int n_vertices, std::vector<simplex> faces);

    // Downward closure of the given generating faces.
    static simplicial_complex closure(int n_vertices, const std::vector<simplex>& generators);

    int n_vertices() const { return n_vertices_; }
    // Highest dimension with at least one face (0 when only vertices exist).
    int max_dimension() const { return static_cast<int>(faces_.size()) - 1; }
    const std::vector<simplex>& faces(int dim) const;
    bool contains(const simplex& s) const;
    std::size_t n_faces() const;

private:
    int n_vertices_;
    std::vector<std::vector<simplex>> faces_; // faces_[d] sorted lexicographically
    void normalize_and_check();
};

// Every simplex of dimension <= max_dim whose vertices are pairwise within
// `epsilon` (closed threshold). All vertices are included as 0-faces.
simplicial_complex vietoris_rips(const distance_matrix& d, double epsilon, int max_dim);

// Number of 1-faces containing v. Throws std::out_of_range on a bad vertex.
int degree(const simplicial_complex& c, int v);

// Partition of vertices by 1-skeleton connectivity: components sorted by
// least vertex, vertices ascending within each component.
std::vector<std::vector<int>> connected_components(const simplicial_complex& c);

// JSON export of maximal faces only; import rebuilds the closure.
std::string complex_to_json(const simplicial_complex& c);
simplicial_complex complex_from_json(const std::string& text);

} // namespace topoprune
