#pragma once

#include <string>
#include <vector>

#include "topoprune/dataset.hpp"
#include "topoprune/simplicial_complex.hpp"

namespace topoprune {

// Sheaf over a simplicial complex with one stalk per vertex and identity
// restriction maps. Stalks share a uniform dimension (1 by default: each
// vertex carries one scalar variable reading).
struct sheaf_complex {
    simplicial_complex base;
    int stalk_dim = 1;
};

// One stalk value per vertex of the base complex, for a single timestep.
struct assignment {
    std::vector<std::vector<double>> values; // indexed by vertex

    static assignment scalars(std::vector<double> scalar_values);
};

// Consistency function of a face of dimension >= 1: gather the vertex values
// through the identity restrictions, form the population covariance of the
// d+1 samples, and return sqrt(trace / (d+1)).
double delta(const simplex& face, const assignment& a);

// True iff delta(face) <= eps (closed inequality).
bool c_epsilon(const simplex& face, const assignment& a, double eps);

// With identity restrictions an assignment is a global section exactly when
// both endpoints of every edge carry equal values.
bool is_global_section(const assignment& a, const sheaf_complex& s);

// Max delta over all faces of dimension >= 1 (0 when there are none).
double consistency_radius(const assignment& a, const sheaf_complex& s);

struct consistency_report {
    std::vector<std::pair<simplex, double>> deltas; // faces of dim >= 1, (dim, lex) order
    double radius = 0.0;
    std::vector<double> landmarks; // {0} + sorted distinct delta values
};

consistency_report consistency_filtration(const assignment& a, const sheaf_complex& s);

// Subcomplex at a landmark: all vertices, plus every face of dim >= 1 whose
// delta is within the landmark and whose subfaces all qualify too (delta is
// not monotone under inclusion, so closure is enforced explicitly).
simplicial_complex consistent_subcomplex(const sheaf_complex& s, const assignment& a,
                                         double landmark);

// Appends one channel per face of dim >= 1 holding that face's delta at each
// timestep, named delta__<v1>__<v2>[__<v3>...]. Original channels are copied
// bit-for-bit. When normalize is set, readings are z-scored per variable
// before delta; `stats` supplies frozen statistics (e.g. from a training
// split) and defaults to statistics fit on `dataset` itself.
mts_dataset sheaf_features(const mts_dataset& dataset, const sheaf_complex& s, bool normalize,
                           const zscore_stats* stats = nullptr);

std::string consistency_report_to_json(const consistency_report& report,
                                       const std::vector<std::string>& vertex_names);

} // namespace topoprune
