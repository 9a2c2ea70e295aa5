#include "topoprune/sheaf.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "topoprune/errors.hpp"

namespace topoprune {

assignment assignment::scalars(std::vector<double> scalar_values) {
    assignment a;
    a.values.reserve(scalar_values.size());
    for (double v : scalar_values) a.values.push_back({v});
    return a;
}

namespace {

void check_assignment(const assignment& a, const sheaf_complex& s) {
    if (a.values.size() != static_cast<std::size_t>(s.base.n_vertices())) {
        throw validation_error("assignment must cover every vertex of the base complex");
    }
    for (const auto& v : a.values) {
        if (v.size() != static_cast<std::size_t>(s.stalk_dim)) {
            throw validation_error("stalk value has wrong dimension");
        }
        for (double x : v) {
            if (!std::isfinite(x)) throw validation_error("stalk value must be finite");
        }
    }
}

} // namespace

double delta(const simplex& face, const assignment& a) {
    const int d = face.dimension();
    if (d < 1) throw validation_error("delta requires a face of dimension >= 1");
    const std::size_t count = face.vertices.size(); // d + 1 samples
    const std::size_t stalk_dim = a.values.at(static_cast<std::size_t>(face.vertices[0])).size();

    // Trace of the population covariance = summed per-coordinate variance.
    double trace = 0.0;
    for (std::size_t coord = 0; coord < stalk_dim; ++coord) {
        double mean = 0.0;
        for (int v : face.vertices) mean += a.values.at(static_cast<std::size_t>(v)).at(coord);
        mean /= static_cast<double>(count);
        double ss = 0.0;
        for (int v : face.vertices) {
            const double dev = a.values.at(static_cast<std::size_t>(v)).at(coord) - mean;
            ss += dev * dev;
        }
        trace += ss / static_cast<double>(count);
    }
    return std::sqrt(trace / static_cast<double>(count));
}

bool c_epsilon(const simplex& face, const assignment& a, double eps) {
    return delta(face, a) <= eps;
}

bool is_global_section(const assignment& a, const sheaf_complex& s) {
    check_assignment(a, s);
    for (const auto& e : s.base.faces(1)) {
        if (a.values[static_cast<std::size_t>(e.vertices[0])] !=
            a.values[static_cast<std::size_t>(e.vertices[1])]) {
            return false;
        }
    }
    return true;
}

double consistency_radius(const assignment& a, const sheaf_complex& s) {
    check_assignment(a, s);
    double radius = 0.0;
    for (int dim = 1; dim <= s.base.max_dimension(); ++dim) {
        for (const auto& face : s.base.faces(dim)) {
            radius = std::max(radius, delta(face, a));
        }
    }
    return radius;
}

consistency_report consistency_filtration(const assignment& a, const sheaf_complex& s) {
    check_assignment(a, s);
    consistency_report report;
    for (int dim = 1; dim <= s.base.max_dimension(); ++dim) {
        for (const auto& face : s.base.faces(dim)) {
            report.deltas.emplace_back(face, delta(face, a));
        }
    }
    report.radius = 0.0;
    for (const auto& [face, value] : report.deltas) report.radius = std::max(report.radius, value);

    report.landmarks.push_back(0.0);
    for (const auto& [face, value] : report.deltas) report.landmarks.push_back(value);
    std::sort(report.landmarks.begin(), report.landmarks.end());
    report.landmarks.erase(std::unique(report.landmarks.begin(), report.landmarks.end()),
                           report.landmarks.end());
    return report;
}

simplicial_complex consistent_subcomplex(const sheaf_complex& s, const assignment& a,
                                         double landmark) {
    check_assignment(a, s);
    std::vector<simplex> faces;
    for (int v = 0; v < s.base.n_vertices(); ++v) faces.push_back(simplex{{v}});

    // Process dimensions upward so a face can require its facets.
    simplicial_complex partial(s.base.n_vertices());
    for (int dim = 1; dim <= s.base.max_dimension(); ++dim) {
        std::vector<simplex> level;
        for (const auto& face : s.base.faces(dim)) {
            if (delta(face, a) > landmark) continue;
            bool facets_ok = true;
            if (dim > 1) {
                std::vector<int> facet(face.vertices.size() - 1);
                for (std::size_t omit = 0; omit < face.vertices.size() && facets_ok; ++omit) {
                    std::size_t w = 0;
                    for (std::size_t k = 0; k < face.vertices.size(); ++k) {
                        if (k != omit) facet[w++] = face.vertices[k];
                    }
                    facets_ok = partial.contains(simplex{facet});
                }
            }
            if (facets_ok) level.push_back(face);
        }
        if (level.empty()) break;
        faces.insert(faces.end(), level.begin(), level.end());
        partial = simplicial_complex(s.base.n_vertices(), faces);
    }
    return simplicial_complex(s.base.n_vertices(), std::move(faces));
}

mts_dataset sheaf_features(const mts_dataset& dataset, const sheaf_complex& s, bool normalize,
                           const zscore_stats* stats) {
    validate_dataset(dataset);
    if (dataset.n_vars != s.base.n_vertices()) {
        throw validation_error("dataset variables do not match complex vertices");
    }
    if (s.stalk_dim != 1) {
        throw validation_error("sheaf features require scalar stalks");
    }

    std::vector<simplex> feature_faces;
    for (int dim = 1; dim <= s.base.max_dimension(); ++dim) {
        for (const auto& face : s.base.faces(dim)) feature_faces.push_back(face);
    }

    mts_dataset out = dataset;
    for (const auto& face : feature_faces) {
        std::string name = "delta";
        for (int v : face.vertices) {
            name += "__" + dataset.variable_names[static_cast<std::size_t>(v)];
        }
        out.variable_names.push_back(name);
    }
    out.n_vars = dataset.n_vars + static_cast<int>(feature_faces.size());
    if (feature_faces.empty()) return out;

    zscore_stats fitted;
    if (normalize && stats == nullptr) {
        fitted = fit_zscore(dataset);
        stats = &fitted;
    }

    const std::size_t T = static_cast<std::size_t>(dataset.n_timesteps);
    for (int k = 0; k < dataset.n_instances(); ++k) {
        auto& values = out.instances[static_cast<std::size_t>(k)];
        values.resize(static_cast<std::size_t>(out.n_vars) * T);
        std::vector<double> readings(static_cast<std::size_t>(dataset.n_vars));
        for (int t = 0; t < dataset.n_timesteps; ++t) {
            for (int v = 0; v < dataset.n_vars; ++v) {
                const double raw = dataset.value(k, v, t);
                readings[static_cast<std::size_t>(v)] =
                    normalize ? apply_zscore(*stats, v, raw) : raw;
            }
            const assignment a = assignment::scalars(readings);
            for (std::size_t fi = 0; fi < feature_faces.size(); ++fi) {
                values[(static_cast<std::size_t>(dataset.n_vars) + fi) * T +
                       static_cast<std::size_t>(t)] = delta(feature_faces[fi], a);
            }
        }
    }
    validate_dataset(out);
    return out;
}

std::string consistency_report_to_json(const consistency_report& report,
                                       const std::vector<std::string>& vertex_names) {
    nlohmann::json doc;
    doc["radius"] = report.radius;
    doc["landmarks"] = report.landmarks;
    doc["deltas"] = nlohmann::json::object();
    for (const auto& [face, value] : report.deltas) {
        std::string key;
        for (std::size_t i = 0; i < face.vertices.size(); ++i) {
            if (i > 0) key += "-";
            key += vertex_names[static_cast<std::size_t>(face.vertices[i])];
        }
        doc["deltas"][key] = value;
    }
    return doc.dump(2) + "\n";
}

} // namespace topoprune
