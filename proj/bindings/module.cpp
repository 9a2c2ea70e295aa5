#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

#include "topoprune/correlation.hpp"
#include "topoprune/dataset.hpp"
#include "topoprune/errors.hpp"
#include "topoprune/eval.hpp"
#include "topoprune/persistence.hpp"
#include "topoprune/pruner.hpp"
#include "topoprune/sheaf.hpp"

namespace py = pybind11;
using namespace topoprune;

namespace {

using square = std::vector<std::vector<double>>;

square to_nested(int n, const std::function<double(int, int)>& get) {
    square out(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = get(i, j);
    }
    return out;
}

distance_matrix distances_from_nested(const square& values) {
    const int n = static_cast<int>(values.size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (const auto& row : values) {
        if (row.size() != values.size()) throw validation_error("distance matrix must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return distance_matrix(n, std::move(flat));
}

mts_dataset make_dataset(const std::vector<std::string>& names,
                         const std::vector<std::vector<std::vector<double>>>& instances,
                         const std::optional<std::vector<std::string>>& labels) {
    mts_dataset out;
    out.variable_names = names;
    out.n_vars = static_cast<int>(names.size());
    if (instances.empty() || instances.front().empty()) {
        throw validation_error("instances must be a non-empty [instance][variable][time] nest");
    }
    out.n_timesteps = static_cast<int>(instances.front().front().size());
    for (std::size_t k = 0; k < instances.size(); ++k) {
        out.instance_ids.push_back("i" + std::to_string(k));
        std::vector<double> flat;
        for (const auto& series : instances[k]) flat.insert(flat.end(), series.begin(), series.end());
        out.instances.push_back(std::move(flat));
    }
    if (labels) out.labels = *labels;
    validate_dataset(out);
    return out;
}

std::vector<std::vector<int>> faces_of(const simplicial_complex& c) {
    std::vector<std::vector<int>> out;
    for (int dim = 0; dim <= c.max_dimension(); ++dim) {
        for (const auto& face : c.faces(dim)) out.push_back(face.vertices);
    }
    return out;
}

csv_format format_of(const std::string& text) {
    if (text == "long") return csv_format::long_csv;
    if (text == "wide") return csv_format::wide_csv;
    throw validation_error("format must be 'long' or 'wide'");
}

} // namespace

PYBIND11_MODULE(_topoprune, m) {
    m.doc() = "Unsupervised variable pruning for multivariate time series via persistent "
              "homology over the correlation-derived distance matrix, plus sheaf "
              "consistency features.";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<degenerate_error>(m, "DegenerateError", PyExc_RuntimeError);

    py::class_<mts_dataset>(m, "Dataset")
        .def_readonly("variable_names", &mts_dataset::variable_names)
        .def_readonly("instance_ids", &mts_dataset::instance_ids)
        .def_readonly("n_vars", &mts_dataset::n_vars)
        .def_readonly("n_timesteps", &mts_dataset::n_timesteps)
        .def_property_readonly("n_instances", &mts_dataset::n_instances)
        .def_property_readonly("labels",
                               [](const mts_dataset& d) {
                                   return d.labels ? py::cast(*d.labels) : py::none().cast<py::object>();
                               })
        .def("values",
             [](const mts_dataset& d, int instance) {
                 std::vector<std::vector<double>> out;
                 for (int v = 0; v < d.n_vars; ++v) {
                     std::vector<double> series;
                     for (int t = 0; t < d.n_timesteps; ++t) series.push_back(d.value(instance, v, t));
                     out.push_back(std::move(series));
                 }
                 return out;
             },
             py::arg("instance"), "Readings of one instance as [variable][time].")
        .def("to_long_csv", [](const mts_dataset& d) { return long_csv_string(d); });

    m.def("load_dataset",
          [](const std::string& path, const std::string& format) {
              return load_dataset(path, format_of(format));
          },
          py::arg("path"), py::arg("format") = "long");

    m.def("make_dataset", &make_dataset, py::arg("variable_names"), py::arg("instances"),
          py::arg("labels") = py::none(),
          "Build a dataset from [instance][variable][time] nested values.");

    m.def("correlation",
          [](const mts_dataset& dataset) {
              const auto c = compute_correlation(dataset);
              return to_nested(c.size(), [&](int i, int j) { return c(i, j); });
          },
          py::arg("dataset"), "Averaged per-instance Pearson correlation matrix.");

    m.def("distance",
          [](const mts_dataset& dataset) {
              const auto d = correlation_to_distance(compute_correlation(dataset));
              return to_nested(d.size(), [&](int i, int j) { return d(i, j); });
          },
          py::arg("dataset"), "Correlation-derived distances sqrt(2 * (1 - C)).");

    m.def("correlation_to_distance",
          [](const square& corr) {
              const int n = static_cast<int>(corr.size());
              std::vector<double> flat;
              for (const auto& row : corr) flat.insert(flat.end(), row.begin(), row.end());
              const auto d = correlation_to_distance(correlation_matrix(n, std::move(flat)));
              return to_nested(d.size(), [&](int i, int j) { return d(i, j); });
          },
          py::arg("correlation"));

    m.def("vietoris_rips",
          [](const square& distances, double epsilon, int max_dim) {
              return faces_of(vietoris_rips(distances_from_nested(distances), epsilon, max_dim));
          },
          py::arg("distances"), py::arg("epsilon"), py::arg("max_dim") = 3,
          "All faces (by dimension, lexicographic) of the VR complex.");

    m.def("barcode",
          [](const square& distances, int max_dim) {
              const auto b = reduce(build_filtration(distances_from_nested(distances), max_dim));
              std::vector<std::tuple<int, double, double>> out;
              for (const auto& pair : b.pairs) out.emplace_back(pair.dimension, pair.birth, pair.death);
              return out;
          },
          py::arg("distances"), py::arg("max_dim") = 3,
          "Persistence pairs (dimension, birth, death); death is inf for essential classes.");

    m.def("persistent_betti",
          [](const square& distances, int max_dim, int p, double i, double j) {
              return persistent_betti(build_filtration(distances_from_nested(distances), max_dim),
                                      p, i, j);
          },
          py::arg("distances"), py::arg("max_dim"), py::arg("p"), py::arg("i"), py::arg("j"));

    m.def("betti_numbers",
          [](int n_vertices, const std::vector<std::vector<int>>& faces, int up_to) {
              std::vector<simplex> generators;
              for (const auto& f : faces) generators.push_back(simplex{f});
              return betti_numbers(simplicial_complex::closure(n_vertices, generators), up_to);
          },
          py::arg("n_vertices"), py::arg("faces"), py::arg("up_to"),
          "Betti numbers of the closure of the given faces, by boundary-matrix ranks.");

    m.def("optimal_epsilon",
          [](const square& distances, int max_dim, bool include_degenerate) {
              const auto result = optimal_epsilon(distances_from_nested(distances), max_dim,
                                                  include_degenerate);
              return py::make_tuple(result.epsilon, result.death_times);
          },
          py::arg("distances"), py::arg("max_dim") = 3, py::arg("include_degenerate") = false,
          "Median finite death time and the death-time list it came from.");

    py::class_<prune_result>(m, "PruneResult")
        .def_readonly("epsilon", &prune_result::epsilon_optimal)
        .def_readonly("death_times", &prune_result::death_times_used)
        .def_property_readonly("kept",
                               [](const prune_result& r) {
                                   std::vector<std::string> names;
                                   for (int v : r.kept) names.push_back(r.variable_names[static_cast<std::size_t>(v)]);
                                   return names;
                               })
        .def_property_readonly("pruned",
                               [](const prune_result& r) {
                                   std::vector<std::string> names;
                                   for (int v : r.pruned) names.push_back(r.variable_names[static_cast<std::size_t>(v)]);
                                   return names;
                               })
        .def_property_readonly("edges",
                               [](const prune_result& r) {
                                   std::vector<std::pair<std::string, std::string>> edges;
                                   for (const auto& e : r.complex_at_epsilon.faces(1)) {
                                       edges.emplace_back(
                                           r.variable_names[static_cast<std::size_t>(e.vertices[0])],
                                           r.variable_names[static_cast<std::size_t>(e.vertices[1])]);
                                   }
                                   return edges;
                               })
        .def_readonly("pruned_dataset", &prune_result::pruned_dataset);

    m.def("prune",
          [](const mts_dataset& dataset, std::optional<double> epsilon, int max_dim,
             bool include_degenerate) {
              pipeline_config config;
              config.max_dim = max_dim;
              config.include_degenerate = include_degenerate;
              config.epsilon_override = epsilon;
              return run_pipeline(dataset, config);
          },
          py::arg("dataset"), py::arg("epsilon") = py::none(), py::arg("max_dim") = 3,
          py::arg("include_degenerate") = false,
          "Correlation -> distance -> optimal epsilon -> drop isolated variables.");

    m.def("sheaf_delta",
          [](const std::vector<double>& values) {
              simplex face;
              for (std::size_t v = 0; v < values.size(); ++v) face.vertices.push_back(static_cast<int>(v));
              return delta(face, assignment::scalars(values));
          },
          py::arg("values"),
          "Consistency of one face given its vertex readings: sqrt(tr(cov) / k).");

    m.def("sheaf_features",
          [](const mts_dataset& dataset, double epsilon, int max_dim, bool normalize) {
              const auto d = correlation_to_distance(compute_correlation(dataset));
              const sheaf_complex s{vietoris_rips(d, epsilon, max_dim), 1};
              return sheaf_features(dataset, s, normalize);
          },
          py::arg("dataset"), py::arg("epsilon"), py::arg("max_dim") = 3,
          py::arg("normalize") = true,
          "Append per-face delta channels for the VR complex at epsilon.");

    m.def("evaluate",
          [](const mts_dataset& dataset, const std::string& variant, int folds,
             std::uint64_t seed) {
              split_spec split;
              split.folds = folds;
              split.seed = seed;
              eval_variant v;
              if (variant == "full") {
                  v = eval_variant::full;
              } else if (variant == "pruned") {
                  v = eval_variant::pruned;
              } else if (variant == "pruned_plus_sheaf") {
                  v = eval_variant::pruned_plus_sheaf;
              } else {
                  throw validation_error("variant must be full, pruned or pruned_plus_sheaf");
              }
              const auto result = evaluate(dataset, split, v);
              py::dict out;
              out["variant"] = variant;
              out["folds"] = folds;
              out["accuracy"] = result.overall.accuracy;
              out["precision"] = result.overall.precision;
              out["recall"] = result.overall.recall;
              out["f1"] = result.overall.f1;
              return out;
          },
          py::arg("dataset"), py::arg("variant") = "pruned", py::arg("folds") = 5,
          py::arg("seed") = 42, "Stratified cross-validation with the built-in 1-NN classifier.");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
