#include "topoprune/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "topoprune/errors.hpp"
#include "topoprune/text_io.hpp"

namespace topoprune {

namespace {

constexpr double k_variance_guard = 1e-12;

[[noreturn]] void fail(const std::string& source, const std::string& message) {
    throw validation_error(source + ": " + message);
}

struct instance_builder {
    std::string id;
    std::string label;
    bool has_label = false;
    // timestep -> row of variable values
    std::map<int, std::vector<double>> rows;
};

} // namespace

void validate_dataset(const mts_dataset& dataset) {
    if (dataset.n_vars <= 0) throw validation_error("dataset has no variables");
    if (dataset.n_timesteps <= 0) throw validation_error("dataset has no timesteps");
    if (dataset.variable_names.size() != static_cast<std::size_t>(dataset.n_vars)) {
        throw validation_error("variable name count does not match n_vars");
    }
    std::set<std::string> seen;
    for (const auto& name : dataset.variable_names) {
        if (!seen.insert(name).second) {
            throw validation_error("duplicate variable name '" + name + "'");
        }
    }
    if (dataset.instances.empty()) throw validation_error("dataset has no instances");
    if (dataset.instance_ids.size() != dataset.instances.size()) {
        throw validation_error("instance id count does not match instance count");
    }
    const std::size_t expected =
        static_cast<std::size_t>(dataset.n_vars) * static_cast<std::size_t>(dataset.n_timesteps);
    for (std::size_t k = 0; k < dataset.instances.size(); ++k) {
        if (dataset.instances[k].size() != expected) {
            throw validation_error("instance '" + dataset.instance_ids[k] +
                                   "' does not hold n_vars x n_timesteps values");
        }
        for (std::size_t i = 0; i < expected; ++i) {
            if (!std::isfinite(dataset.instances[k][i])) {
                const int var = static_cast<int>(i) / dataset.n_timesteps;
                const int t = static_cast<int>(i) % dataset.n_timesteps;
                throw validation_error("non-finite value at (" + dataset.instance_ids[k] + "," +
                                       dataset.variable_names[static_cast<std::size_t>(var)] +
                                       "," + std::to_string(t) + ")");
            }
        }
    }
    if (dataset.labels && dataset.labels->size() != dataset.instances.size()) {
        throw validation_error("label count does not match instance count");
    }
}

namespace {

mts_dataset parse_long_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) fail(source, "empty input");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "instance" || header[1] != "timestep") {
        fail(source, "long_csv header must start with 'instance,timestep'");
    }

    int label_col = -1;
    std::vector<std::string> names;
    std::vector<int> var_cols;
    for (std::size_t c = 2; c < header.size(); ++c) {
        if (header[c] == "label") {
            if (label_col >= 0) fail(source, "duplicate 'label' column");
            label_col = static_cast<int>(c);
        } else {
            names.push_back(header[c]);
            var_cols.push_back(static_cast<int>(c));
        }
    }
    if (names.empty()) fail(source, "no variable columns in header");

    std::vector<instance_builder> builders;
    std::map<std::string, std::size_t> builder_index;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            fail(source, "line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        }
        const std::string& id = fields[0];
        auto [it, inserted] = builder_index.try_emplace(id, builders.size());
        if (inserted) {
            builders.emplace_back();
            builders.back().id = id;
        }
        instance_builder& b = builders[it->second];

        const std::string where = "line " + std::to_string(line_no);
        const double t_raw = parse_double(fields[1], source + " " + where + " (timestep)");
        const int t = static_cast<int>(t_raw);
        if (t_raw != static_cast<double>(t) || t < 0) {
            fail(source, where + ": timestep must be a non-negative integer");
        }
        if (b.rows.count(t)) {
            fail(source, where + ": duplicate (instance,timestep) row (" + id + "," +
                             std::to_string(t) + ")");
        }
        std::vector<double> row;
        row.reserve(names.size());
        for (std::size_t v = 0; v < var_cols.size(); ++v) {
            row.push_back(parse_double(fields[static_cast<std::size_t>(var_cols[v])],
                                       source + " " + where + " (" + names[v] + ")"));
        }
        b.rows.emplace(t, std::move(row));

        if (label_col >= 0) {
            const std::string& label = fields[static_cast<std::size_t>(label_col)];
            if (!b.has_label) {
                b.label = label;
                b.has_label = true;
            } else if (b.label != label) {
                fail(source, where + ": instance '" + id + "' has inconsistent labels ('" +
                                 b.label + "' vs '" + label + "')");
            }
        }
    }
    if (builders.empty()) fail(source, "no data rows");

    const int n_timesteps = static_cast<int>(builders.front().rows.size());
    mts_dataset dataset;
    dataset.variable_names = names;
    dataset.n_vars = static_cast<int>(names.size());
    dataset.n_timesteps = n_timesteps;
    if (label_col >= 0) dataset.labels.emplace();

    for (auto& b : builders) {
        if (static_cast<int>(b.rows.size()) != n_timesteps) {
            fail(source, "instance '" + b.id + "' has " + std::to_string(b.rows.size()) +
                             " timesteps, expected " + std::to_string(n_timesteps));
        }
        int expected_t = 0;
        for (const auto& [t, row] : b.rows) {
            if (t != expected_t) {
                fail(source, "instance '" + b.id + "' is missing timestep " +
                                 std::to_string(expected_t));
            }
            ++expected_t;
        }
        std::vector<double> values(static_cast<std::size_t>(dataset.n_vars) *
                                   static_cast<std::size_t>(n_timesteps));
        for (const auto& [t, row] : b.rows) {
            for (int v = 0; v < dataset.n_vars; ++v) {
                values[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_timesteps) +
                       static_cast<std::size_t>(t)] = row[static_cast<std::size_t>(v)];
            }
        }
        dataset.instance_ids.push_back(b.id);
        dataset.instances.push_back(std::move(values));
        if (label_col >= 0) dataset.labels->push_back(b.label);
    }
    validate_dataset(dataset);
    return dataset;
}

mts_dataset parse_wide_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) fail(source, "empty input");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "instance") {
        fail(source, "wide_csv header must start with 'instance'");
    }
    const bool has_label = header.size() > 1 && header[1] == "label";
    const std::size_t first_var_col = has_label ? 2 : 1;
    if (first_var_col >= header.size()) fail(source, "no variable columns in header");

    // Columns are <name>__t<k>; every variable must cover exactly t0..t(T-1).
    std::vector<std::string> names;
    std::map<std::string, std::map<int, std::size_t>> columns_by_var;
    for (std::size_t c = first_var_col; c < header.size(); ++c) {
        const std::string& col = header[c];
        const std::size_t sep = col.rfind("__t");
        if (sep == std::string::npos || sep == 0 || sep + 3 >= col.size()) {
            fail(source, "column '" + col + "' is not of the form <var>__t<k>");
        }
        const std::string name = col.substr(0, sep);
        int t = -1;
        try {
            std::size_t used = 0;
            t = std::stoi(col.substr(sep + 3), &used);
            if (used != col.size() - sep - 3) t = -1;
        } catch (const std::exception&) {
            t = -1;
        }
        if (t < 0) fail(source, "column '" + col + "' has an invalid timestep suffix");
        auto [it, inserted] = columns_by_var.try_emplace(name);
        if (inserted) names.push_back(name);
        if (!it->second.emplace(t, c).second) {
            fail(source, "duplicate column '" + col + "'");
        }
    }
    const int n_timesteps = static_cast<int>(columns_by_var.begin()->second.size());
    for (const auto& [name, cols] : columns_by_var) {
        if (static_cast<int>(cols.size()) != n_timesteps) {
            fail(source, "variable '" + name + "' covers " + std::to_string(cols.size()) +
                             " timesteps, expected " + std::to_string(n_timesteps));
        }
        int expected_t = 0;
        for (const auto& [t, c] : cols) {
            if (t != expected_t) {
                fail(source, "variable '" + name + "' is missing timestep " +
                                 std::to_string(expected_t));
            }
            ++expected_t;
        }
    }

    mts_dataset dataset;
    dataset.variable_names = names;
    dataset.n_vars = static_cast<int>(names.size());
    dataset.n_timesteps = n_timesteps;
    if (has_label) dataset.labels.emplace();

    std::set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            fail(source, "line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        }
        const std::string& id = fields[0];
        if (!seen_ids.insert(id).second) {
            fail(source, "line " + std::to_string(line_no) + ": duplicate instance '" + id + "'");
        }
        std::vector<double> values(static_cast<std::size_t>(dataset.n_vars) *
                                   static_cast<std::size_t>(n_timesteps));
        for (int v = 0; v < dataset.n_vars; ++v) {
            const auto& cols = columns_by_var[names[static_cast<std::size_t>(v)]];
            for (const auto& [t, c] : cols) {
                values[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_timesteps) +
                       static_cast<std::size_t>(t)] =
                    parse_double(fields[c], source + " line " + std::to_string(line_no) + " (" +
                                                header[c] + ")");
            }
        }
        dataset.instance_ids.push_back(id);
        dataset.instances.push_back(std::move(values));
        if (has_label) dataset.labels->push_back(fields[1]);
    }
    if (dataset.instances.empty()) fail(source, "no data rows");
    validate_dataset(dataset);
    return dataset;
}

} // namespace

mts_dataset parse_dataset(std::istream& in, csv_format format, const std::string& source_name) {
    return format == csv_format::long_csv ? parse_long_csv(in, source_name)
                                          : parse_wide_csv(in, source_name);
}

mts_dataset load_dataset(const std::filesystem::path& path, csv_format format) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open input file '" + path.string() + "'");
    return parse_dataset(in, format, path.filename().string());
}

void write_long_csv(const mts_dataset& dataset, std::ostream& out) {
    out << "instance,timestep";
    if (dataset.labeled()) out << ",label";
    for (const auto& name : dataset.variable_names) out << ',' << name;
    out << '\n';
    for (int k = 0; k < dataset.n_instances(); ++k) {
        for (int t = 0; t < dataset.n_timesteps; ++t) {
            out << dataset.instance_ids[static_cast<std::size_t>(k)] << ',' << t;
            if (dataset.labeled()) out << ',' << (*dataset.labels)[static_cast<std::size_t>(k)];
            for (int v = 0; v < dataset.n_vars; ++v) {
                out << ',' << format_double(dataset.value(k, v, t));
            }
            out << '\n';
        }
    }
}

std::string long_csv_string(const mts_dataset& dataset) {
    std::ostringstream out;
    write_long_csv(dataset, out);
    return out.str();
}

mts_dataset select_variables(const mts_dataset& dataset, const std::vector<int>& kept) {
    mts_dataset out;
    out.n_vars = static_cast<int>(kept.size());
    out.n_timesteps = dataset.n_timesteps;
    out.instance_ids = dataset.instance_ids;
    out.labels = dataset.labels;
    for (int v : kept) out.variable_names.push_back(dataset.variable_names[static_cast<std::size_t>(v)]);
    for (int k = 0; k < dataset.n_instances(); ++k) {
        std::vector<double> values;
        values.reserve(kept.size() * static_cast<std::size_t>(dataset.n_timesteps));
        for (int v : kept) {
            for (int t = 0; t < dataset.n_timesteps; ++t) values.push_back(dataset.value(k, v, t));
        }
        out.instances.push_back(std::move(values));
    }
    return out;
}

zscore_stats fit_zscore(const mts_dataset& dataset) {
    zscore_stats stats;
    stats.mean.resize(static_cast<std::size_t>(dataset.n_vars), 0.0);
    stats.stddev.resize(static_cast<std::size_t>(dataset.n_vars), 0.0);
    const double count =
        static_cast<double>(dataset.n_instances()) * static_cast<double>(dataset.n_timesteps);
    for (int v = 0; v < dataset.n_vars; ++v) {
        double sum = 0.0;
        for (int k = 0; k < dataset.n_instances(); ++k) {
            for (int t = 0; t < dataset.n_timesteps; ++t) sum += dataset.value(k, v, t);
        }
        const double mean = sum / count;
        double ss = 0.0;
        for (int k = 0; k < dataset.n_instances(); ++k) {
            for (int t = 0; t < dataset.n_timesteps; ++t) {
                const double d = dataset.value(k, v, t) - mean;
                ss += d * d;
            }
        }
        stats.mean[static_cast<std::size_t>(v)] = mean;
        stats.stddev[static_cast<std::size_t>(v)] = std::sqrt(ss / count);
    }
    return stats;
}

double apply_zscore(const zscore_stats& stats, int var, double x) {
    const double s = stats.stddev[static_cast<std::size_t>(var)];
    if (s < k_variance_guard) return 0.0;
    return (x - stats.mean[static_cast<std::size_t>(var)]) / s;
}

} // namespace topoprune
