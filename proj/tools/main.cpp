// Command-line pipeline: persistence, prune, sheaf, evaluate, pipeline.
//
// Exit codes: 0 success, 2 input validation failure, 3 degenerate pipeline
// state (e.g. pruning removed everything), 4 output I/O failure.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "topoprune/correlation.hpp"
#include "topoprune/dataset.hpp"
#include "topoprune/errors.hpp"
#include "topoprune/eval.hpp"
#include "topoprune/persistence.hpp"
#include "topoprune/pruner.hpp"
#include "topoprune/rank_oracle.hpp"
#include "topoprune/sheaf.hpp"
#include "topoprune/text_io.hpp"

namespace fs = std::filesystem;
using namespace topoprune;

namespace {

struct run_config {
    std::string input;
    std::string format = "long";
    int max_dim = 3;
    std::optional<double> epsilon;
    std::string prune_result_path;
    bool no_normalize_sheaf = false;
    bool include_degenerate = false;
    int folds = 5;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    bool require_edges = false;
};

void log_info(const std::string& message) {
    std::cerr << "[info] " << message << '\n';
}

void log_warn(const std::string& message) {
    std::cerr << "[warn] " << message << '\n';
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out = "[";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out + "]";
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    return out + "]";
}

csv_format parse_format(const std::string& text) {
    if (text == "long") return csv_format::long_csv;
    if (text == "wide") return csv_format::wide_csv;
    throw validation_error("unknown format '" + text + "' (expected long or wide)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open input file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// All outputs are staged as temp files first and renamed on commit, so a
// failure never leaves partially written files behind.
class output_stage {
public:
    explicit output_stage(const fs::path& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) {
            throw io_error("cannot create output directory '" + dir_.string() + "'");
        }
    }

    output_stage(const output_stage&) = delete;
    output_stage& operator=(const output_stage&) = delete;

    ~output_stage() { discard(); }

    void add(const std::string& name, const std::string& content) {
        const fs::path tmp = dir_ / (name + ".tmp-" + std::to_string(::getpid()));
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw io_error("cannot write to output directory '" + dir_.string() + "'");
        }
        out << content;
        out.flush();
        if (!out.good()) {
            out.close();
            throw io_error("failed writing '" + tmp.string() + "'");
        }
        staged_.emplace_back(tmp, dir_ / name);
    }

    void commit() {
        for (auto& [tmp, final_path] : staged_) {
            std::error_code ec;
            fs::rename(tmp, final_path, ec);
            if (ec) {
                throw io_error("failed to finalize '" + final_path.string() +
                               "': " + ec.message());
            }
            tmp.clear();
        }
        staged_.clear();
    }

private:
    fs::path dir_;
    std::vector<std::pair<fs::path, fs::path>> staged_;

    void discard() {
        for (const auto& [tmp, final_path] : staged_) {
            if (tmp.empty()) continue;
            std::error_code ec;
            fs::remove(tmp, ec);
        }
        staged_.clear();
    }
};

std::string config_digest(const std::string& subcommand, const run_config& cfg,
                          const std::string& input_bytes) {
    std::string canonical = "cmd=" + subcommand;
    canonical += ";format=" + cfg.format;
    canonical += ";max_dim=" + std::to_string(cfg.max_dim);
    canonical += ";epsilon=" + (cfg.epsilon ? format_double(*cfg.epsilon) : "auto");
    canonical += ";normalize_sheaf=" + std::to_string(!cfg.no_normalize_sheaf);
    canonical += ";include_degenerate=" + std::to_string(cfg.include_degenerate);
    canonical += ";folds=" + std::to_string(cfg.folds);
    canonical += ";seed=" + std::to_string(cfg.seed);
    canonical += ";require_edges=" + std::to_string(cfg.require_edges);
    canonical += ";input=";
    canonical += input_bytes;
    return to_hex(fnv1a64(canonical));
}

pipeline_config to_pipeline_config(const run_config& cfg) {
    pipeline_config out;
    out.max_dim = cfg.max_dim;
    out.include_degenerate = cfg.include_degenerate;
    out.epsilon_override = cfg.epsilon;
    out.normalize_sheaf = !cfg.no_normalize_sheaf;
    return out;
}

mts_dataset load_input(const run_config& cfg, std::string& input_bytes) {
    input_bytes = read_file(cfg.input);
    std::istringstream in(input_bytes);
    return parse_dataset(in, parse_format(cfg.format), fs::path(cfg.input).filename().string());
}

// Resolves the epsilon for the sheaf stage from --epsilon, a prior prune
// result, or the inline optimization (in that order of precedence).
void resolve_epsilon(run_config& cfg) {
    if (cfg.epsilon || cfg.prune_result_path.empty()) return;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(cfg.prune_result_path));
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("invalid prune result JSON: " + std::string(e.what()));
    }
    if (!doc.contains("epsilon") || !doc["epsilon"].is_number()) {
        throw validation_error("prune result JSON lacks a numeric 'epsilon'");
    }
    cfg.epsilon = doc["epsilon"].get<double>();
}

void log_prune(const prune_result& result) {
    log_info("death_times = " + join_doubles(result.death_times_used));
    log_info("epsilon = " + format_double(result.epsilon_optimal));
    std::vector<std::string> kept_names;
    std::vector<std::string> pruned_names;
    for (int v : result.kept) kept_names.push_back(result.variable_names[static_cast<std::size_t>(v)]);
    for (int v : result.pruned) {
        pruned_names.push_back(result.variable_names[static_cast<std::size_t>(v)]);
    }
    log_info("kept = " + join_names(kept_names));
    log_info("pruned = " + join_names(pruned_names));
}

struct sheaf_stage_output {
    mts_dataset augmented;
    sheaf_complex complex;
    std::string consistency_json;
};

// Sheaf stage over an already-pruned dataset: rebuild the distance matrix on
// the kept variables (identical to restricting the original one), take the
// VR complex at the pruning epsilon, and append per-face delta channels.
sheaf_stage_output run_sheaf_stage(const mts_dataset& pruned, double epsilon,
                                   const run_config& cfg, const std::string& digest) {
    const correlation_matrix c = compute_correlation(pruned);
    const distance_matrix d = correlation_to_distance(c);
    sheaf_complex s{vietoris_rips(d, epsilon, cfg.max_dim), 1};

    std::size_t face_count = 0;
    for (int dim = 1; dim <= s.base.max_dimension(); ++dim) face_count += s.base.faces(dim).size();
    if (face_count == 0) {
        if (cfg.require_edges) {
            throw degenerate_error("pruned complex has no faces of dimension >= 1");
        }
        log_warn("pruned complex has no faces of dimension >= 1; no channels appended");
    }

    sheaf_stage_output out{sheaf_features(pruned, s, !cfg.no_normalize_sheaf), std::move(s), ""};

    // Radius distribution over every (instance, timestep) assignment.
    nlohmann::json doc;
    doc["config_digest"] = digest;
    doc["n_faces"] = face_count;
    doc["n_vertices"] = out.complex.base.n_vertices();
    nlohmann::json per_instance = nlohmann::json::array();
    double overall_max = 0.0;
    double overall_sum = 0.0;
    std::size_t count = 0;
    const bool normalize = !cfg.no_normalize_sheaf;
    const zscore_stats stats = fit_zscore(pruned);
    for (int k = 0; k < pruned.n_instances(); ++k) {
        double instance_max = 0.0;
        double instance_sum = 0.0;
        for (int t = 0; t < pruned.n_timesteps; ++t) {
            std::vector<double> readings(static_cast<std::size_t>(pruned.n_vars));
            for (int v = 0; v < pruned.n_vars; ++v) {
                const double raw = pruned.value(k, v, t);
                readings[static_cast<std::size_t>(v)] = normalize ? apply_zscore(stats, v, raw) : raw;
            }
            const double radius =
                consistency_radius(assignment::scalars(readings), out.complex);
            instance_max = std::max(instance_max, radius);
            instance_sum += radius;
            overall_max = std::max(overall_max, radius);
            overall_sum += radius;
            ++count;
        }
        nlohmann::json row;
        row["instance"] = pruned.instance_ids[static_cast<std::size_t>(k)];
        row["radius_max"] = instance_max;
        row["radius_mean"] = instance_sum / pruned.n_timesteps;
        per_instance.push_back(row);
    }
    doc["per_instance"] = per_instance;
    doc["radius_max"] = overall_max;
    doc["radius_mean"] = count ? overall_sum / static_cast<double>(count) : 0.0;
    out.consistency_json = doc.dump(2) + "\n";
    return out;
}

int cmd_persistence(const run_config& cfg) {
    std::string input_bytes;
    const mts_dataset dataset = load_input(cfg, input_bytes);
    const std::string digest = config_digest("persistence", cfg, input_bytes);

    const distance_matrix d = correlation_to_distance(compute_correlation(dataset));
    const filtration f = build_filtration(d, cfg.max_dim);
    const barcode b = reduce(f);

    nlohmann::json summary;
    summary["config_digest"] = digest;
    summary["n_simplices"] = f.entries.size();
    summary["max_dim"] = b.max_dim;
    std::vector<int> betti(static_cast<std::size_t>(b.max_dim) + 1, 0);
    nlohmann::json per_dim = nlohmann::json::object();
    for (int dim = 0; dim <= b.max_dim; ++dim) {
        int total = 0;
        int finite = 0;
        int degenerate = 0;
        for (const auto& pair : b.pairs) {
            if (pair.dimension != dim) continue;
            ++total;
            if (pair.finite()) ++finite;
            if (pair.degenerate()) ++degenerate;
        }
        // Essential classes of the final complex.
        betti[static_cast<std::size_t>(dim)] = total - finite;
        nlohmann::json row;
        row["total"] = total;
        row["finite"] = finite;
        row["degenerate"] = degenerate;
        per_dim[std::to_string(dim)] = row;
    }
    summary["betti_final"] = betti;
    summary["pairs_per_dimension"] = per_dim;

    output_stage stage(cfg.out_dir);
    stage.add("barcode.csv", barcode_csv_string(b));
    stage.add("persistence_summary.json", summary.dump(2) + "\n");
    stage.commit();
    log_info("wrote barcode.csv and persistence_summary.json");
    return 0;
}

int cmd_prune(const run_config& cfg) {
    std::string input_bytes;
    const mts_dataset dataset = load_input(cfg, input_bytes);
    const std::string digest = config_digest("prune", cfg, input_bytes);

    const prune_result result = run_pipeline(dataset, to_pipeline_config(cfg));
    log_prune(result);

    output_stage stage(cfg.out_dir);
    stage.add("prune_result.json", prune_result_to_json(result, digest));
    stage.add("pruned.csv", long_csv_string(result.pruned_dataset));
    stage.commit();
    log_info("wrote prune_result.json and pruned.csv");
    return 0;
}

int cmd_sheaf(run_config cfg) {
    resolve_epsilon(cfg);
    std::string input_bytes;
    const mts_dataset dataset = load_input(cfg, input_bytes);
    const std::string digest = config_digest("sheaf", cfg, input_bytes);

    // With an explicit epsilon (--epsilon or --prune-result) the input is
    // taken as already-pruned data and sheafified as-is; otherwise the whole
    // pipeline runs inline and the sheaf stage sees its pruned output.
    mts_dataset pruned = dataset;
    double epsilon = 0.0;
    if (cfg.epsilon) {
        epsilon = *cfg.epsilon;
        log_info("epsilon = " + format_double(epsilon));
    } else {
        pipeline_config pipeline_cfg = to_pipeline_config(cfg);
        const prune_result result = run_pipeline(dataset, pipeline_cfg);
        log_prune(result);
        pruned = result.pruned_dataset;
        epsilon = result.epsilon_optimal;
    }
    const sheaf_stage_output sheaf = run_sheaf_stage(pruned, epsilon, cfg, digest);

    output_stage stage(cfg.out_dir);
    stage.add("augmented.csv", long_csv_string(sheaf.augmented));
    stage.add("consistency.json", sheaf.consistency_json);
    stage.commit();
    log_info("wrote augmented.csv and consistency.json");
    return 0;
}

int cmd_evaluate(const run_config& cfg) {
    std::string input_bytes;
    const mts_dataset dataset = load_input(cfg, input_bytes);
    const std::string digest = config_digest("evaluate", cfg, input_bytes);
    if (!dataset.labeled()) throw validation_error("evaluate requires a labeled dataset");

    std::map<std::string, int> class_counts;
    for (const auto& label : *dataset.labels) ++class_counts[label];
    for (const auto& [label, count] : class_counts) {
        if (count < cfg.folds) {
            throw validation_error("folds (" + std::to_string(cfg.folds) +
                                   ") exceed the instances of class '" + label + "' (" +
                                   std::to_string(count) + ")");
        }
    }

    split_spec split;
    split.folds = cfg.folds;
    split.seed = cfg.seed;

    output_stage stage(cfg.out_dir);
    std::printf("%-20s %9s %10s %9s %9s\n", "variant", "accuracy", "precision", "recall", "f1");
    for (eval_variant variant :
         {eval_variant::full, eval_variant::pruned, eval_variant::pruned_plus_sheaf}) {
        const evaluation_result result =
            evaluate(dataset, split, variant, to_pipeline_config(cfg));
        stage.add(std::string("metrics_") + variant_name(variant) + ".json",
                  metrics_to_json(result, digest));
        std::printf("%-20s %9.6f %10.6f %9.6f %9.6f\n", variant_name(variant),
                    result.overall.accuracy, result.overall.precision, result.overall.recall,
                    result.overall.f1);
    }
    std::fflush(stdout);
    stage.commit();
    log_info("wrote metrics_{full,pruned,pruned_plus_sheaf}.json");
    return 0;
}

int cmd_pipeline(run_config cfg) {
    resolve_epsilon(cfg);
    std::string input_bytes;
    const mts_dataset dataset = load_input(cfg, input_bytes);
    const std::string digest = config_digest("pipeline", cfg, input_bytes);

    const distance_matrix d = correlation_to_distance(compute_correlation(dataset));
    const barcode b = reduce(build_filtration(d, cfg.max_dim));

    const prune_result result = run_pipeline(dataset, to_pipeline_config(cfg));
    log_prune(result);
    const sheaf_stage_output sheaf =
        run_sheaf_stage(result.pruned_dataset, result.epsilon_optimal, cfg, digest);

    output_stage stage(cfg.out_dir);
    stage.add("barcode.csv", barcode_csv_string(b));
    stage.add("prune_result.json", prune_result_to_json(result, digest));
    stage.add("pruned.csv", long_csv_string(result.pruned_dataset));
    stage.add("augmented.csv", long_csv_string(sheaf.augmented));
    stage.add("consistency.json", sheaf.consistency_json);

    if (dataset.labeled()) {
        split_spec split;
        split.folds = cfg.folds;
        split.seed = cfg.seed;
        bool enough = true;
        std::map<std::string, int> class_counts;
        for (const auto& label : *dataset.labels) ++class_counts[label];
        for (const auto& [label, count] : class_counts) enough = enough && count >= cfg.folds;
        if (enough) {
            for (eval_variant variant :
                 {eval_variant::full, eval_variant::pruned, eval_variant::pruned_plus_sheaf}) {
                const evaluation_result eval_result =
                    evaluate(dataset, split, variant, to_pipeline_config(cfg));
                stage.add(std::string("metrics_") + variant_name(variant) + ".json",
                          metrics_to_json(eval_result, digest));
            }
        } else {
            log_warn("skipping evaluation: some class has fewer instances than folds");
        }
    } else {
        log_warn("skipping evaluation: dataset is unlabeled");
    }
    stage.commit();
    log_info("pipeline outputs written to " + cfg.out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unsupervised variable pruning for multivariate time series via "
                 "persistent homology, with sheaf consistency features"};
    app.require_subcommand(1);

    run_config cfg;
    auto add_common = [&cfg](CLI::App* cmd) {
        cmd->add_option("--input", cfg.input, "Input dataset CSV")->required();
        cmd->add_option("--format", cfg.format, "Input schema: long or wide")
            ->check(CLI::IsMember({"long", "wide"}))
            ->capture_default_str();
        cmd->add_option("--max-dim", cfg.max_dim, "Maximum simplex dimension")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    };

    CLI::App* persistence_cmd =
        app.add_subcommand("persistence", "Write the barcode and a persistence summary");
    add_common(persistence_cmd);

    CLI::App* prune_cmd =
        app.add_subcommand("prune", "Optimize epsilon and drop isolated variables");
    add_common(prune_cmd);
    prune_cmd->add_option("--epsilon", cfg.epsilon, "Skip optimization and use this epsilon")
        ->check(CLI::NonNegativeNumber);
    prune_cmd->add_flag("--include-degenerate", cfg.include_degenerate,
                        "Let zero-length bars contribute death times");

    CLI::App* sheaf_cmd =
        app.add_subcommand("sheaf", "Append per-face consistency channels to the pruned data");
    add_common(sheaf_cmd);
    sheaf_cmd->add_option("--epsilon", cfg.epsilon, "Skip optimization and use this epsilon")
        ->check(CLI::NonNegativeNumber);
    sheaf_cmd
        ->add_option("--prune-result", cfg.prune_result_path,
                     "Prior prune_result.json supplying the epsilon")
        ->check(CLI::ExistingFile);
    sheaf_cmd->add_flag("--no-normalize-sheaf", cfg.no_normalize_sheaf,
                        "Compute deltas on raw readings instead of z-scores");
    sheaf_cmd->add_flag("--require-edges", cfg.require_edges,
                        "Fail when the pruned complex has no faces of dimension >= 1");
    sheaf_cmd->add_flag("--include-degenerate", cfg.include_degenerate,
                        "Let zero-length bars contribute death times");

    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "Cross-validate the full/pruned/augmented variants");
    add_common(evaluate_cmd);
    evaluate_cmd->add_option("--folds", cfg.folds, "Cross-validation folds")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    evaluate_cmd->add_option("--seed", cfg.seed, "Fold shuffling seed")->capture_default_str();
    evaluate_cmd->add_flag("--no-normalize-sheaf", cfg.no_normalize_sheaf,
                           "Compute deltas on raw readings instead of z-scores");
    evaluate_cmd->add_flag("--include-degenerate", cfg.include_degenerate,
                           "Let zero-length bars contribute death times");

    CLI::App* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage into one directory");
    add_common(pipeline_cmd);
    pipeline_cmd->add_option("--epsilon", cfg.epsilon, "Skip optimization and use this epsilon")
        ->check(CLI::NonNegativeNumber);
    pipeline_cmd->add_option("--folds", cfg.folds, "Cross-validation folds")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    pipeline_cmd->add_option("--seed", cfg.seed, "Fold shuffling seed")->capture_default_str();
    pipeline_cmd->add_flag("--no-normalize-sheaf", cfg.no_normalize_sheaf,
                           "Compute deltas on raw readings instead of z-scores");
    pipeline_cmd->add_flag("--include-degenerate", cfg.include_degenerate,
                           "Let zero-length bars contribute death times");
    pipeline_cmd->add_flag("--require-edges", cfg.require_edges,
                           "Fail when the pruned complex has no faces of dimension >= 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*persistence_cmd) return cmd_persistence(cfg);
        if (*prune_cmd) return cmd_prune(cfg);
        if (*sheaf_cmd) return cmd_sheaf(cfg);
        if (*evaluate_cmd) return cmd_evaluate(cfg);
        if (*pipeline_cmd) return cmd_pipeline(cfg);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const degenerate_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
