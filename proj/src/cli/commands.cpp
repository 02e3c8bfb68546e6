#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "netrec/arff.hpp"
#include "netrec/csv.hpp"
#include "netrec/evaluation.hpp"
#include "netrec/predictor.hpp"

namespace netrec::cli {

namespace {

namespace fs = std::filesystem;

bool has_arff_extension(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".arff";
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("no such file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write to: " + path);
    return out;
}

J48Params j48_params(const PipelineConfig& config) {
    J48Params params;
    if (config.criterion == "information_gain") {
        params.criterion = Criterion::InformationGain;
    } else if (config.criterion == "gain_ratio") {
        params.criterion = Criterion::GainRatio;
    } else {
        throw Error("unknown criterion '" + config.criterion +
                    "' (use gain_ratio or information_gain)");
    }
    params.confidence = config.confidence;
    params.min_leaf_weight = config.min_leaf_weight;
    params.pruning = !config.no_pruning;
    if (config.max_depth > 0) params.max_depth = config.max_depth;
    return params;
}

// The §-style preprocessing steps are table transformations; this applies
// one "strip quotes" step regardless of the inferred column kind. Text
// columns go through the library op, nominal columns get their domain
// values cleaned (merging any values that collide afterwards), numeric
// columns cannot contain quotes.
Dataset strip_quotes_step(const Dataset& dataset, const std::string& column) {
    const auto index = dataset.schema.index_of(column);
    if (!index) throw Error("no attribute named '" + column + "'");
    const AttributeSpec& attr = dataset.schema.attribute(*index);
    switch (attr.kind()) {
        case AttributeKind::Text:
            return strip_quotes(dataset, column);
        case AttributeKind::Numeric:
            return dataset;
        case AttributeKind::Nominal:
            break;
    }

    std::vector<std::string> domain;
    std::vector<std::size_t> remap(attr.domain().size());
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < attr.domain().size(); ++i) {
        std::string cleaned = attr.domain()[i];
        cleaned.erase(std::remove(cleaned.begin(), cleaned.end(), '"'), cleaned.end());
        const auto [it, inserted] = seen.emplace(cleaned, domain.size());
        if (inserted) domain.push_back(cleaned);
        remap[i] = it->second;
    }

    std::vector<AttributeSpec> attrs = dataset.schema.attributes();
    attrs[*index] = AttributeSpec::nominal(attr.name(), std::move(domain));
    Dataset out;
    out.schema = Schema(std::move(attrs), dataset.schema.class_index());
    out.name = dataset.name;
    out.instances = dataset.instances;
    for (Instance& inst : out.instances) {
        Cell& cell = inst.values[*index];
        if (cell.is_category()) cell = Cell::category(remap[cell.category()]);
    }
    return out;
}

struct ParsedStep {
    std::string verb;
    std::string argument;
};

ParsedStep parse_step(const std::string& step) {
    const auto colon = step.find(':');
    if (colon == std::string::npos) return {step, ""};
    return {step.substr(0, colon), step.substr(colon + 1)};
}

std::string describe_bayes(const BayesModel& model) {
    std::ostringstream os;
    const Schema& schema = model.schema();
    const auto& domain = schema.class_attribute().domain();
    const double total = model.total_weight();
    os << "naive Bayes model over " << schema.size() << " attributes\n\n";
    os << "class priors:\n";
    for (std::size_t c = 0; c < domain.size(); ++c) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f (%.3f)", model.class_counts()[c],
                      total > 0 ? model.class_counts()[c] / total : 0.0);
        os << "  " << domain[c] << ": " << buf << "\n";
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (!model.gaussian_stats()[a].empty()) {
            os << "\n" << schema.attribute(a).name() << " (numeric):\n";
            for (std::size_t c = 0; c < domain.size(); ++c) {
                const GaussianStat& s = model.gaussian_stats()[a][c];
                char buf[96];
                std::snprintf(buf, sizeof buf, "mean=%.4f sd=%.4f n=%.1f", s.mean,
                              std::sqrt(s.variance()), s.weight);
                os << "  " << domain[c] << ": " << buf << "\n";
            }
        } else if (!model.nominal_stats()[a].empty()) {
            os << "\n" << schema.attribute(a).name() << " (nominal counts):\n";
            const auto& values = schema.attribute(a).domain();
            for (std::size_t c = 0; c < domain.size(); ++c) {
                os << "  " << domain[c] << ":";
                for (std::size_t v = 0; v < values.size(); ++v) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, " %s=%.1f", values[v].c_str(),
                                  model.nominal_stats()[a][c].counts[v]);
                    os << buf;
                }
                os << "\n";
            }
        }
    }
    return os.str();
}

/// Resolves the class attribute of a freshly loaded table: an existing
/// designation wins, otherwise `config.class_attribute` when present,
/// otherwise the last nominal attribute (Weka's convention).
Dataset ensure_labeled(Dataset dataset, const PipelineConfig& config) {
    if (dataset.labeled()) return dataset;
    std::optional<std::size_t> index = dataset.schema.index_of(config.class_attribute);
    if (!index) {
        for (std::size_t a = dataset.schema.size(); a-- > 0;) {
            if (dataset.schema.attribute(a).kind() == AttributeKind::Nominal) {
                index = a;
                break;
            }
        }
    }
    if (!index) {
        throw Error("dataset '" + dataset.name +
                    "' has no class attribute and no nominal column to use as one");
    }
    Dataset out;
    out.schema = Schema(dataset.schema.attributes(), index);
    out.instances = std::move(dataset.instances);
    out.name = std::move(dataset.name);
    return out;
}

AnyModel load_model_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return load_model(in);
}

nlohmann::json verdict_to_json(const CaptureVerdict& verdict, const std::string& name) {
    nlohmann::json mean = nlohmann::json::object();
    nlohmann::json votes = nlohmann::json::object();
    for (std::size_t c = 0; c < verdict.class_domain.size(); ++c) {
        mean[verdict.class_domain[c]] = verdict.mean_posterior[c];
        votes[verdict.class_domain[c]] = verdict.predicted_fraction[c];
    }
    return {{"capture", name},
            {"instances", verdict.instance_count},
            {"mean_posterior", std::move(mean)},
            {"predicted_fraction", std::move(votes)},
            {"decided", verdict.class_domain[verdict.decided]},
            {"confidence", to_string(verdict.confidence)}};
}

}  // namespace

Dataset load_table(const std::string& path, const PipelineConfig& config) {
    std::ifstream in = open_input(path);
    if (has_arff_extension(path)) {
        return read_arff(in);
    }
    CsvOptions options;
    options.has_header = !config.csv_no_header;
    options.nominal_threshold = config.nominal_threshold;
    return read_csv(in, options, fs::path(path).stem().string());
}

Learner make_learner(const PipelineConfig& config) {
    if (config.learner == "j48") {
        const J48Params params = j48_params(config);
        return [params](const Dataset& data) { return AnyModel(train_tree(data, params)); };
    }
    if (config.learner == "naive_bayes") {
        const BayesParams params{config.alpha};
        return [params](const Dataset& data) { return AnyModel(train_bayes(data, params)); };
    }
    if (config.learner == "naive_bayes_updateable") {
        const BayesParams params{config.alpha};
        return [params](const Dataset& data) {
            return AnyModel(train_bayes_updateable(data, params));
        };
    }
    throw Error("unknown learner '" + config.learner +
                "' (use j48, naive_bayes or naive_bayes_updateable)");
}

int cmd_convert(const PipelineConfig& config, const std::string& input,
                const std::string& output, std::ostream& out, std::ostream& err) {
    try {
        const Dataset dataset = load_table(input, config);
        std::ofstream sink = open_output(output);
        write_arff(dataset, sink);
        out << output << ": " << dataset.n_attributes() << " attributes, " << dataset.n_rows()
            << " instances\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_preprocess(const PipelineConfig& config, const std::vector<std::string>& inputs,
                   const std::string& output, std::ostream& out, std::ostream& err) {
    try {
        const bool labelling =
            std::any_of(config.steps.begin(), config.steps.end(),
                        [](const std::string& s) { return parse_step(s).verb == "label"; });
        if (labelling) {
            if (inputs.size() != config.labels.size()) {
                throw Error("got " + std::to_string(inputs.size()) + " inputs for " +
                            std::to_string(config.labels.size()) +
                            " labels; provide one capture per label");
            }
            std::unordered_set<std::string> unique(config.labels.begin(), config.labels.end());
            if (unique.size() != config.labels.size()) {
                throw Error("labels are mutually exclusive; duplicate label assignment");
            }
        }

        std::vector<Dataset> current;
        current.reserve(inputs.size());
        for (const std::string& path : inputs) {
            current.push_back(load_table(path, config));
        }

        for (const std::string& raw_step : config.steps) {
            const ParsedStep step = parse_step(raw_step);
            if (step.verb == "drop") {
                for (Dataset& ds : current) ds = drop_column(ds, step.argument);
            } else if (step.verb == "strip_quotes") {
                for (Dataset& ds : current) ds = strip_quotes_step(ds, step.argument);
            } else if (step.verb == "label") {
                for (std::size_t i = 0; i < current.size(); ++i) {
                    current[i] = add_label(current[i], config.labels[i],
                                           config.class_attribute, config.labels);
                }
            } else if (step.verb == "merge") {
                Dataset merged = merge(current);
                merged.name = fs::path(output).stem().string();
                current.clear();
                current.push_back(std::move(merged));
            } else {
                throw Error("unknown preprocessing step '" + raw_step + "'");
            }
        }

        if (current.size() != 1) {
            Dataset merged = merge(current);
            merged.name = fs::path(output).stem().string();
            current.clear();
            current.push_back(std::move(merged));
        }
        std::ofstream sink = open_output(output);
        write_arff(current.front(), sink);
        out << output << ": " << current.front().n_attributes() << " attributes, "
            << current.front().n_rows() << " instances\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_train(const PipelineConfig& config, const std::string& data_path,
              const std::string& model_path, std::ostream& out, std::ostream& err) {
    try {
        const Dataset dataset = ensure_labeled(load_table(data_path, config), config);
        const AnyModel model = make_learner(config)(dataset);
        std::ofstream sink = open_output(model_path);
        save_model(model, sink);
        out << "trained " << model_kind(model) << " on " << dataset.n_rows() << " instances ("
            << dataset.schema.class_attribute().domain().size() << " classes)\n";
        if (const auto* tree = std::get_if<TreeModel>(&model)) {
            out << "tree: " << tree->root.leaf_count() << " leaves, depth "
                << tree->root.depth() << "\n";
        }
        out << "model written to " << model_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_cv(const PipelineConfig& config, const std::string& data_path,
           const std::string& test_path, const std::string& json_path, std::ostream& out,
           std::ostream& err) {
    try {
        const Dataset dataset = ensure_labeled(load_table(data_path, config), config);
        const Learner learner = make_learner(config);

        EvaluationReport report;
        if (config.regime == "cross_validation") {
            report = cross_validate(dataset, learner, config.k, config.seed);
        } else if (config.regime == "training_set") {
            report = evaluate_training_set(dataset, learner);
        } else if (config.regime == "percentage_split") {
            report = evaluate_percentage_split(dataset, learner, config.train_fraction,
                                               config.seed);
        } else if (config.regime == "supplied_test_set") {
            if (test_path.empty()) {
                throw Error("regime supplied_test_set needs --test <file>");
            }
            const Dataset test = ensure_labeled(load_table(test_path, config), config);
            report = evaluate_supplied(dataset, test, learner);
        } else {
            throw Error("unknown regime '" + config.regime + "'");
        }

        out << render_report(report, !config.no_timing);
        if (!json_path.empty()) {
            std::ofstream sink = open_output(json_path);
            sink << report_to_json(report, !config.no_timing);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_predict(const PipelineConfig& config, const std::string& model_path,
                const std::vector<std::string>& capture_paths, const std::string& json_path,
                std::ostream& out, std::ostream& err) {
    try {
        const AnyModel model = load_model_file(model_path);
        std::vector<CaptureVerdict> verdicts;
        std::vector<std::string> names;
        for (const std::string& path : capture_paths) {
            const Dataset capture = load_table(path, config);
            verdicts.push_back(classify_capture(model, capture, config.margin));
            names.push_back(fs::path(path).stem().string());
        }
        if (config.exclusive) verdicts = apply_mutual_exclusion(std::move(verdicts));

        out << render_verdict_table(verdicts, names);
        if (!json_path.empty()) {
            nlohmann::json doc = nlohmann::json::array();
            for (std::size_t i = 0; i < verdicts.size(); ++i) {
                doc.push_back(verdict_to_json(verdicts[i], names[i]));
            }
            std::ofstream sink = open_output(json_path);
            sink << doc.dump(1, '\t') << "\n";
        }
        const bool all_high = std::all_of(
            verdicts.begin(), verdicts.end(),
            [](const CaptureVerdict& v) { return v.confidence == ConfidenceLevel::High; });
        return all_high ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_inspect(const std::string& model_path, std::ostream& out, std::ostream& err) {
    try {
        const AnyModel model = load_model_file(model_path);
        if (const auto* tree = std::get_if<TreeModel>(&model)) {
            out << render_text(*tree);
            out << "\n" << tree->root.leaf_count() << " leaves, depth " << tree->root.depth()
                << "\n";
        } else {
            out << describe_bayes(std::get<BayesModel>(model));
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace netrec::cli
