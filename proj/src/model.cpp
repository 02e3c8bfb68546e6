#include "netrec/model.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace netrec {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "netrec-model";
constexpr int kFormatVersion = 1;

json schema_to_json(const Schema& schema) {
    json attrs = json::array();
    for (const AttributeSpec& attr : schema.attributes()) {
        json a = {{"name", attr.name()}, {"kind", to_string(attr.kind())}};
        if (attr.kind() == AttributeKind::Nominal) a["domain"] = attr.domain();
        attrs.push_back(std::move(a));
    }
    json out = {{"attributes", std::move(attrs)}};
    if (schema.class_index()) {
        out["class_index"] = *schema.class_index();
    }
    return out;
}

Schema schema_from_json(const json& j) {
    std::vector<AttributeSpec> attrs;
    for (const json& a : j.at("attributes")) {
        const std::string name = a.at("name").get<std::string>();
        const std::string kind = a.at("kind").get<std::string>();
        if (kind == "numeric") {
            attrs.push_back(AttributeSpec::numeric(name));
        } else if (kind == "nominal") {
            attrs.push_back(
                AttributeSpec::nominal(name, a.at("domain").get<std::vector<std::string>>()));
        } else if (kind == "text") {
            attrs.push_back(AttributeSpec::text(name));
        } else {
            throw Error("model file: unknown attribute kind '" + kind + "'");
        }
    }
    std::optional<std::size_t> class_index;
    if (j.contains("class_index")) class_index = j.at("class_index").get<std::size_t>();
    return Schema(std::move(attrs), class_index);
}

json distribution_to_json(const ClassDistribution& dist) {
    // total is stored, not recomputed, so reloaded models predict identically
    return {{"counts", dist.counts}, {"total", dist.total}};
}

ClassDistribution distribution_from_json(const json& j) {
    ClassDistribution dist;
    dist.counts = j.at("counts").get<std::vector<double>>();
    dist.total = j.at("total").get<double>();
    return dist;
}

json node_to_json(const TreeNode& node) {
    json out = {{"distribution", distribution_to_json(node.distribution)},
                {"predicted", node.predicted}};
    if (!node.is_leaf()) {
        json test = {{"attribute", node.test->attribute}};
        if (node.test->kind == SplitTest::Kind::NominalMultiway) {
            test["kind"] = "nominal";
        } else {
            test["kind"] = "numeric";
            test["threshold"] = node.test->threshold;
        }
        out["test"] = std::move(test);
        json children = json::array();
        for (const TreeNode& child : node.children) children.push_back(node_to_json(child));
        out["children"] = std::move(children);
    }
    return out;
}

TreeNode node_from_json(const json& j) {
    TreeNode node;
    node.distribution = distribution_from_json(j.at("distribution"));
    node.predicted = j.at("predicted").get<std::size_t>();
    if (j.contains("test")) {
        const json& t = j.at("test");
        const std::string kind = t.at("kind").get<std::string>();
        if (kind == "nominal") {
            node.test = SplitTest::nominal_multiway(t.at("attribute").get<std::size_t>());
        } else if (kind == "numeric") {
            node.test = SplitTest::numeric_threshold(t.at("attribute").get<std::size_t>(),
                                                     t.at("threshold").get<double>());
        } else {
            throw Error("model file: unknown split kind '" + kind + "'");
        }
        for (const json& c : j.at("children")) node.children.push_back(node_from_json(c));
    }
    return node;
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double null_or_double(const json& j, double fallback) {
    return j.is_null() ? fallback : j.get<double>();
}

json tree_to_json(const TreeModel& model) {
    json params = {{"criterion", model.params.criterion == Criterion::GainRatio
                                     ? "gain_ratio"
                                     : "information_gain"},
                   {"confidence", model.params.confidence},
                   {"min_leaf_weight", model.params.min_leaf_weight},
                   {"pruning", model.params.pruning}};
    if (model.params.max_depth) params["max_depth"] = *model.params.max_depth;
    return {{"format", kFormatTag},
            {"version", kFormatVersion},
            {"type", "j48"},
            {"schema", schema_to_json(model.schema)},
            {"fingerprint", model.schema_fingerprint},
            {"params", std::move(params)},
            {"dropped_missing_class", model.dropped_missing_class},
            {"root", node_to_json(model.root)}};
}

TreeModel tree_from_json(const json& j) {
    TreeModel model;
    model.schema = schema_from_json(j.at("schema"));
    model.schema_fingerprint = j.at("fingerprint").get<std::string>();
    const json& p = j.at("params");
    model.params.criterion = p.at("criterion").get<std::string>() == "information_gain"
                                 ? Criterion::InformationGain
                                 : Criterion::GainRatio;
    model.params.confidence = p.at("confidence").get<double>();
    model.params.min_leaf_weight = p.at("min_leaf_weight").get<double>();
    model.params.pruning = p.at("pruning").get<bool>();
    if (p.contains("max_depth")) model.params.max_depth = p.at("max_depth").get<int>();
    model.dropped_missing_class = j.at("dropped_missing_class").get<std::size_t>();
    model.root = node_from_json(j.at("root"));
    if (!model.schema.labeled()) throw Error("model file: schema has no class attribute");
    return model;
}

json bayes_to_json(const BayesModel& model) {
    json attrs = json::array();
    for (std::size_t a = 0; a < model.schema().size(); ++a) {
        if (!model.gaussian_stats()[a].empty()) {
            json stats = json::array();
            for (const GaussianStat& s : model.gaussian_stats()[a]) {
                stats.push_back({{"weight", s.weight}, {"mean", s.mean}, {"m2", s.m2}});
            }
            attrs.push_back({{"gaussian", std::move(stats)},
                             {"min", finite_or_null(model.attribute_min()[a])},
                             {"max", finite_or_null(model.attribute_max()[a])}});
        } else if (!model.nominal_stats()[a].empty()) {
            json stats = json::array();
            for (const NominalStat& s : model.nominal_stats()[a]) {
                stats.push_back({{"counts", s.counts}});
            }
            attrs.push_back({{"nominal", std::move(stats)}});
        } else {
            attrs.push_back(nullptr);
        }
    }
    return {{"format", kFormatTag},
            {"version", kFormatVersion},
            {"type", "naive_bayes"},
            {"schema", schema_to_json(model.schema())},
            {"fingerprint", model.schema_fingerprint()},
            {"params", {{"alpha", model.params().alpha}}},
            {"class_counts", model.class_counts()},
            {"attributes", std::move(attrs)}};
}

BayesModel bayes_from_json(const json& j) {
    Schema schema = schema_from_json(j.at("schema"));
    BayesParams params{j.at("params").at("alpha").get<double>()};
    BayesModel model(schema, params);

    const std::size_t n_attrs = schema.size();
    std::vector<std::vector<GaussianStat>> gaussian(n_attrs);
    std::vector<std::vector<NominalStat>> nominal(n_attrs);
    std::vector<double> attr_min(n_attrs, std::numeric_limits<double>::infinity());
    std::vector<double> attr_max(n_attrs, -std::numeric_limits<double>::infinity());

    const json& attrs = j.at("attributes");
    if (attrs.size() != n_attrs) throw Error("model file: attribute statistics mismatch");
    for (std::size_t a = 0; a < n_attrs; ++a) {
        const json& entry = attrs[a];
        if (entry.is_null()) continue;
        if (entry.contains("gaussian")) {
            for (const json& s : entry.at("gaussian")) {
                gaussian[a].push_back({s.at("weight").get<double>(), s.at("mean").get<double>(),
                                       s.at("m2").get<double>()});
            }
            attr_min[a] = null_or_double(entry.at("min"),
                                         std::numeric_limits<double>::infinity());
            attr_max[a] = null_or_double(entry.at("max"),
                                         -std::numeric_limits<double>::infinity());
        } else if (entry.contains("nominal")) {
            for (const json& s : entry.at("nominal")) {
                nominal[a].push_back({s.at("counts").get<std::vector<double>>()});
            }
        }
    }
    model.restore(j.at("class_counts").get<std::vector<double>>(), std::move(gaussian),
                  std::move(nominal), std::move(attr_min), std::move(attr_max));
    return model;
}

}  // namespace

std::vector<double> predict_distribution(const AnyModel& model, const Instance& instance) {
    if (const auto* tree = std::get_if<TreeModel>(&model)) {
        return predict_distribution(*tree, instance);
    }
    return std::get<BayesModel>(model).predict_distribution(instance);
}

const Schema& model_schema(const AnyModel& model) {
    if (const auto* tree = std::get_if<TreeModel>(&model)) return tree->schema;
    return std::get<BayesModel>(model).schema();
}

std::string model_kind(const AnyModel& model) {
    return std::holds_alternative<TreeModel>(model) ? "j48" : "naive_bayes";
}

void save_model(const AnyModel& model, std::ostream& sink) {
    const json doc = std::holds_alternative<TreeModel>(model)
                         ? tree_to_json(std::get<TreeModel>(model))
                         : bayes_to_json(std::get<BayesModel>(model));
    sink << doc.dump(1, '\t') << '\n';
}

AnyModel load_model(std::istream& source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::exception& e) {
        throw Error(std::string("model file is not valid JSON (truncated?): ") + e.what());
    }
    try {
        if (doc.value("format", "") != kFormatTag) {
            throw Error("model file: missing '" + std::string(kFormatTag) + "' format tag");
        }
        if (doc.at("version").get<int>() != kFormatVersion) {
            throw Error("model file: unsupported version");
        }
        const std::string type = doc.at("type").get<std::string>();
        if (type == "j48") return tree_from_json(doc);
        if (type == "naive_bayes") return bayes_from_json(doc);
        throw Error("model file: unknown model type '" + type + "'");
    } catch (const json::exception& e) {
        throw Error(std::string("model file is malformed: ") + e.what());
    }
}

SchemaAligner::SchemaAligner(const Schema& target, const Schema& source)
    : target_(&target), source_(&source) {
    if (target == source) {
        identity_ = true;
        return;
    }

    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    source_index_.assign(target.size(), npos);
    category_remap_.assign(target.size(), {});

    std::vector<std::string> missing;
    std::vector<std::string> mismatched;
    std::vector<bool> source_used(source.size(), false);

    const auto target_class = target.class_index();
    for (std::size_t t = 0; t < target.size(); ++t) {
        const AttributeSpec& want = target.attribute(t);
        const auto s = source.index_of(want.name());
        if (target_class && t == *target_class) {
            // the label column is never a feature; mark it used if present
            if (s) source_used[*s] = true;
            continue;
        }
        if (!s) {
            missing.push_back(want.name());
            continue;
        }
        source_used[*s] = true;
        const AttributeSpec& have = source.attribute(*s);
        const bool ok =
            (want.kind() == AttributeKind::Numeric && have.kind() == AttributeKind::Numeric) ||
            (want.kind() != AttributeKind::Numeric && have.kind() != AttributeKind::Numeric);
        if (!ok) {
            mismatched.push_back(want.name() + " (" + to_string(want.kind()) + " vs " +
                                 to_string(have.kind()) + ")");
            continue;
        }
        source_index_[t] = *s;
        if (want.kind() == AttributeKind::Nominal && have.kind() == AttributeKind::Nominal) {
            auto& remap = category_remap_[t];
            remap.reserve(have.domain().size());
            for (const std::string& value : have.domain()) {
                const auto idx = want.index_of(value);
                remap.push_back(idx ? *idx : npos);  // unseen in training -> missing
            }
        }
    }

    std::vector<std::string> extra;
    for (std::size_t s = 0; s < source.size(); ++s) {
        if (!source_used[s]) extra.push_back(source.attribute(s).name());
    }

    if (!missing.empty() || !extra.empty() || !mismatched.empty()) {
        std::ostringstream msg;
        msg << "capture schema does not match the training schema;";
        auto list = [&msg](const char* label, const std::vector<std::string>& names) {
            if (names.empty()) return;
            msg << ' ' << label << ':';
            for (const auto& n : names) msg << " '" << n << "'";
            msg << ';';
        };
        list("missing attributes", missing);
        list("unexpected attributes", extra);
        list("kind mismatches", mismatched);
        throw Error(msg.str());
    }
}

Instance SchemaAligner::align(const Instance& instance) const {
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    if (identity_) {
        Instance out = instance;
        if (const auto cls = target_->class_index()) out.values[*cls] = Cell::missing();
        return out;
    }
    if (instance.values.size() != source_->size()) {
        throw Error("instance has " + std::to_string(instance.values.size()) +
                    " values, capture schema expects " + std::to_string(source_->size()));
    }
    Instance out;
    out.weight = instance.weight;
    out.values.assign(target_->size(), Cell::missing());
    for (std::size_t t = 0; t < target_->size(); ++t) {
        const std::size_t s = source_index_[t];
        if (s == npos) continue;
        const Cell& cell = instance.values[s];
        if (cell.is_missing()) continue;
        const AttributeSpec& want = target_->attribute(t);
        switch (want.kind()) {
            case AttributeKind::Numeric:
                out.values[t] = cell;
                break;
            case AttributeKind::Nominal: {
                std::optional<std::size_t> idx;
                if (cell.is_category()) {
                    const std::size_t mapped = category_remap_[t][cell.category()];
                    if (mapped != npos) idx = mapped;
                } else if (cell.is_text()) {
                    idx = want.index_of(cell.text());
                }
                if (idx) out.values[t] = Cell::category(*idx);
                break;  // unseen values stay missing
            }
            case AttributeKind::Text:
                if (cell.is_text()) {
                    out.values[t] = cell;
                } else if (cell.is_category()) {
                    out.values[t] = Cell::text(source_->attribute(s).domain()[cell.category()]);
                }
                break;
        }
    }
    return out;
}

void check_compatible(const Schema& target, const Schema& source) {
    SchemaAligner aligner(target, source);
    (void)aligner;
}

Instance align_instance(const Schema& target, const Schema& source, const Instance& instance) {
    return SchemaAligner(target, source).align(instance);
}

}  // namespace netrec
