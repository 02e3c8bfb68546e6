#include "netrec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "netrec/detail/rng.hpp"

namespace netrec {

AttributeSpec AttributeSpec::numeric(std::string name) {
    return AttributeSpec(std::move(name), AttributeKind::Numeric, {});
}

AttributeSpec AttributeSpec::nominal(std::string name, std::vector<std::string> domain) {
    if (domain.empty()) {
        throw Error("nominal attribute '" + name + "' has an empty domain");
    }
    std::unordered_set<std::string> seen;
    for (const auto& value : domain) {
        if (!seen.insert(value).second) {
            throw Error("nominal attribute '" + name + "' has duplicate value '" + value + "'");
        }
    }
    return AttributeSpec(std::move(name), AttributeKind::Nominal, std::move(domain));
}

AttributeSpec AttributeSpec::text(std::string name) {
    return AttributeSpec(std::move(name), AttributeKind::Text, {});
}

std::optional<std::size_t> AttributeSpec::index_of(std::string_view value) const {
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        if (domain_[i] == value) return i;
    }
    return std::nullopt;
}

const char* to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::Numeric: return "numeric";
        case AttributeKind::Nominal: return "nominal";
        case AttributeKind::Text: return "text";
    }
    return "unknown";
}

Schema::Schema(std::vector<AttributeSpec> attributes, std::optional<std::size_t> class_index)
    : attributes_(std::move(attributes)), class_index_(class_index) {
    std::unordered_set<std::string> names;
    for (const auto& attr : attributes_) {
        if (!names.insert(attr.name()).second) {
            throw Error("duplicate attribute name '" + attr.name() + "'");
        }
    }
    if (class_index_) {
        if (*class_index_ >= attributes_.size()) {
            throw Error("class index out of range");
        }
        if (attributes_[*class_index_].kind() != AttributeKind::Nominal) {
            throw Error("class attribute '" + attributes_[*class_index_].name() +
                        "' must be nominal");
        }
    }
}

const AttributeSpec& Schema::class_attribute() const {
    if (!class_index_) throw Error("dataset has no class attribute");
    return attributes_[*class_index_];
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name() == name) return i;
    }
    return std::nullopt;
}

namespace {

// FNV-1a, enough for a cheap compatibility fingerprint.
std::uint64_t fnv1a(std::uint64_t hash, std::string_view data) {
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace

std::string Schema::fingerprint() const {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const auto& attr : attributes_) {
        hash = fnv1a(hash, attr.name());
        hash = fnv1a(hash, to_string(attr.kind()));
        for (const auto& value : attr.domain()) {
            hash = fnv1a(hash, value);
            hash = fnv1a(hash, "\x1f");
        }
        hash = fnv1a(hash, "\x1e");
    }
    hash = fnv1a(hash, class_index_ ? std::to_string(*class_index_) : "-");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

std::optional<std::size_t> Dataset::class_of(std::size_t row) const {
    const auto idx = schema.class_index();
    if (!idx) throw Error("dataset has no class attribute");
    const Cell& cell = instances[row].values[*idx];
    if (cell.is_missing()) return std::nullopt;
    return cell.category();
}

void validate_against_schema(const Schema& schema, const Instance& instance,
                             bool ignore_class) {
    if (instance.values.size() != schema.size()) {
        throw Error("instance has " + std::to_string(instance.values.size()) +
                    " values, schema expects " + std::to_string(schema.size()));
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
        const Cell& cell = instance.values[a];
        if (cell.is_missing()) continue;
        if (ignore_class && schema.class_index() && a == *schema.class_index()) continue;
        const AttributeSpec& attr = schema.attribute(a);
        switch (attr.kind()) {
            case AttributeKind::Numeric:
                if (!cell.is_number()) {
                    throw Error("attribute '" + attr.name() + "': expected a number");
                }
                break;
            case AttributeKind::Nominal:
                if (!cell.is_category() || cell.category() >= attr.domain().size()) {
                    throw Error("attribute '" + attr.name() + "': category out of domain");
                }
                break;
            case AttributeKind::Text:
                if (!cell.is_text()) {
                    throw Error("attribute '" + attr.name() + "': expected text");
                }
                break;
        }
    }
}

void Dataset::validate() const {
    for (std::size_t r = 0; r < instances.size(); ++r) {
        const Instance& inst = instances[r];
        if (!(inst.weight > 0.0)) {
            throw Error("row " + std::to_string(r + 1) + " has non-positive weight");
        }
        try {
            validate_against_schema(schema, inst);
        } catch (const Error& e) {
            throw Error("row " + std::to_string(r + 1) + ": " + e.what());
        }
    }
}

const std::vector<std::string>& default_labels() {
    static const std::vector<std::string> labels = {
        "browser using", "music playing", "trouble shooting"};
    return labels;
}

Dataset drop_column(const Dataset& dataset, std::string_view name) {
    const auto index = dataset.schema.index_of(name);
    if (!index) {
        std::ostringstream msg;
        msg << "no attribute named '" << name << "'; available:";
        for (const auto& attr : dataset.schema.attributes()) msg << " '" << attr.name() << "'";
        throw Error(msg.str());
    }
    if (dataset.schema.size() == 1) {
        throw Error("cannot drop the only attribute of a dataset");
    }

    std::vector<AttributeSpec> attrs;
    attrs.reserve(dataset.schema.size() - 1);
    for (std::size_t i = 0; i < dataset.schema.size(); ++i) {
        if (i != *index) attrs.push_back(dataset.schema.attribute(i));
    }
    std::optional<std::size_t> class_index = dataset.schema.class_index();
    if (class_index) {
        if (*class_index == *index) {
            class_index.reset();  // dropping the class leaves the data unlabeled
        } else if (*class_index > *index) {
            class_index = *class_index - 1;
        }
    }

    Dataset out;
    out.schema = Schema(std::move(attrs), class_index);
    out.name = dataset.name;
    out.instances.reserve(dataset.instances.size());
    for (const Instance& inst : dataset.instances) {
        Instance copy;
        copy.weight = inst.weight;
        copy.values.reserve(inst.values.size() - 1);
        for (std::size_t i = 0; i < inst.values.size(); ++i) {
            if (i != *index) copy.values.push_back(inst.values[i]);
        }
        out.instances.push_back(std::move(copy));
    }
    return out;
}

Dataset strip_quotes(const Dataset& dataset, std::string_view column) {
    const auto index = dataset.schema.index_of(column);
    if (!index) {
        throw Error("no attribute named '" + std::string(column) + "'");
    }
    const AttributeSpec& attr = dataset.schema.attribute(*index);
    if (attr.kind() != AttributeKind::Text) {
        throw Error("attribute '" + attr.name() + "' is " + to_string(attr.kind()) +
                    ", strip_quotes needs a text column");
    }

    Dataset out = dataset;
    for (Instance& inst : out.instances) {
        Cell& cell = inst.values[*index];
        if (!cell.is_text()) continue;
        std::string cleaned = cell.text();
        cleaned.erase(std::remove(cleaned.begin(), cleaned.end(), '"'), cleaned.end());
        // An all-quote cell becomes empty text; missingness is reserved for
        // truly absent fields.
        cell = Cell::text(std::move(cleaned));
    }
    return out;
}

Dataset add_label(const Dataset& dataset, std::string_view label,
                  std::string_view class_attribute_name,
                  const std::vector<std::string>& label_set) {
    if (dataset.labeled()) {
        throw Error("dataset already has a class attribute ('" +
                    dataset.schema.class_attribute().name() + "')");
    }
    std::size_t label_index = label_set.size();
    for (std::size_t i = 0; i < label_set.size(); ++i) {
        if (label_set[i] == label) {
            label_index = i;
            break;
        }
    }
    if (label_index == label_set.size()) {
        std::ostringstream msg;
        msg << "label '" << label << "' is not in the configured label set {";
        for (std::size_t i = 0; i < label_set.size(); ++i) {
            msg << (i ? ", " : "") << label_set[i];
        }
        msg << "}";
        throw Error(msg.str());
    }

    std::vector<AttributeSpec> attrs = dataset.schema.attributes();
    attrs.push_back(AttributeSpec::nominal(std::string(class_attribute_name), label_set));
    Dataset out;
    out.schema = Schema(std::move(attrs), dataset.schema.size());
    out.name = dataset.name;
    out.instances = dataset.instances;
    for (Instance& inst : out.instances) {
        inst.values.push_back(Cell::category(label_index));
    }
    return out;
}

namespace {

// Union of nominal domains in first-seen order across the inputs.
std::vector<std::string> union_domain(const std::vector<Dataset>& datasets, std::size_t attr) {
    std::vector<std::string> domain;
    std::unordered_set<std::string> seen;
    for (const Dataset& ds : datasets) {
        for (const auto& value : ds.schema.attribute(attr).domain()) {
            if (seen.insert(value).second) domain.push_back(value);
        }
    }
    return domain;
}

}  // namespace

Dataset merge(const std::vector<Dataset>& datasets) {
    if (datasets.empty()) throw Error("merge needs at least one dataset");
    const Schema& first = datasets.front().schema;
    for (std::size_t d = 1; d < datasets.size(); ++d) {
        const Schema& other = datasets[d].schema;
        if (other.size() != first.size()) {
            throw Error("dataset '" + datasets[d].name + "' has " +
                        std::to_string(other.size()) + " attributes, expected " +
                        std::to_string(first.size()));
        }
        for (std::size_t a = 0; a < first.size(); ++a) {
            if (other.attribute(a).name() != first.attribute(a).name() ||
                other.attribute(a).kind() != first.attribute(a).kind()) {
                throw Error("attribute " + std::to_string(a + 1) + " differs: '" +
                            first.attribute(a).name() + "' (" +
                            to_string(first.attribute(a).kind()) + ") vs '" +
                            other.attribute(a).name() + "' (" +
                            to_string(other.attribute(a).kind()) + ")");
            }
        }
        if (other.class_index() != first.class_index()) {
            throw Error("class attribute position differs between '" +
                        datasets.front().name + "' and '" + datasets[d].name + "'");
        }
    }

    std::vector<AttributeSpec> attrs;
    attrs.reserve(first.size());
    for (std::size_t a = 0; a < first.size(); ++a) {
        const AttributeSpec& spec = first.attribute(a);
        if (spec.kind() == AttributeKind::Nominal) {
            attrs.push_back(AttributeSpec::nominal(spec.name(), union_domain(datasets, a)));
        } else {
            attrs.push_back(spec);
        }
    }
    Schema schema(std::move(attrs), first.class_index());

    Dataset out;
    out.schema = schema;
    out.name = datasets.front().name;
    std::size_t rows = 0;
    for (const Dataset& ds : datasets) rows += ds.instances.size();
    out.instances.reserve(rows);

    for (const Dataset& ds : datasets) {
        // Category re-map from this dataset's domain into the union.
        std::vector<std::vector<std::size_t>> remap(schema.size());
        for (std::size_t a = 0; a < schema.size(); ++a) {
            const AttributeSpec& src = ds.schema.attribute(a);
            if (src.kind() != AttributeKind::Nominal) continue;
            remap[a].reserve(src.domain().size());
            for (const auto& value : src.domain()) {
                remap[a].push_back(*schema.attribute(a).index_of(value));
            }
        }
        for (const Instance& inst : ds.instances) {
            Instance copy = inst;
            for (std::size_t a = 0; a < schema.size(); ++a) {
                if (copy.values[a].is_category()) {
                    copy.values[a] = Cell::category(remap[a][copy.values[a].category()]);
                }
            }
            out.instances.push_back(std::move(copy));
        }
    }
    return out;
}

std::pair<Dataset, Dataset> percentage_split(const Dataset& dataset, double train_fraction,
                                             std::uint64_t seed) {
    if (dataset.instances.empty()) throw Error("cannot split an empty dataset");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("train fraction must lie in (0,1)");
    }

    std::vector<std::size_t> order(dataset.instances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    detail::SeededRng rng(seed);
    detail::shuffle(order, rng);

    const auto n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(order.size())));

    Dataset train;
    train.schema = dataset.schema;
    train.name = dataset.name + "-train";
    Dataset test;
    test.schema = dataset.schema;
    test.name = dataset.name + "-test";
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? train : test).instances.push_back(dataset.instances[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace netrec
