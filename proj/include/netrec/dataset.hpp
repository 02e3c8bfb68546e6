#ifndef NETREC_DATASET_HPP
#define NETREC_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "netrec/error.hpp"

namespace netrec {

enum class AttributeKind { Numeric, Nominal, Text };

/// Typed description of one capture column.
class AttributeSpec {
public:
    static AttributeSpec numeric(std::string name);
    /// Nominal domain must be non-empty and duplicate-free; order is kept.
    static AttributeSpec nominal(std::string name, std::vector<std::string> domain);
    static AttributeSpec text(std::string name);

    const std::string& name() const { return name_; }
    AttributeKind kind() const { return kind_; }
    const std::vector<std::string>& domain() const { return domain_; }
    std::optional<std::size_t> index_of(std::string_view value) const;

    bool operator==(const AttributeSpec&) const = default;

private:
    AttributeSpec(std::string name, AttributeKind kind, std::vector<std::string> domain)
        : name_(std::move(name)), kind_(kind), domain_(std::move(domain)) {}

    std::string name_;
    AttributeKind kind_;
    std::vector<std::string> domain_;  // nominal only
};

const char* to_string(AttributeKind kind);

/// Ordered attribute list plus an optional class designation.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<AttributeSpec> attributes,
                    std::optional<std::size_t> class_index = std::nullopt);

    std::size_t size() const { return attributes_.size(); }
    const std::vector<AttributeSpec>& attributes() const { return attributes_; }
    const AttributeSpec& attribute(std::size_t i) const { return attributes_.at(i); }
    std::optional<std::size_t> class_index() const { return class_index_; }
    bool labeled() const { return class_index_.has_value(); }

    /// The class attribute; throws when the schema is unlabeled.
    const AttributeSpec& class_attribute() const;
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Short content hash over names, kinds, domains and class designation.
    std::string fingerprint() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<AttributeSpec> attributes_;
    std::optional<std::size_t> class_index_;
};

/// One value of one attribute: number, category index, free text, or missing.
class Cell {
public:
    Cell() = default;  // missing
    static Cell missing() { return Cell(); }
    static Cell number(double v) { return Cell(Value(v)); }
    static Cell category(std::size_t index) { return Cell(Value(index)); }
    static Cell text(std::string s) { return Cell(Value(std::move(s))); }

    bool is_missing() const { return value_.index() == 0; }
    bool is_number() const { return value_.index() == 1; }
    bool is_category() const { return value_.index() == 2; }
    bool is_text() const { return value_.index() == 3; }

    double number() const { return std::get<1>(value_); }
    std::size_t category() const { return std::get<2>(value_); }
    const std::string& text() const { return std::get<3>(value_); }

    bool operator==(const Cell&) const = default;

private:
    using Value = std::variant<std::monostate, double, std::size_t, std::string>;
    explicit Cell(Value v) : value_(std::move(v)) {}
    Value value_;
};

/// One packet record. Fractional weights only arise from missing-value
/// distribution inside the tree learner; user-supplied rows carry weight 1.
struct Instance {
    std::vector<Cell> values;
    double weight = 1.0;
};

struct Dataset {
    Schema schema;
    std::vector<Instance> instances;
    std::string name = "dataset";

    std::size_t n_rows() const { return instances.size(); }
    std::size_t n_attributes() const { return schema.size(); }
    bool labeled() const { return schema.labeled(); }

    /// Class index of a row, or nullopt when the class cell is missing.
    std::optional<std::size_t> class_of(std::size_t row) const;

    /// Throws when any instance does not conform to the schema.
    void validate() const;
};

/// The paper's activity labels; the label set is configurable everywhere.
const std::vector<std::string>& default_labels();

/// Throws when the instance's cells do not fit the schema. Missing cells
/// always conform; the class cell is skipped when ignore_class is set.
void validate_against_schema(const Schema& schema, const Instance& instance,
                             bool ignore_class = false);

// --- Preprocessing operations (all return new datasets) ---

Dataset drop_column(const Dataset& dataset, std::string_view name);

/// Removes every double-quote character from a text column. An all-quote
/// cell becomes empty text, not missing.
Dataset strip_quotes(const Dataset& dataset, std::string_view column);

/// Appends a nominal class attribute over `label_set` and assigns `label`
/// to every instance. The dataset must not be labeled yet.
Dataset add_label(const Dataset& dataset, std::string_view label,
                  std::string_view class_attribute_name,
                  const std::vector<std::string>& label_set = default_labels());

/// Concatenates datasets with compatible schemas (same names/kinds/order);
/// nominal domains are unioned in first-seen order and categories re-mapped.
Dataset merge(const std::vector<Dataset>& datasets);

/// Deterministic seeded shuffle, then the first ceil(fraction*n) rows train.
std::pair<Dataset, Dataset> percentage_split(const Dataset& dataset,
                                             double train_fraction,
                                             std::uint64_t seed);

}  // namespace netrec

#endif
