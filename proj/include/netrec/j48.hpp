#ifndef NETREC_J48_HPP
#define NETREC_J48_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netrec/criteria.hpp"
#include "netrec/dataset.hpp"

namespace netrec {

/// A node's test: one child per domain value for nominal attributes, or a
/// binary <=/> threshold at a midpoint of observed values for numeric ones.
struct SplitTest {
    enum class Kind { NominalMultiway, NumericThreshold };

    Kind kind = Kind::NominalMultiway;
    std::size_t attribute = 0;
    double threshold = 0.0;  // NumericThreshold only

    static SplitTest nominal_multiway(std::size_t attribute) {
        return SplitTest{Kind::NominalMultiway, attribute, 0.0};
    }
    static SplitTest numeric_threshold(std::size_t attribute, double threshold) {
        return SplitTest{Kind::NumericThreshold, attribute, threshold};
    }

    bool operator==(const SplitTest&) const = default;
};

struct TreeNode {
    std::optional<SplitTest> test;    // nullopt = leaf
    std::vector<TreeNode> children;   // matches test arity
    ClassDistribution distribution;   // training weights; fallback for missing
    std::size_t predicted = 0;        // argmax(distribution), ties lowest

    bool is_leaf() const { return !test.has_value(); }
    std::size_t leaf_count() const;
    std::size_t depth() const;
};

/// Defaults mirror Weka's J48 so results are comparable.
struct J48Params {
    Criterion criterion = Criterion::GainRatio;
    double confidence = 0.25;        // pruning confidence, (0, 0.5]
    double min_leaf_weight = 2.0;    // >= 1
    bool pruning = true;
    std::optional<int> max_depth;
};

struct TreeModel {
    Schema schema;
    std::string schema_fingerprint;
    TreeNode root;
    J48Params params;
    std::size_t dropped_missing_class = 0;  // training rows without a label
};

/// Grows a C4.5-style tree: gain-ratio (or plain information-gain) attribute
/// selection, binary numeric thresholds, fractional distribution of missing
/// values, and confidence-based pruning. Deterministic: criterion ties break
/// on lowest attribute index, then lowest threshold.
TreeModel train_tree(const Dataset& dataset, const J48Params& params = {});

/// Routes the instance down the tree; missing split values descend every
/// child weighted by training branch weight. Returns the Laplace-smoothed
/// per-class distribution (sums to 1, strictly positive).
std::vector<double> predict_distribution(const TreeModel& model, const Instance& instance);

/// Bottom-up pessimistic pruning: each internal node is kept, collapsed to a
/// leaf, or replaced by its largest child, whichever minimises the
/// upper-confidence-bound error estimate. Leaf count never increases.
TreeNode prune(const TreeNode& root, double confidence);

/// Weka-style indented one-test-per-line rendering; byte-stable per model.
std::string render_text(const TreeModel& model);

}  // namespace netrec

#endif
