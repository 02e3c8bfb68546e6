#include "netrec/j48.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "netrec/error.hpp"

namespace netrec {

namespace {

constexpr double kMinGain = 1e-10;

// Inverse standard normal CDF (Acklam's rational approximation).
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// C4.5's pessimistic extra-error count: upper confidence bound (normal
// approximation to the binomial) on e observed errors out of n.
double add_errs(double n, double e, double cf) {
    cf = std::min(cf, 0.5);
    if (n <= 0.0) return 0.0;
    if (e < 1.0) {
        const double base = n * (1.0 - std::pow(cf, 1.0 / n));
        if (e == 0.0) return base;
        return base + e * (add_errs(n, 1.0, cf) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double z = normal_quantile(1.0 - cf);
    const double f = (e + 0.5) / n;
    const double upper =
        (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
        (1.0 + z * z / n);
    return upper * n - e;
}

struct Row {
    const Instance* instance;
    double weight;
};

struct Candidate {
    SplitTest test;
    double value = 0.0;
};

std::string format_weight(double w) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", w);
    std::string s(buf);
    // keep at least one decimal: 12.00 -> 12.0, 12.50 -> 12.5
    if (s.size() >= 2 && s[s.size() - 1] == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

std::string format_threshold(double t) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t);
    return std::string(buf, ptr);
}

class TreeGrower {
public:
    TreeGrower(const Dataset& dataset, const J48Params& params)
        : dataset_(dataset),
          params_(params),
          class_index_(*dataset.schema.class_index()),
          n_classes_(dataset.schema.class_attribute().domain().size()) {}

    TreeNode grow(std::vector<Row> rows, int depth) const {
        ClassDistribution dist = distribution(rows);
        if (!stop_here(dist, depth)) {
            if (const auto best = best_split(rows, dist)) {
                std::vector<std::vector<Row>> parts = partition(rows, best->test);
                rows.clear();
                rows.shrink_to_fit();
                std::vector<TreeNode> children;
                children.reserve(parts.size());
                for (auto& part : parts) {
                    children.push_back(grow(std::move(part), depth + 1));
                }
                const std::size_t predicted = dist.argmax();
                return TreeNode{best->test, std::move(children), std::move(dist), predicted};
            }
        }
        return make_leaf(std::move(dist));
    }

private:
    TreeNode make_leaf(ClassDistribution dist) const {
        const std::size_t predicted = dist.argmax();
        return TreeNode{std::nullopt, {}, std::move(dist), predicted};
    }

    ClassDistribution distribution(const std::vector<Row>& rows) const {
        ClassDistribution dist = ClassDistribution::zeros(n_classes_);
        for (const Row& row : rows) {
            dist.add(row.instance->values[class_index_].category(), row.weight);
        }
        return dist;
    }

    bool stop_here(const ClassDistribution& dist, int depth) const {
        if (dist.pure()) return true;
        if (dist.total < 2.0 * params_.min_leaf_weight) return true;
        if (params_.max_depth && depth >= *params_.max_depth) return true;
        return false;
    }

    bool usable(std::size_t attribute) const {
        if (attribute == class_index_) return false;
        return dataset_.schema.attribute(attribute).kind() != AttributeKind::Text;
    }

    // Criterion value for one concrete partition of the known-value rows.
    // The gain is scaled by the known fraction, and the missing weight forms
    // an extra branch of the split info, as in C4.5.
    std::optional<double> criterion_value(const ClassDistribution& known,
                                          const SplitPartition& split, double node_total,
                                          double missing_weight) const {
        std::size_t big_branches = 0;
        for (const auto& branch : split.branches) {
            if (branch.total >= params_.min_leaf_weight) ++big_branches;
        }
        if (big_branches < 2) return std::nullopt;

        double gain = information_gain(known, split);
        gain *= known.total / node_total;
        if (gain <= kMinGain) return std::nullopt;
        if (params_.criterion == Criterion::InformationGain) return gain;

        SplitPartition with_missing = split;
        if (missing_weight > 0.0) {
            ClassDistribution extra = ClassDistribution::zeros(0);
            extra.total = missing_weight;
            with_missing.branches.push_back(std::move(extra));
        }
        const double info = split_info(with_missing);
        if (info < 1e-10) return std::nullopt;
        return gain / info;
    }

    // Strictly-better comparison keeps the lowest attribute index and, within
    // a numeric attribute, the lowest threshold on ties.
    void consider(std::optional<Candidate>& best, SplitTest test, double value) const {
        if (!best || value > best->value) best = Candidate{test, value};
    }

    std::optional<Candidate> best_split(const std::vector<Row>& rows,
                                        const ClassDistribution& node_dist) const {
        std::optional<Candidate> best;
        for (std::size_t a = 0; a < dataset_.schema.size(); ++a) {
            if (!usable(a)) continue;
            if (dataset_.schema.attribute(a).kind() == AttributeKind::Nominal) {
                evaluate_nominal(rows, node_dist, a, best);
            } else {
                evaluate_numeric(rows, node_dist, a, best);
            }
        }
        return best;
    }

    void evaluate_nominal(const std::vector<Row>& rows, const ClassDistribution& node_dist,
                          std::size_t attribute, std::optional<Candidate>& best) const {
        const std::size_t arity = dataset_.schema.attribute(attribute).domain().size();
        SplitPartition split;
        split.branches.assign(arity, ClassDistribution::zeros(n_classes_));
        ClassDistribution known = ClassDistribution::zeros(n_classes_);
        double missing_weight = 0.0;
        for (const Row& row : rows) {
            const Cell& cell = row.instance->values[attribute];
            const std::size_t cls = row.instance->values[class_index_].category();
            if (cell.is_missing()) {
                missing_weight += row.weight;
            } else {
                split.branches[cell.category()].add(cls, row.weight);
                known.add(cls, row.weight);
            }
        }
        if (known.total <= 0.0) return;
        if (const auto value =
                criterion_value(known, split, node_dist.total, missing_weight)) {
            consider(best, SplitTest::nominal_multiway(attribute), *value);
        }
    }

    void evaluate_numeric(const std::vector<Row>& rows, const ClassDistribution& node_dist,
                          std::size_t attribute, std::optional<Candidate>& best) const {
        struct Point {
            double value;
            std::size_t cls;
            double weight;
        };
        std::vector<Point> points;
        points.reserve(rows.size());
        ClassDistribution known = ClassDistribution::zeros(n_classes_);
        double missing_weight = 0.0;
        for (const Row& row : rows) {
            const Cell& cell = row.instance->values[attribute];
            const std::size_t cls = row.instance->values[class_index_].category();
            if (cell.is_missing()) {
                missing_weight += row.weight;
            } else {
                points.push_back({cell.number(), cls, row.weight});
                known.add(cls, row.weight);
            }
        }
        if (points.size() < 2 || known.total <= 0.0) return;
        std::sort(points.begin(), points.end(),
                  [](const Point& x, const Point& y) { return x.value < y.value; });

        std::optional<Candidate> local;
        SplitPartition split;
        split.branches.assign(2, ClassDistribution::zeros(n_classes_));
        ClassDistribution& left = split.branches[0];
        ClassDistribution& right = split.branches[1];
        right = known;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            left.add(points[i].cls, points[i].weight);
            right.counts[points[i].cls] -= points[i].weight;
            right.total -= points[i].weight;
            if (points[i].value == points[i + 1].value) continue;  // not a boundary
            if (const auto value =
                    criterion_value(known, split, node_dist.total, missing_weight)) {
                const double threshold = (points[i].value + points[i + 1].value) / 2.0;
                consider(local, SplitTest::numeric_threshold(attribute, threshold), *value);
            }
        }
        if (local) consider(best, local->test, local->value);
    }

    std::vector<std::vector<Row>> partition(const std::vector<Row>& rows,
                                            const SplitTest& test) const {
        const std::size_t arity = test.kind == SplitTest::Kind::NominalMultiway
                                      ? dataset_.schema.attribute(test.attribute).domain().size()
                                      : 2;
        std::vector<std::vector<Row>> parts(arity);
        std::vector<double> branch_weight(arity, 0.0);
        double known_total = 0.0;
        std::vector<const Row*> missing;

        for (const Row& row : rows) {
            const Cell& cell = row.instance->values[test.attribute];
            if (cell.is_missing()) {
                missing.push_back(&row);
                continue;
            }
            const std::size_t branch =
                test.kind == SplitTest::Kind::NominalMultiway
                    ? cell.category()
                    : (cell.number() <= test.threshold ? 0 : 1);
            parts[branch].push_back(row);
            branch_weight[branch] += row.weight;
            known_total += row.weight;
        }
        // Missing values descend every branch with weight proportional to the
        // branch's known weight.
        for (const Row* row : missing) {
            for (std::size_t b = 0; b < arity; ++b) {
                if (branch_weight[b] <= 0.0) continue;
                parts[b].push_back({row->instance, row->weight * branch_weight[b] / known_total});
            }
        }
        return parts;
    }

    const Dataset& dataset_;
    const J48Params& params_;
    std::size_t class_index_;
    std::size_t n_classes_;
};

double leaf_error_estimate(const ClassDistribution& dist, double confidence) {
    const double errors = dist.total - dist.counts[dist.argmax()];
    return errors + add_errs(dist.total, errors, confidence);
}

double subtree_error_estimate(const TreeNode& node, double confidence) {
    if (node.is_leaf()) return leaf_error_estimate(node.distribution, confidence);
    double sum = 0.0;
    for (const TreeNode& child : node.children) {
        sum += subtree_error_estimate(child, confidence);
    }
    return sum;
}

void prune_in_place(TreeNode& node, double confidence) {
    if (node.is_leaf()) return;
    for (TreeNode& child : node.children) prune_in_place(child, confidence);

    const double est_subtree = subtree_error_estimate(node, confidence);
    const double est_leaf = leaf_error_estimate(node.distribution, confidence);

    std::size_t largest = 0;
    for (std::size_t i = 1; i < node.children.size(); ++i) {
        if (node.children[i].distribution.total > node.children[largest].distribution.total) {
            largest = i;
        }
    }
    // Raising a leaf child is never better than collapsing the node itself,
    // so only internal children are candidates. Their error rate is scaled to
    // the node's full weight (no data redistribution here).
    double est_raised = std::numeric_limits<double>::infinity();
    const TreeNode& big = node.children[largest];
    if (!big.is_leaf() && big.distribution.total > 0.0) {
        est_raised = subtree_error_estimate(big, confidence) *
                     (node.distribution.total / big.distribution.total);
    }

    if (est_leaf <= est_subtree + 0.1 && est_leaf <= est_raised + 0.1) {
        node.test.reset();
        node.children.clear();
        node.predicted = node.distribution.argmax();
    } else if (est_raised <= est_subtree + 0.1) {
        TreeNode raised = std::move(node.children[largest]);
        node = std::move(raised);
        prune_in_place(node, confidence);
    }
}

std::vector<double> laplace(const ClassDistribution& dist) {
    const std::size_t k = dist.n_classes();
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = (dist.counts[i] + 1.0) / (dist.total + static_cast<double>(k));
    }
    return out;
}

void accumulate_prediction(const TreeNode& node, const Instance& instance, double weight,
                           std::vector<double>& out) {
    if (node.is_leaf()) {
        const std::vector<double> leaf = laplace(node.distribution);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * leaf[i];
        return;
    }
    const SplitTest& test = *node.test;
    const Cell& cell = instance.values[test.attribute];
    if (!cell.is_missing()) {
        const std::size_t branch = test.kind == SplitTest::Kind::NominalMultiway
                                       ? cell.category()
                                       : (cell.number() <= test.threshold ? 0 : 1);
        accumulate_prediction(node.children[branch], instance, weight, out);
        return;
    }
    double total = 0.0;
    for (const TreeNode& child : node.children) total += child.distribution.total;
    if (total <= 0.0) {
        const std::vector<double> here = laplace(node.distribution);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * here[i];
        return;
    }
    for (const TreeNode& child : node.children) {
        if (child.distribution.total > 0.0) {
            accumulate_prediction(child, instance, weight * child.distribution.total / total, out);
        }
    }
}

void render_subtree(std::ostringstream& os, const TreeModel& model, const TreeNode& node,
                    const std::string& prefix) {
    const SplitTest& test = *node.test;
    const AttributeSpec& attr = model.schema.attribute(test.attribute);
    const auto& class_domain = model.schema.class_attribute().domain();
    for (std::size_t b = 0; b < node.children.size(); ++b) {
        os << prefix << attr.name();
        if (test.kind == SplitTest::Kind::NominalMultiway) {
            os << " = " << attr.domain()[b];
        } else {
            os << (b == 0 ? " <= " : " > ") << format_threshold(test.threshold);
        }
        const TreeNode& child = node.children[b];
        if (child.is_leaf()) {
            const double errors =
                child.distribution.total - child.distribution.counts[child.predicted];
            os << ": " << class_domain[child.predicted] << " ("
               << format_weight(child.distribution.total);
            if (errors >= 0.005) os << "/" << format_weight(errors);
            os << ")\n";
        } else {
            os << "\n";
            render_subtree(os, model, child, prefix + "|   ");
        }
    }
}

}  // namespace

std::size_t TreeNode::leaf_count() const {
    if (is_leaf()) return 1;
    std::size_t n = 0;
    for (const TreeNode& child : children) n += child.leaf_count();
    return n;
}

std::size_t TreeNode::depth() const {
    if (is_leaf()) return 0;
    std::size_t deepest = 0;
    for (const TreeNode& child : children) deepest = std::max(deepest, child.depth());
    return deepest + 1;
}

TreeModel train_tree(const Dataset& dataset, const J48Params& params) {
    if (!dataset.labeled()) throw Error("tree training requires a labeled dataset");
    if (dataset.instances.empty()) throw Error("tree training requires at least one instance");
    if (!(params.confidence > 0.0 && params.confidence <= 0.5)) {
        throw Error("pruning confidence must lie in (0, 0.5]");
    }
    if (!(params.min_leaf_weight >= 1.0)) throw Error("min_leaf_weight must be >= 1");
    dataset.validate();

    const std::size_t class_index = *dataset.schema.class_index();
    std::vector<Row> rows;
    rows.reserve(dataset.instances.size());
    std::size_t dropped = 0;
    for (const Instance& inst : dataset.instances) {
        if (inst.values[class_index].is_missing()) {
            ++dropped;  // unusable under supervised training
        } else {
            rows.push_back({&inst, inst.weight});
        }
    }
    if (rows.empty()) throw Error("all training instances have a missing class value");

    TreeGrower grower(dataset, params);
    TreeNode root = grower.grow(std::move(rows), 0);
    if (params.pruning) prune_in_place(root, params.confidence);

    TreeModel model;
    model.schema = dataset.schema;
    model.schema_fingerprint = model.schema.fingerprint();
    model.root = std::move(root);
    model.params = params;
    model.dropped_missing_class = dropped;
    return model;
}

std::vector<double> predict_distribution(const TreeModel& model, const Instance& instance) {
    validate_against_schema(model.schema, instance, /*ignore_class=*/true);
    const std::size_t k = model.schema.class_attribute().domain().size();
    std::vector<double> out(k, 0.0);
    accumulate_prediction(model.root, instance, 1.0, out);
    double sum = 0.0;
    for (double v : out) sum += v;
    for (double& v : out) v /= sum;
    return out;
}

TreeNode prune(const TreeNode& root, double confidence) {
    TreeNode out = root;
    prune_in_place(out, confidence);
    return out;
}

std::string render_text(const TreeModel& model) {
    std::ostringstream os;
    if (model.root.is_leaf()) {
        const auto& class_domain = model.schema.class_attribute().domain();
        const double errors =
            model.root.distribution.total - model.root.distribution.counts[model.root.predicted];
        os << ": " << class_domain[model.root.predicted] << " ("
           << format_weight(model.root.distribution.total);
        if (errors >= 0.005) os << "/" << format_weight(errors);
        os << ")\n";
    } else {
        render_subtree(os, model, model.root, "");
    }
    return os.str();
}

}  // namespace netrec
