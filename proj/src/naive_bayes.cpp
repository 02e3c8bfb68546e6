#include "netrec/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netrec/error.hpp"

namespace netrec {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

}  // namespace

void GaussianStat::add(double x, double w) {
    weight += w;
    const double delta = x - mean;
    mean += (w / weight) * delta;
    m2 += w * delta * (x - mean);
}

double NominalStat::total() const {
    double sum = 0.0;
    for (double c : counts) sum += c;
    return sum;
}

BayesModel::BayesModel(Schema schema, BayesParams params)
    : schema_(std::move(schema)), params_(params) {
    if (!schema_.labeled()) throw Error("naive Bayes requires a labeled schema");
    const std::size_t k = schema_.class_attribute().domain().size();
    fingerprint_ = schema_.fingerprint();
    class_counts_.assign(k, 0.0);
    gaussian_.resize(schema_.size());
    nominal_.resize(schema_.size());
    attr_min_.assign(schema_.size(), std::numeric_limits<double>::infinity());
    attr_max_.assign(schema_.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < schema_.size(); ++a) {
        if (a == *schema_.class_index()) continue;
        switch (schema_.attribute(a).kind()) {
            case AttributeKind::Numeric:
                gaussian_[a].assign(k, GaussianStat{});
                break;
            case AttributeKind::Nominal:
                nominal_[a].assign(
                    k, NominalStat{std::vector<double>(schema_.attribute(a).domain().size(), 0.0)});
                break;
            case AttributeKind::Text:
                break;  // text is forensic context, never a feature
        }
    }
}

double BayesModel::total_weight() const {
    double sum = 0.0;
    for (double c : class_counts_) sum += c;
    return sum;
}

void BayesModel::update_one(const Instance& instance) {
    const std::size_t class_index = *schema_.class_index();
    validate_against_schema(schema_, instance);
    const Cell& label = instance.values[class_index];
    if (label.is_missing()) throw Error("cannot update on an instance with a missing class");
    const std::size_t cls = label.category();
    if (cls >= class_counts_.size()) throw Error("class index out of domain");

    class_counts_[cls] += instance.weight;
    for (std::size_t a = 0; a < schema_.size(); ++a) {
        if (a == class_index) continue;
        const Cell& cell = instance.values[a];
        if (cell.is_missing()) continue;  // skip only this attribute's statistic
        switch (schema_.attribute(a).kind()) {
            case AttributeKind::Numeric:
                gaussian_[a][cls].add(cell.number(), instance.weight);
                attr_min_[a] = std::min(attr_min_[a], cell.number());
                attr_max_[a] = std::max(attr_max_[a], cell.number());
                break;
            case AttributeKind::Nominal:
                nominal_[a][cls].add(cell.category(), instance.weight);
                break;
            case AttributeKind::Text:
                break;
        }
    }
}

double BayesModel::floored_variance(std::size_t attribute, const GaussianStat& stat) const {
    double range = 0.0;
    if (attr_max_[attribute] > attr_min_[attribute]) {
        range = attr_max_[attribute] - attr_min_[attribute];
    }
    return std::max({stat.variance(), 1e-6 * range * range, 1e-12});
}

std::vector<double> BayesModel::predict_distribution(const Instance& instance) const {
    const std::size_t class_index = *schema_.class_index();
    const std::size_t k = class_counts_.size();
    validate_against_schema(schema_, instance, /*ignore_class=*/true);

    const double total = total_weight();
    std::vector<double> log_posterior(k, -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
        if (class_counts_[c] <= 0.0) continue;  // never seen: posterior stays 0
        double lp = std::log(class_counts_[c] / total);
        for (std::size_t a = 0; a < schema_.size(); ++a) {
            if (a == class_index) continue;
            const Cell& cell = instance.values[a];
            if (cell.is_missing()) continue;
            switch (schema_.attribute(a).kind()) {
                case AttributeKind::Numeric: {
                    const GaussianStat& stat = gaussian_[a][c];
                    if (stat.weight <= 0.0) break;  // attribute unseen for this class
                    const double var = floored_variance(a, stat);
                    const double diff = cell.number() - stat.mean;
                    lp += -0.5 * (kLog2Pi + std::log(var)) - diff * diff / (2.0 * var);
                    break;
                }
                case AttributeKind::Nominal: {
                    const NominalStat& stat = nominal_[a][c];
                    const double alpha = params_.alpha;
                    const double denom =
                        stat.total() + alpha * static_cast<double>(stat.counts.size());
                    lp += std::log((stat.counts[cell.category()] + alpha) / denom);
                    break;
                }
                case AttributeKind::Text:
                    break;
            }
        }
        log_posterior[c] = lp;
    }

    // Stabilize: subtract the max before exponentiation.
    double max_lp = -std::numeric_limits<double>::infinity();
    for (double lp : log_posterior) max_lp = std::max(max_lp, lp);
    std::vector<double> posterior(k, 0.0);
    if (!std::isfinite(max_lp)) {
        // empty model: fall back to a uniform posterior
        std::fill(posterior.begin(), posterior.end(), 1.0 / static_cast<double>(k));
        return posterior;
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (std::isfinite(log_posterior[c])) {
            posterior[c] = std::exp(log_posterior[c] - max_lp);
            sum += posterior[c];
        }
    }
    for (double& p : posterior) p /= sum;
    return posterior;
}

void BayesModel::restore(std::vector<double> class_counts,
                         std::vector<std::vector<GaussianStat>> gaussian,
                         std::vector<std::vector<NominalStat>> nominal,
                         std::vector<double> attr_min, std::vector<double> attr_max) {
    class_counts_ = std::move(class_counts);
    gaussian_ = std::move(gaussian);
    nominal_ = std::move(nominal);
    attr_min_ = std::move(attr_min);
    attr_max_ = std::move(attr_max);
}

BatchTrainResult train_bayes_counted(const Dataset& dataset, BayesParams params) {
    if (!dataset.labeled()) throw Error("naive Bayes training requires a labeled dataset");
    if (dataset.instances.empty()) throw Error("naive Bayes training requires instances");
    dataset.validate();

    BayesModel model(dataset.schema, params);
    const std::size_t class_index = *dataset.schema.class_index();
    const std::size_t k = dataset.schema.class_attribute().domain().size();

    // Two-pass batch route: weighted means first, squared deviations second.
    // Folding update_one over the data must agree with this within 1e-9.
    std::vector<double> class_counts(k, 0.0);
    std::vector<std::vector<GaussianStat>> gaussian(dataset.schema.size());
    std::vector<std::vector<NominalStat>> nominal(dataset.schema.size());
    std::vector<double> attr_min(dataset.schema.size(), std::numeric_limits<double>::infinity());
    std::vector<double> attr_max(dataset.schema.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < dataset.schema.size(); ++a) {
        if (a == class_index) continue;
        if (dataset.schema.attribute(a).kind() == AttributeKind::Numeric) {
            gaussian[a].assign(k, GaussianStat{});
        } else if (dataset.schema.attribute(a).kind() == AttributeKind::Nominal) {
            nominal[a].assign(
                k, NominalStat{std::vector<double>(dataset.schema.attribute(a).domain().size(), 0.0)});
        }
    }

    std::size_t dropped = 0;
    for (const Instance& inst : dataset.instances) {
        const Cell& label = inst.values[class_index];
        if (label.is_missing()) {
            ++dropped;
            continue;
        }
        const std::size_t cls = label.category();
        class_counts[cls] += inst.weight;
        for (std::size_t a = 0; a < dataset.schema.size(); ++a) {
            if (a == class_index) continue;
            const Cell& cell = inst.values[a];
            if (cell.is_missing()) continue;
            if (dataset.schema.attribute(a).kind() == AttributeKind::Numeric) {
                GaussianStat& stat = gaussian[a][cls];
                stat.weight += inst.weight;
                stat.mean += inst.weight * cell.number();  // holds sum(w*x) for now
                attr_min[a] = std::min(attr_min[a], cell.number());
                attr_max[a] = std::max(attr_max[a], cell.number());
            } else if (dataset.schema.attribute(a).kind() == AttributeKind::Nominal) {
                nominal[a][cls].add(cell.category(), inst.weight);
            }
        }
    }
    for (auto& per_class : gaussian) {
        for (GaussianStat& stat : per_class) {
            if (stat.weight > 0.0) stat.mean /= stat.weight;
        }
    }
    for (const Instance& inst : dataset.instances) {
        const Cell& label = inst.values[class_index];
        if (label.is_missing()) continue;
        const std::size_t cls = label.category();
        for (std::size_t a = 0; a < dataset.schema.size(); ++a) {
            if (a == class_index || gaussian[a].empty()) continue;
            const Cell& cell = inst.values[a];
            if (cell.is_missing()) continue;
            GaussianStat& stat = gaussian[a][cls];
            const double diff = cell.number() - stat.mean;
            stat.m2 += inst.weight * diff * diff;
        }
    }

    model.restore(std::move(class_counts), std::move(gaussian), std::move(nominal),
                  std::move(attr_min), std::move(attr_max));
    return {std::move(model), dropped};
}

BayesModel train_bayes(const Dataset& dataset, BayesParams params) {
    return train_bayes_counted(dataset, params).model;
}

BayesModel train_bayes_updateable(const Dataset& dataset, BayesParams params) {
    if (!dataset.labeled()) throw Error("naive Bayes training requires a labeled dataset");
    if (dataset.instances.empty()) throw Error("naive Bayes training requires instances");
    BayesModel model(dataset.schema, params);
    const std::size_t class_index = *dataset.schema.class_index();
    for (const Instance& inst : dataset.instances) {
        if (inst.values[class_index].is_missing()) continue;
        model.update_one(inst);
    }
    return model;
}

}  // namespace netrec
