#ifndef NETREC_NAIVE_BAYES_HPP
#define NETREC_NAIVE_BAYES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "netrec/dataset.hpp"

namespace netrec {

/// Gaussian sufficient statistics (weight, mean, sum of squared deviations).
struct GaussianStat {
    double weight = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    /// Numerically stable single-pass (West) update.
    void add(double x, double w);

    double variance() const { return weight > 0.0 ? m2 / weight : 0.0; }
};

struct NominalStat {
    std::vector<double> counts;

    double total() const;
    void add(std::size_t category, double w) { counts[category] += w; }
};

struct BayesParams {
    double alpha = 1.0;  // Laplace smoothing for nominal likelihoods
};

/// Naive Bayes over mixed numeric/nominal attributes. Incrementally
/// updateable; prediction is done in log space with a variance floor of
/// max(var, 1e-6 * range^2, 1e-12) applied at evaluation only.
class BayesModel {
public:
    BayesModel() = default;
    explicit BayesModel(Schema schema, BayesParams params = {});

    /// Folds one labeled instance into the sufficient statistics in
    /// O(#attributes). Throws when the class cell is missing.
    void update_one(const Instance& instance);

    /// Posterior per class: unsmoothed priors, Laplace-smoothed nominal
    /// likelihoods, floored Gaussian densities; missing cells contribute
    /// nothing. Sums to 1.
    std::vector<double> predict_distribution(const Instance& instance) const;

    const Schema& schema() const { return schema_; }
    const std::string& schema_fingerprint() const { return fingerprint_; }
    const BayesParams& params() const { return params_; }
    const std::vector<double>& class_counts() const { return class_counts_; }
    double total_weight() const;

    // Persistence accessors; stats are indexed [attribute][class].
    const std::vector<std::vector<GaussianStat>>& gaussian_stats() const { return gaussian_; }
    const std::vector<std::vector<NominalStat>>& nominal_stats() const { return nominal_; }
    const std::vector<double>& attribute_min() const { return attr_min_; }
    const std::vector<double>& attribute_max() const { return attr_max_; }

    // Used by the loader to rebuild a persisted model verbatim.
    void restore(std::vector<double> class_counts,
                 std::vector<std::vector<GaussianStat>> gaussian,
                 std::vector<std::vector<NominalStat>> nominal,
                 std::vector<double> attr_min, std::vector<double> attr_max);

private:
    double floored_variance(std::size_t attribute, const GaussianStat& stat) const;

    Schema schema_;
    std::string fingerprint_;
    BayesParams params_;
    std::vector<double> class_counts_;
    std::vector<std::vector<GaussianStat>> gaussian_;  // [attr][class]
    std::vector<std::vector<NominalStat>> nominal_;    // [attr][class]
    std::vector<double> attr_min_;  // observed numeric range, for the floor
    std::vector<double> attr_max_;
};

/// Batch trainer; computes the statistics by a two-pass route and is
/// equivalent to folding update_one over the instances. Rows with a missing
/// class are skipped (counted in dropped_missing_class).
struct BatchTrainResult {
    BayesModel model;
    std::size_t dropped_missing_class = 0;
};
BatchTrainResult train_bayes_counted(const Dataset& dataset, BayesParams params = {});
BayesModel train_bayes(const Dataset& dataset, BayesParams params = {});

/// The updateable variant: folds update_one over the instances in order.
/// Agrees with train_bayes within floating-point noise.
BayesModel train_bayes_updateable(const Dataset& dataset, BayesParams params = {});

}  // namespace netrec

#endif
