#ifndef NETREC_EVALUATION_HPP
#define NETREC_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netrec/dataset.hpp"
#include "netrec/model.hpp"

namespace netrec {

/// Weighted counts; rows = actual class, columns = predicted class.
struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<double> cells;  // row-major

    explicit ConfusionMatrix(std::size_t k = 0)
        : n_classes(k), cells(k * k, 0.0) {}

    double& at(std::size_t actual, std::size_t predicted) {
        return cells[actual * n_classes + predicted];
    }
    double at(std::size_t actual, std::size_t predicted) const {
        return cells[actual * n_classes + predicted];
    }
    double total() const;
    double trace() const;
    std::vector<double> row_sums() const;
    std::vector<double> column_sums() const;
};

enum class Regime { TrainingSet, PercentageSplit, CrossValidation, SuppliedTestSet };

const char* to_string(Regime regime);

struct EvaluationReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    double precision = 0.0;   // weighted by actual class support
    double recall = 0.0;      // weighted; algebraically equals accuracy
    double f_measure = 0.0;   // weighted
    std::optional<double> roc_area;  // absent when no class has pos+neg
    double train_seconds = 0.0;
    double test_seconds = 0.0;
    Regime regime = Regime::CrossValidation;
    std::size_t folds = 0;
    std::vector<std::string> class_domain;
    std::vector<std::size_t> empty_prediction_classes;  // precision forced to 0
};

/// One scored test instance: the actual class and the model's score vector.
struct ScoredPrediction {
    std::size_t actual = 0;
    std::vector<double> scores;
    double weight = 1.0;
};

using Learner = std::function<AnyModel(const Dataset&)>;

/// Stratified fold assignment: per-class seeded shuffle, then a round-robin
/// cursor that runs on across classes. Per-fold class counts differ from the
/// ideal proportion by less than one instance.
std::vector<std::pair<Dataset, Dataset>> stratified_folds(const Dataset& dataset,
                                                          std::size_t k,
                                                          std::uint64_t seed);

/// Trains on each fold complement, scores each test fold, and pools all
/// per-instance predictions into one report. Timing sums wall-clock around
/// the train/predict calls only.
EvaluationReport cross_validate(const Dataset& dataset, const Learner& learner,
                                std::size_t k = 10, std::uint64_t seed = 1);

/// Confusion matrix plus the full metric set from pooled predictions.
EvaluationReport evaluate_on(const std::vector<ScoredPrediction>& predictions,
                             const std::vector<std::string>& class_domain);

/// Support-weighted one-vs-rest Mann-Whitney AUC (ties count one half).
/// Throws when no class has both positives and negatives.
double roc_area(const std::vector<ScoredPrediction>& predictions,
                std::size_t n_classes);

// Remaining validation regimes. The supplied test set is aligned to the
// training schema by attribute name.
EvaluationReport evaluate_training_set(const Dataset& dataset, const Learner& learner);
EvaluationReport evaluate_percentage_split(const Dataset& dataset, const Learner& learner,
                                           double train_fraction, std::uint64_t seed);
EvaluationReport evaluate_supplied(const Dataset& train, const Dataset& test,
                                   const Learner& learner);

/// Aligned plain-text table mirroring the standard report rows (Accuracy,
/// Run time, Precision, Recall, F-measure, ROC Area) plus the confusion
/// matrix. Timing rows are omitted when include_timing is false so reports
/// can be compared byte for byte.
std::string render_report(const EvaluationReport& report, bool include_timing = true);

/// Machine-readable form of the same report.
std::string report_to_json(const EvaluationReport& report, bool include_timing = true);

}  // namespace netrec

#endif
