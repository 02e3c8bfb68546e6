#include "netrec/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "netrec/detail/rng.hpp"

namespace netrec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t score_argmax(const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

// Scores one test set against a trained model, appending to `pool`.
// Returns the prediction wall-clock.
double score_fold(const AnyModel& model, const Dataset& test,
                  std::vector<ScoredPrediction>& pool) {
    const auto start = Clock::now();
    const std::size_t class_index = *test.schema.class_index();
    const SchemaAligner aligner(model_schema(model), test.schema);
    for (const Instance& inst : test.instances) {
        const Cell& label = inst.values[class_index];
        if (label.is_missing()) {
            throw Error("test instance has a missing class value");
        }
        pool.push_back(
            {label.category(), predict_distribution(model, aligner.align(inst)), inst.weight});
    }
    return seconds_since(start);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

double ConfusionMatrix::total() const {
    return std::accumulate(cells.begin(), cells.end(), 0.0);
}

double ConfusionMatrix::trace() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_classes; ++i) sum += at(i, i);
    return sum;
}

std::vector<double> ConfusionMatrix::row_sums() const {
    std::vector<double> sums(n_classes, 0.0);
    for (std::size_t a = 0; a < n_classes; ++a) {
        for (std::size_t p = 0; p < n_classes; ++p) sums[a] += at(a, p);
    }
    return sums;
}

std::vector<double> ConfusionMatrix::column_sums() const {
    std::vector<double> sums(n_classes, 0.0);
    for (std::size_t a = 0; a < n_classes; ++a) {
        for (std::size_t p = 0; p < n_classes; ++p) sums[p] += at(a, p);
    }
    return sums;
}

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::TrainingSet: return "training_set";
        case Regime::PercentageSplit: return "percentage_split";
        case Regime::CrossValidation: return "cross_validation";
        case Regime::SuppliedTestSet: return "supplied_test_set";
    }
    return "unknown";
}

std::vector<std::pair<Dataset, Dataset>> stratified_folds(const Dataset& dataset,
                                                          std::size_t k, std::uint64_t seed) {
    if (!dataset.labeled()) throw Error("stratified folds require a labeled dataset");
    if (k < 2) throw Error("cross-validation needs k >= 2");
    if (k > dataset.instances.size()) {
        throw Error("k (" + std::to_string(k) + ") exceeds the instance count (" +
                    std::to_string(dataset.instances.size()) + ")");
    }

    const std::size_t n_classes = dataset.schema.class_attribute().domain().size();
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t r = 0; r < dataset.instances.size(); ++r) {
        const auto cls = dataset.class_of(r);
        if (!cls) {
            throw Error("row " + std::to_string(r + 1) +
                        " has a missing class value; clean the dataset before validation");
        }
        by_class[*cls].push_back(r);
    }

    // Per-class shuffle, then one round-robin cursor that runs on across
    // classes so every fold is non-empty whenever k <= n.
    detail::SeededRng rng(seed);
    std::vector<std::size_t> fold_of(dataset.instances.size(), 0);
    std::size_t cursor = 0;
    for (std::vector<std::size_t>& members : by_class) {
        detail::shuffle(members, rng);
        for (const std::size_t row : members) {
            fold_of[row] = cursor % k;
            ++cursor;
        }
    }

    std::vector<std::pair<Dataset, Dataset>> folds;
    folds.reserve(k);
    for (std::size_t f = 0; f < k; ++f) {
        Dataset train;
        train.schema = dataset.schema;
        train.name = dataset.name + "-fold" + std::to_string(f + 1) + "-train";
        Dataset test;
        test.schema = dataset.schema;
        test.name = dataset.name + "-fold" + std::to_string(f + 1) + "-test";
        for (std::size_t r = 0; r < dataset.instances.size(); ++r) {
            (fold_of[r] == f ? test : train).instances.push_back(dataset.instances[r]);
        }
        folds.emplace_back(std::move(train), std::move(test));
    }
    return folds;
}

double roc_area(const std::vector<ScoredPrediction>& predictions, std::size_t n_classes) {
    if (predictions.empty()) throw Error("ROC area of an empty prediction set");

    double weighted_sum = 0.0;
    double support_sum = 0.0;
    std::vector<std::pair<double, double>> scored;  // (score, weight), per class
    for (std::size_t c = 0; c < n_classes; ++c) {
        double pos = 0.0;
        double neg = 0.0;
        scored.clear();
        scored.reserve(predictions.size());
        std::vector<bool> is_pos;
        is_pos.reserve(predictions.size());
        for (const ScoredPrediction& p : predictions) {
            scored.emplace_back(p.scores[c], p.weight);
            is_pos.push_back(p.actual == c);
            (p.actual == c ? pos : neg) += p.weight;
        }
        if (pos <= 0.0 || neg <= 0.0) continue;

        // Mann-Whitney with tie groups counting one half.
        std::vector<std::size_t> order(scored.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&scored](std::size_t x, std::size_t y) {
            return scored[x].first < scored[y].first;
        });
        double correct_pairs = 0.0;
        double neg_below = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            double pos_here = 0.0;
            double neg_here = 0.0;
            while (j < order.size() &&
                   scored[order[j]].first == scored[order[i]].first) {
                (is_pos[order[j]] ? pos_here : neg_here) += scored[order[j]].second;
                ++j;
            }
            correct_pairs += pos_here * (neg_below + 0.5 * neg_here);
            neg_below += neg_here;
            i = j;
        }
        weighted_sum += pos * (correct_pairs / (pos * neg));
        support_sum += pos;
    }
    if (support_sum <= 0.0) {
        throw Error("ROC area undefined: no class has both positives and negatives");
    }
    return weighted_sum / support_sum;
}

EvaluationReport evaluate_on(const std::vector<ScoredPrediction>& predictions,
                             const std::vector<std::string>& class_domain) {
    if (predictions.empty()) throw Error("cannot evaluate an empty prediction list");
    const std::size_t k = class_domain.size();

    EvaluationReport report;
    report.class_domain = class_domain;
    report.confusion = ConfusionMatrix(k);
    for (const ScoredPrediction& p : predictions) {
        if (p.actual >= k || p.scores.size() != k) {
            throw Error("prediction does not match the class domain");
        }
        report.confusion.at(p.actual, score_argmax(p.scores)) += p.weight;
    }

    const double total = report.confusion.total();
    const std::vector<double> support = report.confusion.row_sums();
    const std::vector<double> predicted = report.confusion.column_sums();

    report.accuracy = report.confusion.trace() / total;

    double precision_sum = 0.0;
    double recall_cancelled = 0.0;  // sum of TP; weighted recall = trace/total exactly
    double f_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double tp = report.confusion.at(c, c);
        const double prec = predicted[c] > 0.0 ? tp / predicted[c] : 0.0;
        if (predicted[c] <= 0.0 && support[c] > 0.0) {
            report.empty_prediction_classes.push_back(c);
        }
        const double rec = support[c] > 0.0 ? tp / support[c] : 0.0;
        const double f = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        precision_sum += support[c] * prec;
        recall_cancelled += tp;
        f_sum += support[c] * f;
    }
    report.precision = precision_sum / total;
    report.recall = recall_cancelled / total;
    report.f_measure = f_sum / total;

    try {
        report.roc_area = roc_area(predictions, k);
    } catch (const Error&) {
        report.roc_area.reset();  // single-class evaluations have no ROC
    }
    return report;
}

EvaluationReport cross_validate(const Dataset& dataset, const Learner& learner,
                                std::size_t k, std::uint64_t seed) {
    auto folds = stratified_folds(dataset, k, seed);

    std::vector<ScoredPrediction> pool;
    pool.reserve(dataset.instances.size());
    double train_seconds = 0.0;
    double test_seconds = 0.0;
    for (const auto& [train, test] : folds) {
        const auto start = Clock::now();
        const AnyModel model = learner(train);
        train_seconds += seconds_since(start);
        test_seconds += score_fold(model, test, pool);
    }

    EvaluationReport report = evaluate_on(pool, dataset.schema.class_attribute().domain());
    report.regime = Regime::CrossValidation;
    report.folds = k;
    report.train_seconds = train_seconds;
    report.test_seconds = test_seconds;
    return report;
}

EvaluationReport evaluate_training_set(const Dataset& dataset, const Learner& learner) {
    const auto start = Clock::now();
    const AnyModel model = learner(dataset);
    const double train_seconds = seconds_since(start);

    std::vector<ScoredPrediction> pool;
    pool.reserve(dataset.instances.size());
    const double test_seconds = score_fold(model, dataset, pool);

    EvaluationReport report = evaluate_on(pool, dataset.schema.class_attribute().domain());
    report.regime = Regime::TrainingSet;
    report.train_seconds = train_seconds;
    report.test_seconds = test_seconds;
    return report;
}

EvaluationReport evaluate_percentage_split(const Dataset& dataset, const Learner& learner,
                                           double train_fraction, std::uint64_t seed) {
    const auto [train, test] = percentage_split(dataset, train_fraction, seed);
    if (test.instances.empty()) {
        throw Error("percentage split left no test instances; lower the train fraction");
    }
    EvaluationReport report = evaluate_supplied(train, test, learner);
    report.regime = Regime::PercentageSplit;
    return report;
}

EvaluationReport evaluate_supplied(const Dataset& train, const Dataset& test,
                                   const Learner& learner) {
    if (!test.labeled()) {
        throw Error("the supplied test set has no class attribute to score against");
    }
    const auto start = Clock::now();
    const AnyModel model = learner(train);
    const double train_seconds = seconds_since(start);

    // Actual classes are mapped into the training domain by value name.
    const auto& train_domain = train.schema.class_attribute().domain();
    const auto& test_domain = test.schema.class_attribute().domain();
    std::vector<std::size_t> label_map(test_domain.size());
    for (std::size_t i = 0; i < test_domain.size(); ++i) {
        const auto idx = train.schema.class_attribute().index_of(test_domain[i]);
        if (!idx) {
            throw Error("test class value '" + test_domain[i] +
                        "' does not occur in the training label set");
        }
        label_map[i] = *idx;
    }

    std::vector<ScoredPrediction> pool;
    pool.reserve(test.instances.size());
    const auto t0 = Clock::now();
    const SchemaAligner aligner(model_schema(model), test.schema);
    const std::size_t class_index = *test.schema.class_index();
    for (const Instance& inst : test.instances) {
        const Cell& label = inst.values[class_index];
        if (label.is_missing()) throw Error("test instance has a missing class value");
        pool.push_back({label_map[label.category()],
                        predict_distribution(model, aligner.align(inst)), inst.weight});
    }
    const double test_seconds = seconds_since(t0);

    EvaluationReport report = evaluate_on(pool, train_domain);
    report.regime = Regime::SuppliedTestSet;
    report.train_seconds = train_seconds;
    report.test_seconds = test_seconds;
    return report;
}

std::string render_report(const EvaluationReport& report, bool include_timing) {
    std::ostringstream os;
    os << "=== Evaluation (" << to_string(report.regime);
    if (report.regime == Regime::CrossValidation) os << ", k=" << report.folds;
    os << ") ===\n";
    if (report.regime == Regime::TrainingSet) {
        os << "(optimistic: the validation data is the training data)\n";
    }
    os << '\n';

    const int label_width = 12;
    auto row = [&os](const std::string& label, const std::string& value) {
        os << label;
        for (std::size_t i = label.size(); i < label_width; ++i) os << ' ';
        os << value << '\n';
    };
    row("Accuracy", format_fixed(report.accuracy, 6));
    if (include_timing) {
        row("Run time", format_fixed(report.train_seconds, 2) + " s");
    }
    row("Precision", format_fixed(report.precision, 3));
    row("Recall", format_fixed(report.recall, 3));
    row("F-measure", format_fixed(report.f_measure, 3));
    row("ROC Area", report.roc_area ? format_fixed(*report.roc_area, 3) : "n/a");

    os << "\nConfusion matrix (rows = actual, columns = predicted)\n";
    std::size_t name_width = 0;
    for (const auto& name : report.class_domain) name_width = std::max(name_width, name.size());
    for (std::size_t a = 0; a < report.confusion.n_classes; ++a) {
        os << "  " << report.class_domain[a];
        for (std::size_t i = report.class_domain[a].size(); i < name_width; ++i) os << ' ';
        for (std::size_t p = 0; p < report.confusion.n_classes; ++p) {
            os << ' ' << format_fixed(report.confusion.at(a, p), 1);
        }
        os << '\n';
    }
    for (const std::size_t c : report.empty_prediction_classes) {
        os << "note: class '" << report.class_domain[c]
           << "' was never predicted; its precision is reported as 0\n";
    }
    return os.str();
}

std::string report_to_json(const EvaluationReport& report, bool include_timing) {
    nlohmann::json doc = {
        {"regime", to_string(report.regime)},
        {"accuracy", report.accuracy},
        {"precision", report.precision},
        {"recall", report.recall},
        {"f_measure", report.f_measure},
        {"class_domain", report.class_domain},
    };
    if (report.regime == Regime::CrossValidation) doc["folds"] = report.folds;
    if (report.roc_area) {
        doc["roc_area"] = *report.roc_area;
    } else {
        doc["roc_area"] = nullptr;
    }
    if (include_timing) {
        doc["train_seconds"] = report.train_seconds;
        doc["test_seconds"] = report.test_seconds;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t a = 0; a < report.confusion.n_classes; ++a) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t p = 0; p < report.confusion.n_classes; ++p) {
            r.push_back(report.confusion.at(a, p));
        }
        rows.push_back(std::move(r));
    }
    doc["confusion"] = std::move(rows);
    if (!report.empty_prediction_classes.empty()) {
        doc["never_predicted_classes"] = report.empty_prediction_classes;
    }
    return doc.dump(1, '\t') + "\n";
}

}  // namespace netrec
