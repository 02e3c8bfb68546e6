#ifndef NETREC_PREDICTOR_HPP
#define NETREC_PREDICTOR_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "netrec/dataset.hpp"
#include "netrec/model.hpp"

namespace netrec {

enum class ConfidenceLevel { High, Low };

const char* to_string(ConfidenceLevel level);

/// Whole-capture verdict: mean posterior per class (primary aggregate, sums
/// to 1), the fraction of instances voting for each class, and the decision.
struct CaptureVerdict {
    std::vector<std::string> class_domain;
    std::vector<double> mean_posterior;
    std::vector<double> predicted_fraction;
    std::size_t decided = 0;
    ConfidenceLevel confidence = ConfidenceLevel::Low;
    std::size_t instance_count = 0;
    double margin = 0.15;
};

struct Decision {
    std::size_t index = 0;  // argmax, ties to lowest class index
    ConfidenceLevel confidence = ConfidenceLevel::Low;
    double gap = 0.0;       // top score minus runner-up
};

/// The decision rule on any aggregate score vector: argmax wins, and the
/// verdict is high-confidence iff it beats the runner-up by `margin`.
Decision decide(std::span<const double> scores, double margin = 0.15);

/// Scores every capture row against the model and aggregates the evidence.
/// The capture is aligned to the training schema by attribute name; class
/// cells, if present, are ignored.
CaptureVerdict classify_capture(const AnyModel& model, const Dataset& capture,
                                double margin = 0.15);

/// Classes as rows, captures as columns, aggregates to 3 decimals, decided
/// label and confidence footer per column.
std::string render_verdict_table(const std::vector<CaptureVerdict>& verdicts,
                                 const std::vector<std::string>& capture_names);

/// Optional mutual-exclusivity pass: captures are decided in order of
/// decreasing margin and each high-confidence label is withdrawn from the
/// remaining captures' candidate sets.
std::vector<CaptureVerdict> apply_mutual_exclusion(std::vector<CaptureVerdict> verdicts);

}  // namespace netrec

#endif
