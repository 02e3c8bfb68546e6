#include "netrec/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace netrec {

const char* to_string(ConfidenceLevel level) {
    return level == ConfidenceLevel::High ? "high" : "low";
}

Decision decide(std::span<const double> scores, double margin) {
    if (scores.empty()) throw Error("decision over an empty score vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    double runner_up = 0.0;
    bool has_runner_up = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i == best) continue;
        if (!has_runner_up || scores[i] > runner_up) {
            runner_up = scores[i];
            has_runner_up = true;
        }
    }
    const double gap = has_runner_up ? scores[best] - runner_up : scores[best];
    return {best, gap > margin ? ConfidenceLevel::High : ConfidenceLevel::Low, gap};
}

CaptureVerdict classify_capture(const AnyModel& model, const Dataset& capture, double margin) {
    if (capture.instances.empty()) {
        throw Error("capture '" + capture.name + "' has no instances to classify");
    }
    const Schema& training = model_schema(model);
    const SchemaAligner aligner(training, capture.schema);
    const std::vector<std::string>& domain = training.class_attribute().domain();
    const std::size_t k = domain.size();

    std::vector<double> mean(k, 0.0);
    std::vector<double> votes(k, 0.0);
    double total_weight = 0.0;
    for (const Instance& inst : capture.instances) {
        const std::vector<double> posterior =
            predict_distribution(model, aligner.align(inst));
        std::size_t top = 0;
        for (std::size_t c = 0; c < k; ++c) {
            mean[c] += inst.weight * posterior[c];
            if (posterior[c] > posterior[top]) top = c;
        }
        votes[top] += inst.weight;
        total_weight += inst.weight;
    }
    for (std::size_t c = 0; c < k; ++c) {
        mean[c] /= total_weight;
        votes[c] /= total_weight;
    }

    const Decision decision = decide(mean, margin);
    CaptureVerdict verdict;
    verdict.class_domain = domain;
    verdict.mean_posterior = std::move(mean);
    verdict.predicted_fraction = std::move(votes);
    verdict.decided = decision.index;
    verdict.confidence = decision.confidence;
    verdict.instance_count = capture.instances.size();
    verdict.margin = margin;
    return verdict;
}

std::string render_verdict_table(const std::vector<CaptureVerdict>& verdicts,
                                 const std::vector<std::string>& capture_names) {
    if (verdicts.empty()) throw Error("no verdicts to render");
    if (capture_names.size() != verdicts.size()) {
        throw Error("capture name count does not match the verdict count");
    }
    const std::vector<std::string>& domain = verdicts.front().class_domain;
    for (const CaptureVerdict& v : verdicts) {
        if (v.class_domain != domain) {
            throw Error("verdicts disagree on the class domain");
        }
    }

    std::size_t label_width = std::string("confidence").size();
    for (const auto& name : domain) label_width = std::max(label_width, name.size());

    std::vector<std::size_t> widths(verdicts.size());
    for (std::size_t j = 0; j < verdicts.size(); ++j) {
        widths[j] = std::max<std::size_t>(capture_names[j].size(), 5);  // "0.000"
        widths[j] = std::max(widths[j], domain[verdicts[j].decided].size());
    }

    std::ostringstream os;
    auto pad = [&os](const std::string& s, std::size_t width) {
        os << s;
        for (std::size_t i = s.size(); i < width; ++i) os << ' ';
    };
    auto pad_right = [&os](const std::string& s, std::size_t width) {
        for (std::size_t i = s.size(); i < width; ++i) os << ' ';
        os << s;
    };

    pad("", label_width);
    for (std::size_t j = 0; j < verdicts.size(); ++j) {
        os << "  ";
        pad_right(capture_names[j], widths[j]);
    }
    os << '\n';
    for (std::size_t c = 0; c < domain.size(); ++c) {
        pad(domain[c], label_width);
        for (std::size_t j = 0; j < verdicts.size(); ++j) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", verdicts[j].mean_posterior[c]);
            os << "  ";
            pad_right(buf, widths[j]);
        }
        os << '\n';
    }
    pad("decided", label_width);
    for (std::size_t j = 0; j < verdicts.size(); ++j) {
        os << "  ";
        pad_right(domain[verdicts[j].decided], widths[j]);
    }
    os << '\n';
    pad("confidence", label_width);
    for (std::size_t j = 0; j < verdicts.size(); ++j) {
        os << "  ";
        pad_right(to_string(verdicts[j].confidence), widths[j]);
    }
    os << '\n';
    return os.str();
}

std::vector<CaptureVerdict> apply_mutual_exclusion(std::vector<CaptureVerdict> verdicts) {
    if (verdicts.empty()) return verdicts;
    const std::size_t k = verdicts.front().class_domain.size();

    // Captures claim labels in order of decreasing decision margin; a taken
    // label is withdrawn from the remaining captures' candidate sets.
    std::vector<bool> label_taken(k, false);
    std::vector<bool> verdict_done(verdicts.size(), false);
    for (std::size_t round = 0; round < verdicts.size(); ++round) {
        if (std::all_of(label_taken.begin(), label_taken.end(), [](bool b) { return b; })) {
            break;  // more captures than labels: the rest keep their verdicts
        }
        std::size_t pick = verdicts.size();
        double best_gap = -std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < verdicts.size(); ++v) {
            if (verdict_done[v]) continue;
            const auto& scores = verdicts[v].mean_posterior;
            std::size_t top = k;
            double top_score = 0.0;
            double runner = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                if (label_taken[c]) continue;
                if (top == k || scores[c] > top_score) {
                    if (top != k) runner = std::max(runner, top_score);
                    top = c;
                    top_score = scores[c];
                } else {
                    runner = std::max(runner, scores[c]);
                }
            }
            if (top == k) continue;
            const double gap = top_score - runner;
            if (gap > best_gap) {
                best_gap = gap;
                pick = v;
            }
        }
        if (pick == verdicts.size()) break;

        CaptureVerdict& chosen = verdicts[pick];
        std::size_t top = k;
        for (std::size_t c = 0; c < k; ++c) {
            if (label_taken[c]) continue;
            if (top == k || chosen.mean_posterior[c] > chosen.mean_posterior[top]) top = c;
        }
        chosen.decided = top;
        chosen.confidence =
            best_gap > chosen.margin ? ConfidenceLevel::High : ConfidenceLevel::Low;
        label_taken[top] = true;
        verdict_done[pick] = true;
    }
    return verdicts;
}

}  // namespace netrec
