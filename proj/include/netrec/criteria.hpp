#ifndef NETREC_CRITERIA_HPP
#define NETREC_CRITERIA_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace netrec {

/// Weighted class counts, index-aligned to the class domain.
struct ClassDistribution {
    std::vector<double> counts;
    double total = 0.0;

    static ClassDistribution zeros(std::size_t n_classes) {
        return ClassDistribution{std::vector<double>(n_classes, 0.0), 0.0};
    }

    void add(std::size_t cls, double weight) {
        counts[cls] += weight;
        total += weight;
    }

    std::size_t n_classes() const { return counts.size(); }

    /// Index of the largest count; ties go to the lowest class index.
    std::size_t argmax() const;

    /// True when at most one class carries weight.
    bool pure() const;
};

/// One class distribution per branch of a candidate split.
struct SplitPartition {
    std::vector<ClassDistribution> branches;

    double total() const;
};

enum class Criterion { InformationGain, GainRatio };

/// Shannon entropy in bits; 0 log 0 := 0, empty distributions have entropy 0.
double entropy(const ClassDistribution& dist);

/// Entropy(parent) - weighted branch entropy. Branch totals must sum to the
/// parent total (throws beyond tolerance).
double information_gain(const ClassDistribution& parent, const SplitPartition& split);

/// Entropy of the branch sizes themselves; empty branches are skipped.
/// Throws when all branches are empty.
double split_info(const SplitPartition& split);

/// information_gain / split_info, or nullopt when split_info is degenerate
/// (all mass in one branch). Callers must treat nullopt as worst-possible.
std::optional<double> gain_ratio(const ClassDistribution& parent,
                                 const SplitPartition& split);

}  // namespace netrec

#endif
