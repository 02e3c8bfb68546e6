#include "netrec/criteria.hpp"

#include <cmath>

#include "netrec/error.hpp"

namespace netrec {

namespace {

constexpr double kDegenerateSplitInfo = 1e-10;

double plogp(double p) {
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

}  // namespace

std::size_t ClassDistribution::argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[best]) best = i;
    }
    return best;
}

bool ClassDistribution::pure() const {
    bool found = false;
    for (double c : counts) {
        if (c > 0.0) {
            if (found) return false;
            found = true;
        }
    }
    return true;
}

double SplitPartition::total() const {
    double sum = 0.0;
    for (const auto& branch : branches) sum += branch.total;
    return sum;
}

double entropy(const ClassDistribution& dist) {
    if (dist.total <= 0.0) return 0.0;
    double bits = 0.0;
    for (double count : dist.counts) {
        bits += plogp(count / dist.total);
    }
    return bits;
}

double information_gain(const ClassDistribution& parent, const SplitPartition& split) {
    const double branch_total = split.total();
    const double tolerance = 1e-9 * std::max(1.0, parent.total);
    if (std::abs(branch_total - parent.total) > tolerance) {
        throw Error("split branch totals (" + std::to_string(branch_total) +
                    ") disagree with the parent total (" + std::to_string(parent.total) + ")");
    }
    if (parent.total <= 0.0) return 0.0;
    double child_bits = 0.0;
    for (const auto& branch : split.branches) {
        if (branch.total > 0.0) {
            child_bits += (branch.total / parent.total) * entropy(branch);
        }
    }
    return entropy(parent) - child_bits;
}

double split_info(const SplitPartition& split) {
    const double total = split.total();
    if (total <= 0.0) throw Error("split_info of an all-empty partition");
    double bits = 0.0;
    for (const auto& branch : split.branches) {
        bits += plogp(branch.total / total);
    }
    return bits;
}

std::optional<double> gain_ratio(const ClassDistribution& parent, const SplitPartition& split) {
    const double info = split_info(split);
    if (info < kDegenerateSplitInfo) return std::nullopt;
    return information_gain(parent, split) / info;
}

}  // namespace netrec
