#pragma once

// ROC construction, partial AUC with McClish standardization, and the
// leave-one-family-out split.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dga/dataset.hpp"

namespace dga {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    bool operator==(const RocPoint&) const = default;
};

// points run from (0,0) to (1,1) with both coordinates non-decreasing
struct RocCurve {
    std::vector<RocPoint> points;
};

// Threshold sweep over distinct score values descending; tied scores
// flip in one step.  Throws std::invalid_argument when only one class
// is present.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

struct PartialAucResult {
    double raw = 0.0;          // trapezoidal integral of TPR over [0, fpr_max]
    double standardized = 0.0; // McClish: 0.5 at chance, 1.0 when perfect
};

PartialAucResult partial_auc(const RocCurve& roc, double fpr_max = 0.01);

struct LooSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Train: every other DGA family plus (1 - clean_holdout_fraction) of the
// clean rows.  Test: the left-out family plus the held-out clean rows.
// The clean split is a seeded shuffle.
LooSplit leave_one_out_split(const Dataset& dataset, const std::string& family,
                             double clean_holdout_fraction, std::uint64_t seed);

} // namespace dga
