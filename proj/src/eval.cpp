#include "dga/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dga/rng.hpp"

namespace dga {

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("roc_curve: scores/labels size mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : labels) (y ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("roc_curve: both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // all rows tied at this score flip together
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]]) ++tp; else ++fp;
            ++j;
        }
        i = j;
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                                static_cast<double>(tp) / static_cast<double>(n_pos)});
    }
    if (curve.points.back() != RocPoint{1.0, 1.0})
        curve.points.push_back({1.0, 1.0});
    return curve;
}

PartialAucResult partial_auc(const RocCurve& roc, double fpr_max) {
    if (!(fpr_max > 0.0) || fpr_max > 1.0)
        throw std::invalid_argument("partial_auc: fpr_max must be in (0, 1]");
    if (roc.points.size() < 2)
        throw std::invalid_argument("partial_auc: curve needs at least 2 points");

    double raw = 0.0;
    for (std::size_t i = 0; i + 1 < roc.points.size(); ++i) {
        const RocPoint& a = roc.points[i];
        const RocPoint& b = roc.points[i + 1];
        if (a.fpr >= fpr_max) break;
        if (b.fpr <= fpr_max) {
            raw += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
        } else {
            // linear interpolation at the cap
            double t = (fpr_max - a.fpr) / (b.fpr - a.fpr);
            double tpr_cap = a.tpr + t * (b.tpr - a.tpr);
            raw += (fpr_max - a.fpr) * (a.tpr + tpr_cap) * 0.5;
        }
    }

    // McClish standardization: chance -> 0.5, perfect -> 1.0
    const double min_area = fpr_max * fpr_max / 2.0;
    const double max_area = fpr_max;
    PartialAucResult result;
    result.raw = raw;
    result.standardized = 0.5 * (1.0 + (raw - min_area) / (max_area - min_area));
    return result;
}

LooSplit leave_one_out_split(const Dataset& dataset, const std::string& family,
                             double clean_holdout_fraction, std::uint64_t seed) {
    if (clean_holdout_fraction < 0.0 || clean_holdout_fraction >= 1.0)
        throw std::invalid_argument("leave_one_out_split: holdout fraction must be in [0,1)");
    if (!dataset.has_dga_family(family))
        throw std::invalid_argument("leave_one_out_split: unknown family '" + family + "'");

    LooSplit split;
    std::vector<std::size_t> clean_indices;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
        const DatasetRow& r = dataset.rows[i];
        if (!r.is_dga) {
            clean_indices.push_back(i);
        } else if (r.family == family) {
            split.test_indices.push_back(i);
        } else {
            split.train_indices.push_back(i);
        }
    }

    Rng rng(seed);
    rng.shuffle(clean_indices);
    std::size_t n_test = static_cast<std::size_t>(std::llround(
        clean_holdout_fraction * static_cast<double>(clean_indices.size())));
    if (clean_holdout_fraction > 0.0 && !clean_indices.empty())
        n_test = std::max<std::size_t>(n_test, 1);
    n_test = std::min(n_test, clean_indices.size());

    for (std::size_t i = 0; i < clean_indices.size(); ++i) {
        if (i < n_test)
            split.test_indices.push_back(clean_indices[i]);
        else
            split.train_indices.push_back(clean_indices[i]);
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

} // namespace dga
