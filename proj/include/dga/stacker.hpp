#pragma once

// Final L2-regularized logistic regression over whitened feature rows,
// trained by deterministic full-batch gradient descent.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace dga {

struct LogisticConfig {
    double learning_rate = 0.1;
    int max_iters = 5000;
    double tolerance = 1e-8;   // stop when gradient norm drops below
    double l2_lambda = 1e-4;   // applied to weights, not the bias
    double class_weight_positive = 1.0;
    double class_weight_negative = 1.0;
};

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    double l2_lambda = 0.0;

    void save(std::ostream& out) const;
    static LogisticModel load(std::istream& in);
};

// labels are 0/1; both classes must be present
LogisticModel train_logistic(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels,
                             const LogisticConfig& config = {});

double predict_proba(const LogisticModel& model, std::span<const double> x);

} // namespace dga
