#include "dga/stacker.hpp"

#include <cmath>
#include <stdexcept>

#include "dga/charlm.hpp" // logistic()
#include "dga/kernels.hpp"
#include "dga/textio.hpp"

namespace dga {

namespace {

// weighted mean logistic loss + (lambda/2)|w|^2; fills grad when asked
double loss_and_gradient(const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& labels,
                         const std::vector<double>& w, double b,
                         const LogisticConfig& cfg,
                         std::vector<double>* grad_w, double* grad_b) {
    const auto& k = kernels::ops();
    const std::size_t d = w.size();

    if (grad_w) grad_w->assign(d, 0.0);
    if (grad_b) *grad_b = 0.0;

    double loss = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double z = k.dot(w.data(), rows[i].data(), d) + b;
        const double y = labels[i] ? 1.0 : 0.0;
        const double cw = labels[i] ? cfg.class_weight_positive : cfg.class_weight_negative;
        weight_sum += cw;

        // -[y ln p + (1-y) ln(1-p)] in a softplus form that never hits ln(0)
        const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z))
                                        : std::log1p(std::exp(z));
        loss += cw * (softplus - y * z);

        if (grad_w) {
            const double err = cw * (logistic(z) - y);
            k.axpy(err, rows[i].data(), grad_w->data(), d);
            *grad_b += err;
        }
    }
    loss /= weight_sum;
    if (grad_w) {
        const double inv = 1.0 / weight_sum;
        for (std::size_t j = 0; j < d; ++j)
            (*grad_w)[j] = (*grad_w)[j] * inv + cfg.l2_lambda * w[j];
        *grad_b *= inv;
    }
    double reg = 0.5 * cfg.l2_lambda * k.dot(w.data(), w.data(), d);
    return loss + reg;
}

} // namespace

LogisticModel train_logistic(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels,
                             const LogisticConfig& cfg) {
    if (rows.empty() || rows.size() != labels.size())
        throw std::invalid_argument("train_logistic: rows/labels size mismatch");
    const std::size_t d = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != d)
            throw std::invalid_argument("train_logistic: inconsistent row width");

    bool has_pos = false, has_neg = false;
    for (int y : labels) (y ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw std::invalid_argument("train_logistic: both classes must be present");

    LogisticModel m;
    m.weights.assign(d, 0.0);
    m.bias = 0.0;
    m.l2_lambda = cfg.l2_lambda;

    std::vector<double> grad_w;
    double grad_b = 0.0;
    double lr = cfg.learning_rate;
    const double min_lr = cfg.learning_rate * 0x1p-40;

    double loss = loss_and_gradient(rows, labels, m.weights, m.bias, cfg, &grad_w, &grad_b);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto& k = kernels::ops();
        double gnorm = std::sqrt(k.dot(grad_w.data(), grad_w.data(), d) + grad_b * grad_b);
        if (gnorm < cfg.tolerance) break;

        // backtracking step: halve until the loss stops increasing (up to
        // rounding noise); a step below min_lr means divergence.  The
        // accepted rate is allowed to grow back toward the configured one.
        const double accept_slack = 1e-12 * std::max(1.0, std::abs(loss));
        std::vector<double> w_next(d);
        bool stationary = false;
        for (;;) {
            for (std::size_t j = 0; j < d; ++j) w_next[j] = m.weights[j] - lr * grad_w[j];
            double b_next = m.bias - lr * grad_b;
            double next_loss =
                loss_and_gradient(rows, labels, w_next, b_next, cfg, nullptr, nullptr);
            if (std::isfinite(next_loss) && next_loss <= loss + accept_slack) {
                stationary = (w_next == m.weights && b_next == m.bias);
                m.weights.swap(w_next);
                m.bias = b_next;
                loss = next_loss;
                break;
            }
            lr *= 0.5;
            if (lr < min_lr)
                throw std::runtime_error("train_logistic: diverged (loss increases at "
                                         "the minimum learning rate)");
        }
        if (stationary) break; // parameters no longer move at FP resolution
        lr = std::min(lr * 2.0, cfg.learning_rate);
        loss = loss_and_gradient(rows, labels, m.weights, m.bias, cfg, &grad_w, &grad_b);
    }
    return m;
}

double predict_proba(const LogisticModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        throw std::invalid_argument("predict_proba: input has wrong dimension");
    double z = kernels::ops().dot(model.weights.data(), x.data(), x.size()) + model.bias;
    return logistic(z);
}

void LogisticModel::save(std::ostream& out) const {
    out << "logistic " << weights.size() << ' ' << textio::fmt17(l2_lambda) << '\n';
    textio::write_row(out, weights.data(), weights.size());
    out << textio::fmt17(bias) << '\n';
}

LogisticModel LogisticModel::load(std::istream& in) {
    std::string line = textio::read_line(in, "logistic header");
    std::size_t d = 0;
    double lambda = 0.0;
    if (std::sscanf(line.c_str(), "logistic %zu %lf", &d, &lambda) != 2)
        throw textio::FormatError("bad logistic header: " + line);
    LogisticModel m;
    m.l2_lambda = lambda;
    m.weights = textio::parse_row(textio::read_line(in, "logistic weights"), d,
                                  "logistic weights");
    m.bias = textio::parse_row(textio::read_line(in, "logistic bias"), 1,
                               "logistic bias")[0];
    return m;
}

} // namespace dga
