#include "dga/charlm.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "dga/kernels.hpp"
#include "dga/textio.hpp"

namespace dga {

namespace {

inline double sigmoid(double x) { return logistic(x); }

// softmax over logits into probs; returns ln probs[target] with a
// log-space fallback so underflowing targets stay finite
double softmax_and_logprob(const double* logits, int v, int target, double* probs) {
    double m = logits[0];
    for (int j = 1; j < v; ++j) m = std::max(m, logits[j]);
    double sum = 0.0;
    for (int j = 0; j < v; ++j) {
        probs[j] = std::exp(logits[j] - m);
        sum += probs[j];
    }
    for (int j = 0; j < v; ++j) probs[j] /= sum;
    double p = probs[target];
    if (p >= DBL_MIN) return std::log(p);
    return (logits[target] - m) - std::log(sum);
}

void check_indices(const std::vector<int>& seq, int v) {
    for (int idx : seq) {
        if (idx < 0 || idx >= v)
            throw std::out_of_range("sequence index " + std::to_string(idx) +
                                    " outside vocabulary of size " + std::to_string(v));
    }
}

// per-step forward cache for BPTT
struct StepCache {
    int input = 0;
    int target = 0;
    std::uint8_t masked_in = 1;
    std::vector<double> gates;  // 4H post-activation [i f o g]
    std::vector<double> c;      // H
    std::vector<double> tanh_c; // H
    std::vector<double> h;      // H
    std::vector<double> h_dense; // H, after dropout
    std::vector<std::uint8_t> drop_keep; // H, 1 = unit kept (dropout only)
    std::vector<double> probs;  // V
    double log_prob = 0.0;
};

} // namespace

double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

CharVocab CharVocab::build(const std::vector<std::string>& corpus) {
    if (corpus.empty())
        throw std::invalid_argument("CharVocab: empty corpus");
    std::set<char> seen;
    for (const auto& s : corpus)
        for (char c : s) seen.insert(c);
    return from_chars(std::string(seen.begin(), seen.end()));
}

CharVocab CharVocab::from_chars(std::string sorted_chars) {
    for (std::size_t i = 1; i < sorted_chars.size(); ++i) {
        if (sorted_chars[i - 1] >= sorted_chars[i])
            throw std::invalid_argument("CharVocab: characters must be sorted and distinct");
    }
    CharVocab v;
    v.chars = std::move(sorted_chars);
    return v;
}

int CharVocab::index_of(char c) const {
    auto it = std::lower_bound(chars.begin(), chars.end(), c);
    if (it != chars.end() && *it == c)
        return kReservedCount + static_cast<int>(it - chars.begin());
    return kUnknown;
}

char CharVocab::char_at(int index) const {
    if (index < kReservedCount || index >= size())
        throw std::out_of_range("CharVocab: no character at index " + std::to_string(index));
    return chars[static_cast<std::size_t>(index - kReservedCount)];
}

std::vector<int> CharVocab::encode(std::string_view s) const {
    std::vector<int> seq;
    seq.reserve(s.size() + 2);
    seq.push_back(kStart);
    for (char c : s) seq.push_back(index_of(c));
    seq.push_back(kEnd);
    return seq;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (hidden_size < 1) throw std::invalid_argument("TrainConfig: hidden_size must be >= 1");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw std::invalid_argument("TrainConfig: dropout_rate must be in [0,1)");
    if (validation_fraction <= 0.0 || validation_fraction >= 1.0)
        throw std::invalid_argument("TrainConfig: validation_fraction must be in (0,1)");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (rmsprop_decay <= 0.0 || rmsprop_decay >= 1.0)
        throw std::invalid_argument("TrainConfig: rmsprop_decay must be in (0,1)");
    if (early_stopping_patience < 1)
        throw std::invalid_argument("TrainConfig: early_stopping_patience must be >= 1");
}

LstmLangModel LstmLangModel::zeros(CharVocab vocab, int hidden) {
    if (hidden < 1) throw std::invalid_argument("LstmLangModel: hidden must be >= 1");
    LstmLangModel m;
    m.vocab = std::move(vocab);
    m.hidden = hidden;
    const std::size_t v = static_cast<std::size_t>(m.vocab.size());
    const std::size_t h = static_cast<std::size_t>(hidden);
    m.w_in.assign(v * 4 * h, 0.0);
    m.w_rec.assign(4 * h * h, 0.0);
    m.b_gate.assign(4 * h, 0.0);
    m.w_out.assign(v * h, 0.0);
    m.b_out.assign(v, 0.0);
    return m;
}

std::size_t LstmLangModel::param_count() const {
    return w_in.size() + w_rec.size() + b_gate.size() + w_out.size() + b_out.size();
}

bool LstmLangModel::all_finite() const {
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(w_in) && ok(w_rec) && ok(b_gate) && ok(w_out) && ok(b_out);
}

namespace {

// one LSTM step; h/c updated in place, cache optional
void lstm_step(const LstmLangModel& m, int input, std::vector<double>& h,
               std::vector<double>& c, std::vector<double>& gates,
               std::vector<double>* tanh_c_out) {
    const auto& k = kernels::ops();
    const std::size_t hs = static_cast<std::size_t>(m.hidden);

    // gates = w_in[input] + w_rec * h + b_gate
    const double* in_row = m.w_in.data() + static_cast<std::size_t>(input) * 4 * hs;
    std::copy(in_row, in_row + 4 * hs, gates.begin());
    k.matvec_add(m.w_rec.data(), h.data(), gates.data(), 4 * hs, hs);
    k.axpy(1.0, m.b_gate.data(), gates.data(), 4 * hs);

    double* gi = gates.data();
    double* gf = gates.data() + hs;
    double* go = gates.data() + 2 * hs;
    double* gg = gates.data() + 3 * hs;
    for (std::size_t j = 0; j < hs; ++j) {
        gi[j] = sigmoid(gi[j]);
        gf[j] = sigmoid(gf[j]);
        go[j] = sigmoid(go[j]);
        gg[j] = std::tanh(gg[j]);
    }
    for (std::size_t j = 0; j < hs; ++j) {
        c[j] = gf[j] * c[j] + gi[j] * gg[j];
        double tc = std::tanh(c[j]);
        if (tanh_c_out) (*tanh_c_out)[j] = tc;
        h[j] = go[j] * tc;
    }
}

void output_logits(const LstmLangModel& m, const std::vector<double>& h_dense,
                   std::vector<double>& logits) {
    const auto& k = kernels::ops();
    const std::size_t v = static_cast<std::size_t>(m.vocab_size());
    const std::size_t hs = static_cast<std::size_t>(m.hidden);
    k.matvec(m.w_out.data(), h_dense.data(), logits.data(), v, hs);
    k.axpy(1.0, m.b_out.data(), logits.data(), v);
}

} // namespace

std::vector<std::vector<double>> LstmLangModel::forward(const std::vector<int>& seq) const {
    const int v = vocab_size();
    check_indices(seq, v);
    std::vector<std::vector<double>> out;
    if (seq.size() < 2) return out;

    const std::size_t hs = static_cast<std::size_t>(hidden);
    std::vector<double> h(hs, 0.0), c(hs, 0.0), gates(4 * hs, 0.0);
    std::vector<double> logits(static_cast<std::size_t>(v), 0.0);

    out.reserve(seq.size() - 1);
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        lstm_step(*this, seq[t], h, c, gates, nullptr);
        output_logits(*this, h, logits);
        std::vector<double> probs(static_cast<std::size_t>(v), 0.0);
        softmax_and_logprob(logits.data(), v, seq[t + 1], probs.data());
        out.push_back(std::move(probs));
    }
    return out;
}

double LstmLangModel::log_likelihood_encoded(const std::vector<int>& seq) const {
    const int v = vocab_size();
    check_indices(seq, v);
    if (seq.size() < 2) return 0.0;

    const std::size_t hs = static_cast<std::size_t>(hidden);
    std::vector<double> h(hs, 0.0), c(hs, 0.0), gates(4 * hs, 0.0);
    std::vector<double> logits(static_cast<std::size_t>(v), 0.0);
    std::vector<double> probs(static_cast<std::size_t>(v), 0.0);

    double total = 0.0;
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        lstm_step(*this, seq[t], h, c, gates, nullptr);
        output_logits(*this, h, logits);
        total += softmax_and_logprob(logits.data(), v, seq[t + 1], probs.data());
    }
    return total;
}

double LstmLangModel::sequence_log_likelihood(std::string_view s) const {
    return log_likelihood_encoded(vocab.encode(s));
}

LstmGradients LstmGradients::zeros_like(const LstmLangModel& m) {
    LstmGradients g;
    g.w_in.assign(m.w_in.size(), 0.0);
    g.w_rec.assign(m.w_rec.size(), 0.0);
    g.b_gate.assign(m.b_gate.size(), 0.0);
    g.w_out.assign(m.w_out.size(), 0.0);
    g.b_out.assign(m.b_out.size(), 0.0);
    return g;
}

double LstmGradients::squared_norm() const {
    const auto& k = kernels::ops();
    double total = 0.0;
    for (const auto* blk : {&w_in, &w_rec, &b_gate, &w_out, &b_out})
        total += k.dot(blk->data(), blk->data(), blk->size());
    return total;
}

void LstmGradients::scale(double factor) {
    for (auto* blk : {&w_in, &w_rec, &b_gate, &w_out, &b_out})
        for (double& x : *blk) x *= factor;
}

TrainBatch TrainBatch::from_sequences(std::vector<std::vector<int>> rows) {
    TrainBatch b;
    b.rows = std::move(rows);
    return b;
}

double lstm_loss_and_gradient(const LstmLangModel& model, const TrainBatch& batch,
                              LstmGradients* grads, double dropout_rate,
                              Rng* dropout_rng) {
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw std::invalid_argument("dropout_rate must be in [0,1)");
    if (dropout_rate > 0.0 && dropout_rng == nullptr)
        throw std::invalid_argument("dropout requires an RNG");
    if (!batch.step_mask.empty() && batch.step_mask.size() != batch.rows.size())
        throw std::invalid_argument("step_mask size mismatch");

    const int v = model.vocab_size();
    const std::size_t hs = static_cast<std::size_t>(model.hidden);
    const double keep = 1.0 - dropout_rate;
    const auto& k = kernels::ops();

    if (grads) *grads = LstmGradients::zeros_like(model);

    double loss_sum = 0.0;
    std::size_t step_count = 0;

    std::vector<StepCache> cache;
    std::vector<double> h(hs), c(hs), logits(static_cast<std::size_t>(v));
    std::vector<double> dh(hs), dc(hs), dh_dense(hs), da(4 * hs);
    std::vector<double> dlogits(static_cast<std::size_t>(v));

    for (std::size_t r = 0; r < batch.rows.size(); ++r) {
        const auto& seq = batch.rows[r];
        check_indices(seq, v);
        if (seq.size() < 2) continue;
        const std::size_t steps = seq.size() - 1;

        const std::vector<std::uint8_t>* mask = nullptr;
        if (!batch.step_mask.empty()) {
            mask = &batch.step_mask[r];
            if (mask->size() != steps)
                throw std::invalid_argument("step_mask row length mismatch");
        }

        // forward with caching; cache entries are reused across rows
        if (cache.size() < steps) cache.resize(steps);
        std::fill(h.begin(), h.end(), 0.0);
        std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t t = 0; t < steps; ++t) {
            StepCache& sc = cache[t];
            sc.input = seq[t];
            sc.target = seq[t + 1];
            sc.masked_in = mask ? (*mask)[t] : std::uint8_t{1};
            sc.gates.resize(4 * hs);
            sc.tanh_c.resize(hs);
            lstm_step(model, sc.input, h, c, sc.gates, &sc.tanh_c);
            sc.c = c;
            sc.h = h;
            sc.h_dense.resize(hs);
            if (dropout_rate > 0.0) {
                sc.drop_keep.resize(hs);
                for (std::size_t j = 0; j < hs; ++j) {
                    sc.drop_keep[j] = dropout_rng->uniform() < keep ? 1 : 0;
                    sc.h_dense[j] = sc.drop_keep[j] ? h[j] / keep : 0.0;
                }
            } else {
                std::copy(h.begin(), h.end(), sc.h_dense.begin());
            }
            output_logits(model, sc.h_dense, logits);
            sc.probs.resize(static_cast<std::size_t>(v));
            sc.log_prob = softmax_and_logprob(logits.data(), v, sc.target, sc.probs.data());
            if (sc.masked_in) {
                loss_sum -= sc.log_prob;
                ++step_count;
            }
        }

        if (!grads) continue;

        // backward through time
        std::fill(dh.begin(), dh.end(), 0.0);
        std::fill(dc.begin(), dc.end(), 0.0);
        for (std::size_t t = steps; t-- > 0;) {
            const StepCache& sc = cache[t];
            const double* gi = sc.gates.data();
            const double* gf = sc.gates.data() + hs;
            const double* go = sc.gates.data() + 2 * hs;
            const double* gg = sc.gates.data() + 3 * hs;
            const double* c_prev = (t > 0) ? cache[t - 1].c.data() : nullptr;
            const double* h_prev = (t > 0) ? cache[t - 1].h.data() : nullptr;

            if (sc.masked_in) {
                for (std::size_t j = 0; j < static_cast<std::size_t>(v); ++j)
                    dlogits[j] = sc.probs[j];
                dlogits[static_cast<std::size_t>(sc.target)] -= 1.0;

                k.ger(grads->w_out.data(), dlogits.data(), sc.h_dense.data(),
                      static_cast<std::size_t>(v), hs);
                k.axpy(1.0, dlogits.data(), grads->b_out.data(), static_cast<std::size_t>(v));

                std::fill(dh_dense.begin(), dh_dense.end(), 0.0);
                k.tmatvec_add(model.w_out.data(), dlogits.data(), dh_dense.data(),
                              static_cast<std::size_t>(v), hs);
                if (dropout_rate > 0.0) {
                    for (std::size_t j = 0; j < hs; ++j)
                        if (sc.drop_keep[j]) dh[j] += dh_dense[j] / keep;
                } else {
                    k.axpy(1.0, dh_dense.data(), dh.data(), hs);
                }
            }

            // dh/dc -> gate preactivations
            double* dai = da.data();
            double* daf = da.data() + hs;
            double* dao = da.data() + 2 * hs;
            double* dag = da.data() + 3 * hs;
            for (std::size_t j = 0; j < hs; ++j) {
                double tc = sc.tanh_c[j];
                double dcj = dc[j] + dh[j] * go[j] * (1.0 - tc * tc);
                double doj = dh[j] * tc;
                double cp = c_prev ? c_prev[j] : 0.0;
                dai[j] = dcj * gg[j] * gi[j] * (1.0 - gi[j]);
                daf[j] = dcj * cp * gf[j] * (1.0 - gf[j]);
                dao[j] = doj * go[j] * (1.0 - go[j]);
                dag[j] = dcj * gi[j] * (1.0 - gg[j] * gg[j]);
                dc[j] = dcj * gf[j];
            }

            double* w_in_grad_row =
                grads->w_in.data() + static_cast<std::size_t>(sc.input) * 4 * hs;
            k.axpy(1.0, da.data(), w_in_grad_row, 4 * hs);
            k.axpy(1.0, da.data(), grads->b_gate.data(), 4 * hs);
            if (h_prev) k.ger(grads->w_rec.data(), da.data(), h_prev, 4 * hs, hs);

            std::fill(dh.begin(), dh.end(), 0.0);
            k.tmatvec_add(model.w_rec.data(), da.data(), dh.data(), 4 * hs, hs);
        }
    }

    if (step_count == 0) return 0.0;

    const double inv = 1.0 / static_cast<double>(step_count);
    if (grads) grads->scale(inv);
    return loss_sum * inv;
}

namespace {

struct RmspropState {
    LstmGradients cache; // reuses the gradient block layout for the squared averages

    explicit RmspropState(const LstmLangModel& m) : cache(LstmGradients::zeros_like(m)) {}
};

void rmsprop_update(LstmLangModel& m, const LstmGradients& g, RmspropState& st,
                    const TrainConfig& cfg) {
    auto update = [&](std::vector<double>& param, const std::vector<double>& grad,
                      std::vector<double>& sq) {
        for (std::size_t i = 0; i < param.size(); ++i) {
            sq[i] = cfg.rmsprop_decay * sq[i] + (1.0 - cfg.rmsprop_decay) * grad[i] * grad[i];
            param[i] -= cfg.learning_rate * grad[i] / (std::sqrt(sq[i]) + cfg.rmsprop_epsilon);
        }
    };
    update(m.w_in, g.w_in, st.cache.w_in);
    update(m.w_rec, g.w_rec, st.cache.w_rec);
    update(m.b_gate, g.b_gate, st.cache.b_gate);
    update(m.w_out, g.w_out, st.cache.w_out);
    update(m.b_out, g.b_out, st.cache.b_out);
}

double dataset_loss(const LstmLangModel& m, const std::vector<std::vector<int>>& seqs,
                    const std::vector<std::size_t>& idx) {
    TrainBatch b;
    b.rows.reserve(idx.size());
    for (std::size_t i : idx) b.rows.push_back(seqs[i]);
    return lstm_loss_and_gradient(m, b, nullptr);
}

} // namespace

TrainResult train_charlm(const std::vector<std::string>& corpus,
                         const TrainConfig& config, const CharVocab* shared_vocab) {
    config.validate();
    if (corpus.empty())
        throw std::invalid_argument("train_charlm: empty corpus");

    CharVocab vocab = shared_vocab ? *shared_vocab : CharVocab::build(corpus);

    std::vector<std::vector<int>> seqs;
    seqs.reserve(corpus.size());
    for (const auto& s : corpus) seqs.push_back(vocab.encode(s));

    Rng rng(config.seed);

    // validation split
    std::vector<std::size_t> order(seqs.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::size_t val_count = 0;
    if (seqs.size() >= 2) {
        val_count = static_cast<std::size_t>(
            std::floor(config.validation_fraction * static_cast<double>(seqs.size())));
        val_count = std::max<std::size_t>(val_count, 1);
        val_count = std::min(val_count, seqs.size() - 1);
    }
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + val_count);
    std::vector<std::size_t> train_idx(order.begin() + val_count, order.end());

    // init: uniform [-0.08, 0.08], forget-gate bias 1.0
    LstmLangModel model = LstmLangModel::zeros(vocab, config.hidden_size);
    const std::size_t hs = static_cast<std::size_t>(config.hidden_size);
    for (auto* blk : {&model.w_in, &model.w_rec, &model.b_gate, &model.w_out, &model.b_out})
        for (double& w : *blk) w = rng.uniform(-0.08, 0.08);
    for (std::size_t j = 0; j < hs; ++j) model.b_gate[hs + j] = 1.0;

    RmspropState opt(model);

    TrainResult result;
    LstmLangModel best = model;
    double best_val = std::numeric_limits<double>::infinity();
    int epochs_without_improvement = 0;
    const bool monitor_val = !val_idx.empty();

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(train_idx);

        double train_loss_sum = 0.0;
        std::size_t train_steps = 0;
        for (std::size_t start = 0; start < train_idx.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            std::size_t stop = std::min(train_idx.size(),
                                        start + static_cast<std::size_t>(config.batch_size));
            TrainBatch batch;
            std::size_t batch_steps = 0;
            batch.rows.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                batch.rows.push_back(seqs[train_idx[i]]);
                batch_steps += seqs[train_idx[i]].size() - 1;
            }

            LstmGradients grads;
            double loss = lstm_loss_and_gradient(model, batch, &grads,
                                                 config.dropout_rate,
                                                 config.dropout_rate > 0.0 ? &rng : nullptr);
            if (!std::isfinite(loss))
                throw TrainingError("non-finite training loss at epoch " +
                                    std::to_string(epoch));
            train_loss_sum += loss * static_cast<double>(batch_steps);
            train_steps += batch_steps;

            // global-norm gradient clipping at 5.0
            double gn = std::sqrt(grads.squared_norm());
            if (gn > 5.0) grads.scale(5.0 / gn);

            rmsprop_update(model, grads, opt, config);
        }

        double train_loss = train_steps ? train_loss_sum / static_cast<double>(train_steps) : 0.0;
        double val_loss = monitor_val ? dataset_loss(model, seqs, val_idx) : train_loss;
        if (!std::isfinite(val_loss))
            throw TrainingError("non-finite validation loss at epoch " +
                                std::to_string(epoch));

        result.history.push_back({train_loss, val_loss});
        result.epochs_run = epoch;

        if (val_loss < best_val) {
            best_val = val_loss;
            best = model;
            epochs_without_improvement = 0;
        } else {
            ++epochs_without_improvement;
            if (epochs_without_improvement >= config.early_stopping_patience) break;
        }
    }

    result.model = std::move(best);
    result.best_val_loss = best_val;
    return result;
}

namespace {

// serialization uses the conventional per-gate shapes:
// W_* are H x V, U_* are H x H, b_* are H, W_y is V x H, b_y is V
constexpr const char* kGateNames[4] = {"i", "f", "o", "g"};

void write_gate_input(std::ostream& out, const LstmLangModel& m, std::size_t gate) {
    const std::size_t hs = static_cast<std::size_t>(m.hidden);
    const std::size_t v = static_cast<std::size_t>(m.vocab_size());
    out << "W_" << kGateNames[gate] << ' ' << hs << ' ' << v << '\n';
    std::vector<double> row(v);
    for (std::size_t h = 0; h < hs; ++h) {
        for (std::size_t c = 0; c < v; ++c)
            row[c] = m.w_in[c * 4 * hs + gate * hs + h];
        textio::write_row(out, row.data(), v);
    }
}

void write_gate_rec(std::ostream& out, const LstmLangModel& m, std::size_t gate) {
    const std::size_t hs = static_cast<std::size_t>(m.hidden);
    out << "U_" << kGateNames[gate] << ' ' << hs << ' ' << hs << '\n';
    for (std::size_t h = 0; h < hs; ++h)
        textio::write_row(out, m.w_rec.data() + (gate * hs + h) * hs, hs);
}

void write_gate_bias(std::ostream& out, const LstmLangModel& m, std::size_t gate) {
    const std::size_t hs = static_cast<std::size_t>(m.hidden);
    out << "b_" << kGateNames[gate] << ' ' << hs << '\n';
    textio::write_row(out, m.b_gate.data() + gate * hs, hs);
}

} // namespace

void save_charlm(std::ostream& out, const LstmLangModel& model) {
    if (!model.all_finite())
        throw std::invalid_argument("save_charlm: non-finite parameters");
    if (model.vocab.chars.find('\n') != std::string::npos ||
        model.vocab.chars.find('\r') != std::string::npos)
        throw std::invalid_argument("save_charlm: vocabulary characters not serializable");
    const std::size_t hs = static_cast<std::size_t>(model.hidden);
    const std::size_t v = static_cast<std::size_t>(model.vocab_size());

    out << "DGA-CHARLM v1\n";
    out << "hidden " << hs << '\n';
    out << "vocab " << model.vocab.chars.size() << '\n';
    out << model.vocab.chars << '\n';
    for (std::size_t gate = 0; gate < 4; ++gate) write_gate_input(out, model, gate);
    for (std::size_t gate = 0; gate < 4; ++gate) write_gate_rec(out, model, gate);
    for (std::size_t gate = 0; gate < 4; ++gate) write_gate_bias(out, model, gate);
    out << "W_y " << v << ' ' << hs << '\n';
    for (std::size_t r = 0; r < v; ++r)
        textio::write_row(out, model.w_out.data() + r * hs, hs);
    out << "b_y " << v << '\n';
    textio::write_row(out, model.b_out.data(), v);
    out << "end-charlm\n";
}

LstmLangModel load_charlm(std::istream& in) {
    using textio::FormatError;
    textio::expect_line(in, "DGA-CHARLM v1");

    std::string line = textio::read_line(in, "hidden");
    std::size_t hs = 0;
    if (std::sscanf(line.c_str(), "hidden %zu", &hs) != 1 || hs == 0)
        throw FormatError("bad hidden line: " + line);

    line = textio::read_line(in, "vocab");
    std::size_t nchars = 0;
    if (std::sscanf(line.c_str(), "vocab %zu", &nchars) != 1)
        throw FormatError("bad vocab line: " + line);
    std::string chars = textio::read_line(in, "vocab characters");
    if (chars.size() != nchars)
        throw FormatError("vocab character count mismatch");

    LstmLangModel m = LstmLangModel::zeros(CharVocab::from_chars(chars),
                                           static_cast<int>(hs));
    const std::size_t v = static_cast<std::size_t>(m.vocab_size());

    std::vector<double> tmp(v);
    for (std::size_t gate = 0; gate < 4; ++gate) {
        textio::expect_line(in, std::string("W_") + kGateNames[gate] + ' ' +
                                    std::to_string(hs) + ' ' + std::to_string(v));
        for (std::size_t h = 0; h < hs; ++h) {
            auto row = textio::parse_row(textio::read_line(in, "W row"), v, "W row");
            for (std::size_t c = 0; c < v; ++c)
                m.w_in[c * 4 * hs + gate * hs + h] = row[c];
        }
    }
    for (std::size_t gate = 0; gate < 4; ++gate) {
        textio::expect_line(in, std::string("U_") + kGateNames[gate] + ' ' +
                                    std::to_string(hs) + ' ' + std::to_string(hs));
        textio::read_matrix(in, m.w_rec.data() + gate * hs * hs, hs, hs, "U row");
    }
    for (std::size_t gate = 0; gate < 4; ++gate) {
        textio::expect_line(in, std::string("b_") + kGateNames[gate] + ' ' +
                                    std::to_string(hs));
        auto row = textio::parse_row(textio::read_line(in, "b row"), hs, "b row");
        std::copy(row.begin(), row.end(), m.b_gate.begin() + gate * hs);
    }
    textio::expect_line(in, "W_y " + std::to_string(v) + ' ' + std::to_string(hs));
    textio::read_matrix(in, m.w_out.data(), v, hs, "W_y row");
    textio::expect_line(in, "b_y " + std::to_string(v));
    auto row = textio::parse_row(textio::read_line(in, "b_y"), v, "b_y");
    std::copy(row.begin(), row.end(), m.b_out.begin());
    textio::expect_line(in, "end-charlm");
    return m;
}

} // namespace dga
