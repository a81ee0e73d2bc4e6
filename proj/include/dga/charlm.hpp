#pragma once

// Character-level next-character predictor: single LSTM layer plus a
// dense softmax output, trained with RMSprop on categorical
// cross-entropy.  Exposes per-step distributions, sequence
// log-likelihood, exact BPTT gradients and a versioned text
// serialization (header "DGA-CHARLM v1").

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dga/rng.hpp"

namespace dga {

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vocabulary over the characters of a corpus plus the reserved '?'
// (unknown), START and END symbols at fixed indices 0/1/2.
struct CharVocab {
    static constexpr int kUnknown = 0;
    static constexpr int kStart = 1;
    static constexpr int kEnd = 2;
    static constexpr int kReservedCount = 3;

    std::string chars; // sorted distinct corpus characters; chars[i] -> index 3+i

    static CharVocab build(const std::vector<std::string>& corpus);
    static CharVocab from_chars(std::string sorted_chars);

    int size() const { return kReservedCount + static_cast<int>(chars.size()); }
    int index_of(char c) const;
    char char_at(int index) const; // index >= kReservedCount

    // [START] + char indices (unknown -> '?') + [END]
    std::vector<int> encode(std::string_view s) const;

    bool operator==(const CharVocab& other) const { return chars == other.chars; }
};

struct TrainConfig {
    int epochs = 100;
    int hidden_size = 64; // paper-scale runs use 500
    double dropout_rate = 0.2;
    double learning_rate = 1e-3;
    double rmsprop_decay = 0.9;
    double rmsprop_epsilon = 1e-8;
    int batch_size = 64;
    int early_stopping_patience = 5;
    double validation_fraction = 0.1;
    std::uint64_t seed = 1;

    void validate() const; // throws std::invalid_argument
};

// LSTM parameters.  Gate blocks are packed in the order
// [input, forget, output, cell]:
//   w_in   V x 4H   row v = contribution of input character v
//   w_rec  4H x H   recurrent weights
//   b_gate 4H       gate biases
//   w_out  V x H    dense output weights
//   b_out  V        dense output bias
struct LstmLangModel {
    CharVocab vocab;
    int hidden = 0;
    std::vector<double> w_in;
    std::vector<double> w_rec;
    std::vector<double> b_gate;
    std::vector<double> w_out;
    std::vector<double> b_out;

    static LstmLangModel zeros(CharVocab vocab, int hidden);

    int vocab_size() const { return vocab.size(); }
    std::size_t param_count() const;
    bool all_finite() const;

    // Per-step next-character distributions for an encoded sequence:
    // result[t] predicts seq[t+1].  Throws std::out_of_range on a bad index.
    std::vector<std::vector<double>> forward(const std::vector<int>& seq) const;

    // sum_t ln p(seq[t+1] | seq[0..t]) including the END prediction
    double sequence_log_likelihood(std::string_view s) const;
    double log_likelihood_encoded(const std::vector<int>& seq) const;
};

// Gradient blocks, shaped like the model parameters.
struct LstmGradients {
    std::vector<double> w_in;
    std::vector<double> w_rec;
    std::vector<double> b_gate;
    std::vector<double> w_out;
    std::vector<double> b_out;

    static LstmGradients zeros_like(const LstmLangModel& m);
    double squared_norm() const;
    void scale(double factor);
};

// A batch of encoded sequences.  step_mask, when non-empty, holds one
// 0/1 flag per prediction step of each row; masked-out steps contribute
// zero loss and zero gradient.  Empty step_mask means all steps count.
struct TrainBatch {
    std::vector<std::vector<int>> rows;
    std::vector<std::vector<std::uint8_t>> step_mask;

    static TrainBatch from_sequences(std::vector<std::vector<int>> rows);
};

// Masked mean cross-entropy over all prediction steps in the batch and,
// when grads is non-null, its exact BPTT gradient.  dropout_rng must be
// supplied when dropout_rate > 0 (inverted dropout on the LSTM outputs
// feeding the dense layer).
double lstm_loss_and_gradient(const LstmLangModel& model, const TrainBatch& batch,
                              LstmGradients* grads, double dropout_rate = 0.0,
                              Rng* dropout_rng = nullptr);

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    LstmLangModel model;
    std::vector<EpochStats> history;
    int epochs_run = 0;
    double best_val_loss = std::numeric_limits<double>::infinity();
};

// RMSprop training with early stopping on validation loss; returns the
// parameters with the best validation loss.  Deterministic given
// config.seed.  When shared_vocab is null the vocabulary is built from
// the corpus itself.
TrainResult train_charlm(const std::vector<std::string>& corpus,
                         const TrainConfig& config,
                         const CharVocab* shared_vocab = nullptr);

void save_charlm(std::ostream& out, const LstmLangModel& model);
LstmLangModel load_charlm(std::istream& in);

// numerically safe logistic, used by the GLRT posterior and the stacker
double logistic(double x);

} // namespace dga
