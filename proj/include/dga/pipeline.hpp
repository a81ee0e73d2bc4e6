#pragma once

// The full stacked detector: two RNN-GLRT models (subdomain / domain),
// TLD one-hot encoder, WHOIS features, PCA whitening and the logistic
// stacker, plus the "DGA-STACK v1" model file and the leave-one-out
// experiment driver.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dga/charlm.hpp"
#include "dga/dataset.hpp"
#include "dga/domain_parse.hpp"
#include "dga/eval.hpp"
#include "dga/glrt.hpp"
#include "dga/sidefeatures.hpp"
#include "dga/stacker.hpp"
#include "dga/whitening.hpp"

namespace dga {

struct PipelineConfig {
    TrainConfig charlm;        // charlm.seed is derived from `seed` per model
    LogisticConfig logistic;
    double whitening_epsilon = WhiteningTransform::kDefaultEpsilon;
    double clean_holdout_fraction = 0.2;
    double fpr_max = 0.01;
    std::uint64_t seed = 1;
};

// Flat "key = value" config file; '#' comments.  Unknown keys are errors.
struct ConfigFile {
    PipelineConfig pipeline;
    std::string suffix_list;
    std::string wordlist;
    std::string whois_snapshot;
    std::string reference_date;
};

ConfigFile load_config_file(const std::string& path);
ConfigFile parse_config(std::istream& in, const std::string& source_name);

struct CharlmSummary {
    std::string name;
    std::size_t corpus_size = 0;
    int epochs_run = 0;
    double best_val_loss = 0.0;
};

struct TrainSummary {
    std::vector<CharlmSummary> models;
    std::size_t n_rows = 0;
    std::size_t n_dga = 0;
    std::size_t n_clean = 0;
    std::size_t whois_matched = 0;
    std::size_t feature_dim = kFeatureDim;
};

class StackModel {
public:
    StackModel(SuffixSet suffixes, TldEncoder tld_encoder, GlrtModel glrt_sub,
               GlrtModel glrt_dom, WhiteningTransform whitening,
               LogisticModel logistic);

    // Trains all stages on the given rows only.  reference is required
    // when snapshot is non-null.
    static StackModel train(const std::vector<DatasetRow>& rows,
                            const SuffixSet& suffixes,
                            const WhoisSnapshot* snapshot,
                            std::optional<Date> reference,
                            const PipelineConfig& config,
                            TrainSummary* summary = nullptr);

    // P(malicious); a null snapshot uses the all-zero NXDOMAIN WHOIS block
    double score(const std::string& domain, const WhoisSnapshot* snapshot,
                 std::optional<Date> reference) const;

    // pre-whitening feature vector, mostly for inspection and tests
    FeatureVector raw_features(const std::string& domain,
                               const WhoisSnapshot* snapshot,
                               std::optional<Date> reference) const;

    const SuffixSet& suffixes() const { return suffixes_; }
    const TldEncoder& tld_encoder() const { return tld_encoder_; }
    const GlrtModel& glrt_sub() const { return glrt_sub_; }
    const GlrtModel& glrt_dom() const { return glrt_dom_; }
    const WhiteningTransform& whitening() const { return whitening_; }
    const LogisticModel& logistic_model() const { return logistic_; }

    void save(std::ostream& out) const; // header "DGA-STACK v1"
    void save_file(const std::string& path) const;
    static StackModel load(std::istream& in);
    static StackModel load_file(const std::string& path);

private:
    SuffixSet suffixes_;
    TldEncoder tld_encoder_;
    GlrtModel glrt_sub_;
    GlrtModel glrt_dom_;
    WhiteningTransform whitening_;
    LogisticModel logistic_;
};

struct ExperimentReport {
    std::string family;
    double pauc_std = 0.0;
    double pauc_raw = 0.0;
    RocCurve roc;
    std::size_t n_train_dga = 0;
    std::size_t n_train_clean = 0;
    std::size_t n_test_dga = 0;
    std::size_t n_test_clean = 0;
};

// Leave-one-family-out experiment: split, train the full pipeline on the
// training part only, score the test part, report partial AUC.
ExperimentReport run_experiment(const Dataset& dataset, const std::string& family,
                                const SuffixSet& suffixes,
                                const WhoisSnapshot* snapshot,
                                std::optional<Date> reference,
                                const PipelineConfig& config);

} // namespace dga
