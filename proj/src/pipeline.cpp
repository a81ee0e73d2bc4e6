#include "dga/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dga/textio.hpp"

namespace dga {

namespace {

// seed salts for the independently trained parts
enum : std::uint64_t {
    kSeedSubNondga = 0,
    kSeedSubDga = 1,
    kSeedDomNondga = 2,
    kSeedDomDga = 3,
    kSeedCleanSplit = 4,
};

LstmLangModel train_part(const std::vector<std::string>& corpus,
                         const CharVocab& vocab, const PipelineConfig& cfg,
                         std::uint64_t salt, const char* name,
                         TrainSummary* summary) {
    if (corpus.empty()) {
        // no data for this part: an all-zero model is the uniform
        // next-character predictor, which keeps the GLRT well-defined
        if (summary) summary->models.push_back({name, 0, 0, 0.0});
        return LstmLangModel::zeros(vocab, cfg.charlm.hidden_size);
    }
    TrainConfig tc = cfg.charlm;
    tc.seed = mix_seed(cfg.seed, salt);
    TrainResult r = train_charlm(corpus, tc, &vocab);
    if (summary)
        summary->models.push_back({name, corpus.size(), r.epochs_run, r.best_val_loss});
    return std::move(r.model);
}

} // namespace

StackModel::StackModel(SuffixSet suffixes, TldEncoder tld_encoder, GlrtModel glrt_sub,
                       GlrtModel glrt_dom, WhiteningTransform whitening,
                       LogisticModel logistic)
    : suffixes_(std::move(suffixes)),
      tld_encoder_(std::move(tld_encoder)),
      glrt_sub_(std::move(glrt_sub)),
      glrt_dom_(std::move(glrt_dom)),
      whitening_(std::move(whitening)),
      logistic_(std::move(logistic)) {
    if (whitening_.dim() != kFeatureDim || logistic_.weights.size() != kFeatureDim)
        throw std::invalid_argument("StackModel: stage dimensions must be 274");
}

StackModel StackModel::train(const std::vector<DatasetRow>& rows,
                             const SuffixSet& suffixes, const WhoisSnapshot* snapshot,
                             std::optional<Date> reference,
                             const PipelineConfig& config, TrainSummary* summary) {
    if (rows.empty())
        throw std::invalid_argument("StackModel::train: empty training set");
    if (snapshot != nullptr && !reference.has_value())
        throw std::invalid_argument("StackModel::train: WHOIS snapshot needs a reference date");

    std::vector<ParsedDomain> parsed;
    parsed.reserve(rows.size());
    for (const auto& r : rows) parsed.push_back(split_domain(r.domain, suffixes));

    std::vector<std::string> sub_nondga, sub_dga, dom_nondga, dom_dga, vocab_corpus;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool is_dga = rows[i].is_dga;
        if (parsed[i].subdomain) {
            (is_dga ? sub_dga : sub_nondga).push_back(*parsed[i].subdomain);
            vocab_corpus.push_back(*parsed[i].subdomain);
        }
        if (parsed[i].domain) {
            (is_dga ? dom_dga : dom_nondga).push_back(*parsed[i].domain);
            vocab_corpus.push_back(*parsed[i].domain);
        }
    }
    if (vocab_corpus.empty())
        throw TrainingError("StackModel::train: no extractable domain parts to train on");

    // one dictionary over the entire training set, shared by all models
    CharVocab vocab = CharVocab::build(vocab_corpus);

    if (summary) {
        summary->n_rows = rows.size();
        for (const auto& r : rows) (r.is_dga ? summary->n_dga : summary->n_clean) += 1;
    }

    LstmLangModel m_sub_nondga =
        train_part(sub_nondga, vocab, config, kSeedSubNondga, "subdomain-nondga", summary);
    LstmLangModel m_sub_dga =
        train_part(sub_dga, vocab, config, kSeedSubDga, "subdomain-dga", summary);
    LstmLangModel m_dom_nondga =
        train_part(dom_nondga, vocab, config, kSeedDomNondga, "domain-nondga", summary);
    LstmLangModel m_dom_dga =
        train_part(dom_dga, vocab, config, kSeedDomDga, "domain-dga", summary);

    GlrtModel glrt_sub(std::move(m_sub_nondga), std::move(m_sub_dga));
    GlrtModel glrt_dom(std::move(m_dom_nondga), std::move(m_dom_dga));

    TldEncoder tld_encoder = TldEncoder::build(parsed);

    std::vector<std::vector<double>> features;
    features.reserve(rows.size());
    std::vector<int> labels;
    labels.reserve(rows.size());
    std::size_t whois_matched = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const WhoisRecord* rec =
            snapshot ? snapshot->find(parsed[i].raw) : nullptr;
        if (rec) ++whois_matched;
        WhoisFeatures whois = extract_whois_features(
            rec, reference.value_or(Date{1970, 1, 1}));
        features.push_back(assemble(glrt_sub.extract_features(parsed[i].subdomain),
                                    glrt_dom.extract_features(parsed[i].domain),
                                    tld_encoder.encode(parsed[i].tld), whois));
        labels.push_back(rows[i].is_dga ? 1 : 0);
    }
    if (summary) summary->whois_matched = whois_matched;

    WhiteningTransform whitening =
        WhiteningTransform::fit(features, config.whitening_epsilon);
    for (auto& f : features) f = whitening.apply(f);

    LogisticModel logistic = train_logistic(features, labels, config.logistic);

    return StackModel(suffixes, std::move(tld_encoder), std::move(glrt_sub),
                      std::move(glrt_dom), std::move(whitening), std::move(logistic));
}

FeatureVector StackModel::raw_features(const std::string& domain,
                                       const WhoisSnapshot* snapshot,
                                       std::optional<Date> reference) const {
    if (snapshot != nullptr && !reference.has_value())
        throw std::invalid_argument("StackModel: WHOIS snapshot needs a reference date");
    ParsedDomain parsed = split_domain(domain, suffixes_);
    const WhoisRecord* rec = snapshot ? snapshot->find(parsed.raw) : nullptr;
    WhoisFeatures whois =
        extract_whois_features(rec, reference.value_or(Date{1970, 1, 1}));
    return assemble(glrt_sub_.extract_features(parsed.subdomain),
                    glrt_dom_.extract_features(parsed.domain),
                    tld_encoder_.encode(parsed.tld), whois);
}

double StackModel::score(const std::string& domain, const WhoisSnapshot* snapshot,
                         std::optional<Date> reference) const {
    std::vector<double> whitened =
        whitening_.apply(raw_features(domain, snapshot, reference));
    return predict_proba(logistic_, whitened);
}

void StackModel::save(std::ostream& out) const {
    out << "DGA-STACK v1\n";
    auto rules = suffixes_.rules_text();
    out << "suffixes " << rules.size() << '\n';
    for (const auto& r : rules) out << r << '\n';
    out << "tlds " << tld_encoder_.top_tlds().size() << '\n';
    for (const auto& t : tld_encoder_.top_tlds()) out << t << '\n';
    out << "glrt-subdomain\n";
    glrt_sub_.save(out);
    out << "glrt-domain\n";
    glrt_dom_.save(out);
    whitening_.save(out);
    logistic_.save(out);
    out << "end-stack\n";
}

void StackModel::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    save(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

StackModel StackModel::load(std::istream& in) {
    using textio::FormatError;
    textio::expect_line(in, "DGA-STACK v1");

    std::string line = textio::read_line(in, "suffixes header");
    std::size_t n_rules = 0;
    if (std::sscanf(line.c_str(), "suffixes %zu", &n_rules) != 1)
        throw FormatError("bad suffixes header: " + line);
    std::string rules_text;
    for (std::size_t i = 0; i < n_rules; ++i)
        rules_text += textio::read_line(in, "suffix rule") + '\n';
    SuffixSet suffixes = SuffixSet::parse(rules_text);

    line = textio::read_line(in, "tlds header");
    std::size_t n_tlds = 0;
    if (std::sscanf(line.c_str(), "tlds %zu", &n_tlds) != 1)
        throw FormatError("bad tlds header: " + line);
    std::vector<std::string> tlds;
    tlds.reserve(n_tlds);
    for (std::size_t i = 0; i < n_tlds; ++i)
        tlds.push_back(textio::read_line(in, "tld entry"));
    TldEncoder tld_encoder = TldEncoder::from_list(std::move(tlds));

    textio::expect_line(in, "glrt-subdomain");
    GlrtModel glrt_sub = GlrtModel::load(in);
    textio::expect_line(in, "glrt-domain");
    GlrtModel glrt_dom = GlrtModel::load(in);

    WhiteningTransform whitening = WhiteningTransform::load(in);
    LogisticModel logistic = LogisticModel::load(in);
    textio::expect_line(in, "end-stack");

    return StackModel(std::move(suffixes), std::move(tld_encoder), std::move(glrt_sub),
                      std::move(glrt_dom), std::move(whitening), std::move(logistic));
}

StackModel StackModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load(in);
}

ExperimentReport run_experiment(const Dataset& dataset, const std::string& family,
                                const SuffixSet& suffixes, const WhoisSnapshot* snapshot,
                                std::optional<Date> reference,
                                const PipelineConfig& config) {
    LooSplit split = leave_one_out_split(dataset, family, config.clean_holdout_fraction,
                                         mix_seed(config.seed, kSeedCleanSplit));

    std::vector<DatasetRow> train_rows;
    train_rows.reserve(split.train_indices.size());
    for (std::size_t i : split.train_indices) train_rows.push_back(dataset.rows[i]);

    StackModel model =
        StackModel::train(train_rows, suffixes, snapshot, reference, config);

    ExperimentReport report;
    report.family = family;
    for (std::size_t i : split.train_indices)
        (dataset.rows[i].is_dga ? report.n_train_dga : report.n_train_clean) += 1;

    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(split.test_indices.size());
    for (std::size_t i : split.test_indices) {
        const DatasetRow& row = dataset.rows[i];
        scores.push_back(model.score(row.domain, snapshot, reference));
        labels.push_back(row.is_dga ? 1 : 0);
        (row.is_dga ? report.n_test_dga : report.n_test_clean) += 1;
    }

    report.roc = roc_curve(scores, labels);
    PartialAucResult pauc = partial_auc(report.roc, config.fpr_max);
    report.pauc_raw = pauc.raw;
    report.pauc_std = pauc.standardized;
    return report;
}

namespace {

template <typename T>
T parse_number(const std::string& value, const std::string& key,
               const std::string& where) {
    std::istringstream ss(value);
    T out{};
    ss >> out;
    if (ss.fail() || !ss.eof())
        throw ParseError(where + ": bad value '" + value + "' for key '" + key + "'");
    return out;
}

} // namespace

ConfigFile load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path);
    return parse_config(in, path);
}

ConfigFile parse_config(std::istream& in, const std::string& source_name) {
    ConfigFile cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);

        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            std::size_t b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;

        const std::string where = source_name + " line " + std::to_string(line_no);
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ParseError(where + ": expected 'key = value'");
        std::string key = trim(trimmed.substr(0, eq));
        std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(where + ": expected 'key = value'");

        TrainConfig& tc = cfg.pipeline.charlm;
        LogisticConfig& lc = cfg.pipeline.logistic;
        if (key == "epochs") tc.epochs = parse_number<int>(value, key, where);
        else if (key == "hidden_size") tc.hidden_size = parse_number<int>(value, key, where);
        else if (key == "dropout_rate") tc.dropout_rate = parse_number<double>(value, key, where);
        else if (key == "learning_rate") tc.learning_rate = parse_number<double>(value, key, where);
        else if (key == "rmsprop_decay") tc.rmsprop_decay = parse_number<double>(value, key, where);
        else if (key == "rmsprop_epsilon") tc.rmsprop_epsilon = parse_number<double>(value, key, where);
        else if (key == "batch_size") tc.batch_size = parse_number<int>(value, key, where);
        else if (key == "early_stopping_patience") tc.early_stopping_patience = parse_number<int>(value, key, where);
        else if (key == "validation_fraction") tc.validation_fraction = parse_number<double>(value, key, where);
        else if (key == "seed") cfg.pipeline.seed = parse_number<std::uint64_t>(value, key, where);
        else if (key == "logistic_learning_rate") lc.learning_rate = parse_number<double>(value, key, where);
        else if (key == "logistic_max_iters") lc.max_iters = parse_number<int>(value, key, where);
        else if (key == "logistic_tolerance") lc.tolerance = parse_number<double>(value, key, where);
        else if (key == "logistic_l2_lambda") lc.l2_lambda = parse_number<double>(value, key, where);
        else if (key == "logistic_class_weight_dga") lc.class_weight_positive = parse_number<double>(value, key, where);
        else if (key == "logistic_class_weight_clean") lc.class_weight_negative = parse_number<double>(value, key, where);
        else if (key == "whitening_epsilon") cfg.pipeline.whitening_epsilon = parse_number<double>(value, key, where);
        else if (key == "clean_holdout_fraction") cfg.pipeline.clean_holdout_fraction = parse_number<double>(value, key, where);
        else if (key == "fpr_max") cfg.pipeline.fpr_max = parse_number<double>(value, key, where);
        else if (key == "suffix_list") cfg.suffix_list = value;
        else if (key == "wordlist") cfg.wordlist = value;
        else if (key == "whois_snapshot") cfg.whois_snapshot = value;
        else if (key == "reference_date") cfg.reference_date = value;
        else throw ParseError(where + ": unknown key '" + key + "'");
    }
    cfg.pipeline.charlm.validate();
    return cfg;
}

} // namespace dga
