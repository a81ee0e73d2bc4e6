// Command-line front end: parse, smashword, train, score, eval-loo.
// Data goes to stdout, diagnostics to stderr; exit code 0 only on success.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dga/dataset.hpp"
#include "dga/domain_parse.hpp"
#include "dga/pipeline.hpp"
#include "dga/smashword.hpp"
#include "dga/textio.hpp"

namespace {

dga::Date parse_reference_date(const std::string& text) {
    auto d = dga::parse_date(text);
    if (!d) throw dga::ParseError("bad reference date '" + text + "', expected YYYY-MM-DD");
    return *d;
}

void require_file(const std::string& path, const char* what) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error(std::string(what) + " not found: " + path);
}

int cmd_parse(const std::string& domain, const std::string& suffix_list) {
    dga::SuffixSet suffixes = dga::SuffixSet::load_file(suffix_list);
    dga::ParsedDomain p = dga::split_domain(domain, suffixes);
    std::cout << "sub=" << p.subdomain.value_or("-")
              << " dom=" << p.domain.value_or("-")
              << " tld=" << p.tld << '\n';
    return 0;
}

int cmd_smashword(const std::string& wordlist_path, const std::string& dataset_path) {
    require_file(wordlist_path, "wordlist");
    require_file(dataset_path, "dataset");

    auto words = dga::load_wordlist(wordlist_path);
    dga::NgramIndex index = dga::NgramIndex::build(words);
    dga::Dataset ds = dga::load_dataset(dataset_path);
    if (ds.rows.empty()) throw std::runtime_error("dataset is empty");

    std::map<std::string, std::vector<std::string>> by_family;
    for (const auto& row : ds.rows) by_family[row.family].push_back(row.domain);

    std::vector<dga::FamilyStats> stats;
    stats.reserve(by_family.size());
    for (const auto& [family, domains] : by_family)
        stats.push_back(dga::family_stats(family, domains, index));
    std::stable_sort(stats.begin(), stats.end(),
                     [](const dga::FamilyStats& a, const dga::FamilyStats& b) {
                         return a.avg_smashword > b.avg_smashword;
                     });

    std::cout << "#family\tn\tavg_length\tavg_entropy\tavg_smashword\n";
    for (const auto& s : stats) {
        std::printf("%s\t%zu\t%.3f\t%.3f\t%.3f\n", s.name.c_str(), s.n,
                    s.avg_length, s.avg_entropy, s.avg_smashword);
    }
    return 0;
}

int cmd_train(const std::string& dataset_path, const std::string& suffix_list,
              const std::string& wordlist_path, const std::string& snapshot_path,
              const std::string& reference_text, const std::string& config_path,
              const std::string& out_path) {
    require_file(dataset_path, "dataset");
    require_file(suffix_list, "suffix list");
    require_file(snapshot_path, "WHOIS snapshot");

    dga::ConfigFile cfg;
    if (!config_path.empty()) cfg = dga::load_config_file(config_path);

    dga::SuffixSet suffixes = dga::SuffixSet::load_file(suffix_list);
    dga::Dataset ds = dga::load_dataset(dataset_path);
    if (ds.rows.empty()) throw std::runtime_error("dataset is empty");
    dga::WhoisSnapshot snapshot = dga::WhoisSnapshot::load_file(snapshot_path);
    dga::Date reference = parse_reference_date(reference_text);

    std::cerr << "loaded " << ds.rows.size() << " rows, WHOIS snapshot: "
              << snapshot.size() << " records (" << snapshot.stats().skipped
              << " lines skipped)\n";

    dga::TrainSummary summary;
    dga::StackModel model = dga::StackModel::train(ds.rows, suffixes, &snapshot,
                                                   reference, cfg.pipeline, &summary);
    model.save_file(out_path);

    std::cerr << "rows: " << summary.n_rows << " (" << summary.n_dga << " dga, "
              << summary.n_clean << " clean), WHOIS matched: "
              << summary.whois_matched << '\n';
    for (const auto& m : summary.models) {
        if (m.corpus_size == 0) {
            std::cerr << "model " << m.name << ": empty corpus, uniform predictor\n";
        } else {
            std::cerr << "model " << m.name << ": " << m.corpus_size
                      << " sequences, " << m.epochs_run << " epochs, best val loss "
                      << m.best_val_loss << '\n';
        }
    }
    std::cerr << "feature dim: " << summary.feature_dim << '\n';

    // optional Table-2-style difficulty summary of the training data
    if (!wordlist_path.empty()) {
        require_file(wordlist_path, "wordlist");
        auto words = dga::load_wordlist(wordlist_path);
        dga::NgramIndex index = dga::NgramIndex::build(words);
        std::map<std::string, std::vector<std::string>> by_family;
        for (const auto& row : ds.rows) by_family[row.family].push_back(row.domain);
        for (const auto& [family, domains] : by_family) {
            dga::FamilyStats s = dga::family_stats(family, domains, index);
            std::fprintf(stderr, "family %s: n=%zu len=%.3f entropy=%.3f smashword=%.3f\n",
                         s.name.c_str(), s.n, s.avg_length, s.avg_entropy,
                         s.avg_smashword);
        }
    }

    std::cerr << "model written to " << out_path << '\n';
    return 0;
}

int cmd_score(const std::string& model_path, const std::string& snapshot_path,
              const std::string& reference_text, const std::vector<std::string>& domains) {
    dga::StackModel model = dga::StackModel::load_file(model_path);

    std::optional<dga::WhoisSnapshot> snapshot;
    std::optional<dga::Date> reference;
    if (!snapshot_path.empty()) {
        if (reference_text.empty())
            throw std::runtime_error("--whois-snapshot requires --reference-date");
        snapshot = dga::WhoisSnapshot::load_file(snapshot_path);
        reference = parse_reference_date(reference_text);
    }

    for (const auto& domain : domains) {
        double p = model.score(domain, snapshot ? &*snapshot : nullptr, reference);
        std::printf("%s\t%.6f\n", domain.c_str(), p);
    }
    return 0;
}

int cmd_eval_loo(const std::string& dataset_path, const std::string& family,
                 bool all_families, const std::string& config_path,
                 const std::string& out_dir) {
    require_file(dataset_path, "dataset");
    dga::ConfigFile cfg = dga::load_config_file(config_path);
    if (cfg.suffix_list.empty())
        throw std::runtime_error("eval-loo config must set suffix_list");

    dga::SuffixSet suffixes = dga::SuffixSet::load_file(cfg.suffix_list);
    dga::Dataset ds = dga::load_dataset(dataset_path);

    std::optional<dga::WhoisSnapshot> snapshot;
    std::optional<dga::Date> reference;
    if (!cfg.whois_snapshot.empty()) {
        snapshot = dga::WhoisSnapshot::load_file(cfg.whois_snapshot);
        if (cfg.reference_date.empty())
            throw std::runtime_error("config sets whois_snapshot but no reference_date");
        reference = parse_reference_date(cfg.reference_date);
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw std::runtime_error("cannot create output directory: " + out_dir);

    std::vector<std::string> families;
    if (all_families) {
        families = ds.dga_families();
        if (families.size() < 2)
            throw std::runtime_error("leave-one-out needs at least 2 DGA families");
    } else {
        families.push_back(family);
    }

    std::ofstream report_file(out_dir + "/report.tsv");
    if (!report_file) throw std::runtime_error("cannot write report in " + out_dir);

    const std::string header = "family\tpAUC_std\tpAUC_raw\tn_train\tn_test";
    std::cout << header << '\n';
    report_file << header << '\n';
    for (const auto& fam : families) {
        dga::ExperimentReport rep = dga::run_experiment(
            ds, fam, suffixes, snapshot ? &*snapshot : nullptr, reference, cfg.pipeline);

        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.8f\t%zu\t%zu", fam.c_str(),
                      rep.pauc_std, rep.pauc_raw,
                      rep.n_train_dga + rep.n_train_clean,
                      rep.n_test_dga + rep.n_test_clean);
        std::cout << buf << '\n';
        report_file << buf << '\n';

        std::ofstream roc_file(out_dir + "/roc_" + fam + ".csv");
        if (!roc_file) throw std::runtime_error("cannot write ROC file for " + fam);
        for (const auto& pt : rep.roc.points)
            roc_file << dga::textio::fmt17(pt.fpr) << ',' << dga::textio::fmt17(pt.tpr) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DGA domain detection toolkit"};
    app.require_subcommand(1);

    // parse
    auto* parse_cmd = app.add_subcommand("parse", "split a domain into subdomain, domain and TLD");
    std::string parse_domain, parse_suffix_list;
    parse_cmd->add_option("domain", parse_domain, "domain name")->required();
    parse_cmd->add_option("--suffix-list", parse_suffix_list, "public suffix list file")->required();

    // smashword
    auto* smash_cmd = app.add_subcommand("smashword", "per-family difficulty statistics");
    std::string smash_wordlist, smash_dataset;
    smash_cmd->add_option("--wordlist", smash_wordlist, "reference wordlist")->required();
    smash_cmd->add_option("--domains", smash_dataset, "dataset TSV")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train the full detection pipeline");
    std::string train_dataset, train_suffix_list, train_wordlist, train_snapshot,
        train_reference, train_config, train_out;
    train_cmd->add_option("--dataset", train_dataset, "dataset TSV")->required();
    train_cmd->add_option("--suffix-list", train_suffix_list, "public suffix list file")->required();
    train_cmd->add_option("--wordlist", train_wordlist, "optional wordlist for difficulty stats");
    train_cmd->add_option("--whois-snapshot", train_snapshot, "WHOIS snapshot TSV")->required();
    train_cmd->add_option("--reference-date", train_reference, "YYYY-MM-DD")->required();
    train_cmd->add_option("--config", train_config, "key = value config file");
    train_cmd->add_option("--out", train_out, "output model path")->required();

    // score
    auto* score_cmd = app.add_subcommand("score", "score domains with a trained model");
    std::string score_model, score_snapshot, score_reference;
    std::vector<std::string> score_domains;
    score_cmd->add_option("--model", score_model, "trained DGA-STACK model")->required();
    score_cmd->add_option("--whois-snapshot", score_snapshot, "optional WHOIS snapshot TSV");
    score_cmd->add_option("--reference-date", score_reference, "YYYY-MM-DD");
    score_cmd->add_option("domains", score_domains, "domains to score")->required();

    // eval-loo
    auto* eval_cmd = app.add_subcommand("eval-loo", "leave-one-family-out evaluation");
    std::string eval_dataset, eval_family, eval_config, eval_out_dir;
    bool eval_all = false;
    eval_cmd->add_option("--dataset", eval_dataset, "dataset TSV")->required();
    auto* fam_opt = eval_cmd->add_option("--family", eval_family, "family to leave out");
    auto* all_opt = eval_cmd->add_flag("--all-families", eval_all, "evaluate every DGA family");
    fam_opt->excludes(all_opt);
    eval_cmd->add_option("--config", eval_config, "key = value config file")->required();
    eval_cmd->add_option("--out-dir", eval_out_dir, "report output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*parse_cmd) return cmd_parse(parse_domain, parse_suffix_list);
        if (*smash_cmd) return cmd_smashword(smash_wordlist, smash_dataset);
        if (*train_cmd)
            return cmd_train(train_dataset, train_suffix_list, train_wordlist,
                             train_snapshot, train_reference, train_config, train_out);
        if (*score_cmd)
            return cmd_score(score_model, score_snapshot, score_reference, score_domains);
        if (*eval_cmd) {
            if (!eval_all && eval_family.empty()) {
                std::cerr << "dga: error: eval-loo needs --family or --all-families\n";
                return 1;
            }
            return cmd_eval_loo(eval_dataset, eval_family, eval_all, eval_config,
                                eval_out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "dga: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
