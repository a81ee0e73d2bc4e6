#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "dga/glrt.hpp"
#include "dga/rng.hpp"

using namespace dga;

namespace {

LstmLangModel random_model(Rng& rng, const CharVocab& vocab, int hidden,
                           double scale = 0.5) {
    LstmLangModel m = LstmLangModel::zeros(vocab, hidden);
    for (auto* blk : {&m.w_in, &m.w_rec, &m.b_gate, &m.w_out, &m.b_out})
        for (double& w : *blk) w = rng.uniform(-scale, scale);
    return m;
}

GlrtModel random_glrt(Rng& rng, int hidden = 4) {
    CharVocab v = CharVocab::build({"abcdefgh01"});
    return GlrtModel(random_model(rng, v, hidden), random_model(rng, v, hidden));
}

std::string random_string(Rng& rng, std::size_t max_len = 20) {
    std::string s;
    std::size_t len = 1 + rng.below(max_len);
    for (std::size_t i = 0; i < len; ++i)
        s += static_cast<char>('a' + rng.below(10));
    return s;
}

} // namespace

TEST_CASE("identical class models give zero ratio and posterior one half") {
    Rng rng(1);
    CharVocab v = CharVocab::build({"abc"});
    LstmLangModel m = random_model(rng, v, 4);
    GlrtModel g(m, m);

    for (const std::string s : {"", "a", "abc", "cba", "zzz"}) {
        CHECK(g.log_likelihood_ratio(s) == 0.0);
        CHECK(g.posterior_dga(s) == 0.5);
    }
}

TEST_CASE("log ratio is the difference of the class log-likelihoods") {
    Rng rng(2);
    GlrtModel g = random_glrt(rng);
    for (int i = 0; i < 20; ++i) {
        std::string s = random_string(rng);
        double expect = g.dga().sequence_log_likelihood(s) -
                        g.nondga().sequence_log_likelihood(s);
        CHECK(g.log_likelihood_ratio(s) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("log ratio matches the per-step forward oracle") {
    Rng rng(3);
    GlrtModel g = random_glrt(rng, 3);
    std::string s = "fade01";
    auto seq = g.vocab().encode(s);

    auto sum_logprob = [&](const LstmLangModel& m) {
        auto dists = m.forward(seq);
        double total = 0.0;
        for (std::size_t t = 0; t < dists.size(); ++t)
            total += std::log(dists[t][seq[t + 1]]);
        return total;
    };
    double expect = sum_logprob(g.dga()) - sum_logprob(g.nondga());
    CHECK(g.log_likelihood_ratio(s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("posterior is the logistic of the log ratio") {
    Rng rng(4);
    GlrtModel g = random_glrt(rng);
    for (int i = 0; i < 50; ++i) {
        std::string s = random_string(rng);
        double lr = g.log_likelihood_ratio(s);
        CHECK(std::abs(g.posterior_dga(s) - logistic(lr)) <= 1e-12);
    }

    CHECK(logistic(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(logistic(-1000.0) == 0.0);
    CHECK(logistic(1000.0) == 1.0);
    CHECK_FALSE(std::isnan(logistic(-1000.0)));
}

TEST_CASE("classification thresholds on eta") {
    Rng rng(5);
    GlrtModel g = random_glrt(rng);
    std::string s = random_string(rng);
    double lr = g.log_likelihood_ratio(s);

    // eta below exp(lr) classifies as DGA, above as non-DGA
    CHECK(g.classify(s, std::exp(lr - 1.0)) == GlrtLabel::kDga);
    CHECK(g.classify(s, std::exp(lr + 1.0)) == GlrtLabel::kNonDga);

    CHECK_THROWS_AS(g.classify(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(g.classify(s, -1.0), std::invalid_argument);
}

TEST_CASE("classify at eta=1 agrees with the posterior rule") {
    Rng rng(6);
    GlrtModel g = random_glrt(rng);
    for (int i = 0; i < 100; ++i) {
        std::string s = random_string(rng);
        bool by_threshold = g.classify(s, 1.0) == GlrtLabel::kDga;
        bool by_posterior = g.posterior_dga(s) >= 0.5;
        CHECK(by_threshold == by_posterior);
    }
}

TEST_CASE("eta sweep traces monotone TPR/FPR") {
    Rng rng(7);
    GlrtModel g = random_glrt(rng);

    std::vector<std::string> dga_strings, clean_strings;
    for (int i = 0; i < 40; ++i) dga_strings.push_back(random_string(rng));
    for (int i = 0; i < 40; ++i) clean_strings.push_back(random_string(rng));

    double prev_tpr = 1.1, prev_fpr = 1.1;
    for (double log_eta = -5.0; log_eta <= 5.0; log_eta += 0.5) {
        double eta = std::exp(log_eta);
        double tpr = 0.0, fpr = 0.0;
        for (const auto& s : dga_strings)
            tpr += g.classify(s, eta) == GlrtLabel::kDga ? 1.0 : 0.0;
        for (const auto& s : clean_strings)
            fpr += g.classify(s, eta) == GlrtLabel::kDga ? 1.0 : 0.0;
        tpr /= 40.0;
        fpr /= 40.0;
        CHECK(tpr <= prev_tpr + 1e-12);
        CHECK(fpr <= prev_fpr + 1e-12);
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
}

TEST_CASE("feature extraction") {
    Rng rng(8);
    GlrtModel g = random_glrt(rng);

    GlrtFeatures absent = g.extract_features(std::nullopt);
    CHECK_FALSE(absent.present);
    auto arr = absent.as_array();
    for (double x : arr) CHECK(x == 0.0);

    std::string s = "abcd01";
    GlrtFeatures f = g.extract_features(s);
    CHECK(f.present);
    CHECK(f.loglik_dga == g.dga().sequence_log_likelihood(s));
    CHECK(f.loglik_nondga == g.nondga().sequence_log_likelihood(s));
    CHECK(f.log_ratio == f.loglik_dga - f.loglik_nondga);
    CHECK(std::abs(f.post_dga + f.post_nondga - 1.0) <= 1e-12);
    CHECK(std::abs(f.post_dga - logistic(f.log_ratio)) <= 1e-12);

    // identical class models: both posteriors are exactly one half
    CharVocab v = CharVocab::build({"ab"});
    LstmLangModel m = random_model(rng, v, 2);
    GlrtModel same(m, m);
    GlrtFeatures fs = same.extract_features(std::string("ab"));
    CHECK(fs.post_dga == 0.5);
    CHECK(fs.post_nondga == 0.5);
    CHECK(fs.log_ratio == 0.0);
}

TEST_CASE("exponentiating log features recovers the multiplicative form") {
    Rng rng(9);
    GlrtModel g = random_glrt(rng);
    GlrtFeatures f = g.extract_features(std::string("ab01")); // short: no underflow
    double ratio = std::exp(f.loglik_dga) / std::exp(f.loglik_nondga);
    CHECK(std::exp(f.log_ratio) == doctest::Approx(ratio).epsilon(1e-9));
}

TEST_CASE("features stay finite up to the hostname cap") {
    Rng rng(10);
    GlrtModel g = random_glrt(rng, 6);
    std::string s(253, 'q'); // all unknown characters
    GlrtFeatures f = g.extract_features(s);
    for (double x : f.as_array()) CHECK(std::isfinite(x));
    CHECK(f.post_dga >= 0.0);
    CHECK(f.post_dga <= 1.0);
}

TEST_CASE("glrt rejects mismatched vocabularies and round-trips") {
    Rng rng(11);
    CharVocab va = CharVocab::build({"ab"});
    CharVocab vb = CharVocab::build({"abc"});
    CHECK_THROWS_AS(GlrtModel(random_model(rng, va, 2), random_model(rng, vb, 2)),
                    std::invalid_argument);

    GlrtModel g = random_glrt(rng);
    std::stringstream ss;
    g.save(ss);
    GlrtModel loaded = GlrtModel::load(ss);
    for (int i = 0; i < 10; ++i) {
        std::string s = random_string(rng);
        CHECK(g.log_likelihood_ratio(s) == loaded.log_likelihood_ratio(s));
    }
}
