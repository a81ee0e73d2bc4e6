#include "dga/glrt.hpp"

#include <cmath>
#include <stdexcept>

#include "dga/textio.hpp"

namespace dga {

GlrtModel::GlrtModel(LstmLangModel nondga, LstmLangModel dga)
    : nondga_(std::move(nondga)), dga_(std::move(dga)) {
    if (!(nondga_.vocab == dga_.vocab))
        throw std::invalid_argument("GlrtModel: class models must share a vocabulary");
}

double GlrtModel::log_likelihood_ratio(std::string_view s) const {
    // encode once: the vocabularies are identical
    std::vector<int> seq = nondga_.vocab.encode(s);
    return dga_.log_likelihood_encoded(seq) - nondga_.log_likelihood_encoded(seq);
}

double GlrtModel::posterior_dga(std::string_view s) const {
    return logistic(log_likelihood_ratio(s));
}

GlrtLabel GlrtModel::classify(std::string_view s, double eta) const {
    if (!(eta > 0.0))
        throw std::invalid_argument("GlrtModel::classify: eta must be > 0");
    return log_likelihood_ratio(s) >= std::log(eta) ? GlrtLabel::kDga
                                                    : GlrtLabel::kNonDga;
}

GlrtFeatures GlrtModel::extract_features(const std::optional<std::string>& part) const {
    GlrtFeatures f;
    if (!part.has_value()) return f;

    std::vector<int> seq = nondga_.vocab.encode(*part);
    f.present = true;
    f.loglik_nondga = nondga_.log_likelihood_encoded(seq);
    f.loglik_dga = dga_.log_likelihood_encoded(seq);
    f.log_ratio = f.loglik_dga - f.loglik_nondga;
    f.post_dga = logistic(f.log_ratio);
    f.post_nondga = logistic(-f.log_ratio);
    return f;
}

void GlrtModel::save(std::ostream& out) const {
    out << "DGA-GLRT v1\n";
    save_charlm(out, nondga_);
    save_charlm(out, dga_);
}

GlrtModel GlrtModel::load(std::istream& in) {
    textio::expect_line(in, "DGA-GLRT v1");
    LstmLangModel nondga = load_charlm(in);
    LstmLangModel dga = load_charlm(in);
    return GlrtModel(std::move(nondga), std::move(dga));
}

} // namespace dga
