#pragma once

// Generalized likelihood ratio test over a DGA-trained and a
// non-DGA-trained language model: log ratio, posterior, threshold
// classification and the 6-value feature block.

#include <array>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "dga/charlm.hpp"

namespace dga {

enum class GlrtLabel { kNonDga, kDga };

// Feature block for one model and one (possibly absent) domain part.
// Likelihood-valued entries are kept in log space; an absent part zeroes
// everything including the presence flag.
struct GlrtFeatures {
    bool present = false;
    double loglik_nondga = 0.0;
    double loglik_dga = 0.0;
    double post_nondga = 0.0;
    double post_dga = 0.0;
    double log_ratio = 0.0;

    static constexpr std::size_t kDim = 6;
    std::array<double, kDim> as_array() const {
        return {present ? 1.0 : 0.0, loglik_nondga, loglik_dga,
                post_nondga, post_dga, log_ratio};
    }
};

class GlrtModel {
public:
    // Both models must share one vocabulary.
    GlrtModel(LstmLangModel nondga, LstmLangModel dga);

    const LstmLangModel& nondga() const { return nondga_; }
    const LstmLangModel& dga() const { return dga_; }
    const CharVocab& vocab() const { return nondga_.vocab; }

    // ln Lambda(x) = ln p(x|dga) - ln p(x|non-dga)
    double log_likelihood_ratio(std::string_view s) const;

    // p(dga|x), computed as logistic(log ratio)
    double posterior_dga(std::string_view s) const;

    // DGA iff Lambda(x) >= eta; eta must be positive
    GlrtLabel classify(std::string_view s, double eta) const;

    GlrtFeatures extract_features(const std::optional<std::string>& part) const;

    void save(std::ostream& out) const;       // header "DGA-GLRT v1"
    static GlrtModel load(std::istream& in);

private:
    LstmLangModel nondga_;
    LstmLangModel dga_;
};

} // namespace dga
