#pragma once

// Domain-name splitting against a public-suffix list, plus the 250-slot
// one-hot TLD encoder.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dga {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rules from a publicsuffix.org list: plain, wildcard ("*.ck") and
// exception ("!www.ck") rules.  Immutable once parsed.
class SuffixSet {
public:
    // Parses the publicsuffix.org text format.  "//" comments and blank
    // lines are ignored; malformed rules raise ParseError naming the line.
    static SuffixSet parse(std::string_view text);
    static SuffixSet load_file(const std::string& path);

    std::size_t rule_count() const {
        return plain_.size() + wildcard_.size() + exception_.size();
    }
    bool has_plain(const std::string& rule) const { return plain_.count(rule) > 0; }
    bool has_wildcard(const std::string& base) const { return wildcard_.count(base) > 0; }
    bool has_exception(const std::string& rule) const { return exception_.count(rule) > 0; }

    // Number of labels (from the right) forming the public suffix of the
    // given label sequence, per the publicsuffix.org algorithm.  At least
    // 1 (the implicit "*" rule) and at most labels.size().
    std::size_t match_suffix_labels(const std::vector<std::string>& labels) const;

    // Canonical rule lines, sorted; used for embedding in model files.
    std::vector<std::string> rules_text() const;

private:
    std::unordered_set<std::string> plain_;
    std::unordered_set<std::string> wildcard_;  // keyed by base, i.e. "*." stripped
    std::unordered_set<std::string> exception_; // keyed with "!" stripped
};

struct ParsedDomain {
    std::optional<std::string> subdomain;
    std::optional<std::string> domain;
    std::string tld;
    std::string raw; // normalized input

    bool operator==(const ParsedDomain&) const = default;
};

// Lowercases, strips one trailing dot, enforces the [a-z0-9._-] alphabet,
// non-empty labels and the 253-char hostname cap.  Throws ParseError.
std::string normalize_domain(std::string_view raw);

// Splits a hostname into subdomain / domain / public suffix.  A name that
// is itself a public suffix yields absent domain and subdomain.
ParsedDomain split_domain(std::string_view raw, const SuffixSet& suffixes);

// One-hot encoder over the most frequent TLDs; slot 250 is "other".
class TldEncoder {
public:
    static constexpr std::size_t kDim = 250;
    static constexpr std::size_t kMaxTracked = 249;
    static constexpr std::size_t kOtherSlot = 249;

    // Top TLDs by count (ties broken lexicographically ascending) over a
    // training corpus.  Throws std::invalid_argument on an empty corpus.
    static TldEncoder build(const std::vector<ParsedDomain>& corpus);

    static TldEncoder from_list(std::vector<std::string> top_tlds);

    std::size_t slot(const std::string& tld) const;
    std::vector<double> encode(const std::string& tld) const;

    const std::vector<std::string>& top_tlds() const { return top_tlds_; }

private:
    std::vector<std::string> top_tlds_; // at most 249 entries
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace dga
