#pragma once

// Character entropy, the smashword difficulty score (average log n-gram
// overlap with an English wordlist, n in {3,4,5}) and per-family
// aggregate statistics.

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dga {

// Maps each character n-gram (n in {3,4,5}) to the number of wordlist
// entries containing it at least once.
class NgramIndex {
public:
    static NgramIndex build(const std::vector<std::string>& wordlist);

    // 0 when the n-gram does not occur in any word
    std::uint32_t count(const std::string& ngram) const;

    std::size_t wordlist_size() const { return wordlist_size_; }
    std::size_t distinct_ngrams() const { return counts_.size(); }

private:
    std::size_t wordlist_size_ = 0;
    std::unordered_map<std::string, std::uint32_t> counts_;
};

// Wordlist file: one lowercase word per line, '#' comments ignored.
std::vector<std::string> load_wordlist(const std::string& path);

// Empirical character entropy in bits.  Throws on an empty string.
double char_entropy(std::string_view s);

// Lowercase, drop the final (TLD) label when the name has more than one
// label, strip the remaining dots.  Scores are computed on this form.
std::string smashword_preprocess(std::string_view domain);

// Average natural-log overlap count over the distinct n-grams of the
// preprocessed domain; 0 when nothing overlaps or fewer than 3 chars
// remain after preprocessing.
double smashword_score(std::string_view domain, const NgramIndex& index);

struct FamilyStats {
    std::string name;
    std::size_t n = 0;
    double avg_length = 0.0;
    double avg_entropy = 0.0;
    double avg_smashword = 0.0;
};

// Means of length / entropy (on the full domain string) and smashword
// score (on the preprocessed form).  Throws on an empty domain list.
FamilyStats family_stats(const std::string& name,
                         const std::vector<std::string>& domains,
                         const NgramIndex& index);

} // namespace dga
