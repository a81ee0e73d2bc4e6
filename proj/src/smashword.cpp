#include "dga/smashword.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace dga {

namespace {

// distinct n-grams for n in {3,4,5}; sorted so downstream summation
// order is deterministic
std::set<std::string> distinct_ngrams_345(std::string_view s) {
    std::set<std::string> grams;
    for (std::size_t n = 3; n <= 5; ++n) {
        if (s.size() < n) break;
        for (std::size_t i = 0; i + n <= s.size(); ++i)
            grams.insert(std::string(s.substr(i, n)));
    }
    return grams;
}

} // namespace

NgramIndex NgramIndex::build(const std::vector<std::string>& wordlist) {
    if (wordlist.empty())
        throw std::invalid_argument("NgramIndex: empty wordlist");
    NgramIndex index;
    index.wordlist_size_ = wordlist.size();
    for (const auto& word : wordlist) {
        // per-word presence: each distinct n-gram of a word counts once
        for (const auto& gram : distinct_ngrams_345(word))
            ++index.counts_[gram];
    }
    return index;
}

std::uint32_t NgramIndex::count(const std::string& ngram) const {
    auto it = counts_.find(ngram);
    return it == counts_.end() ? 0 : it->second;
}

std::vector<std::string> load_wordlist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open wordlist: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                                 line.back() == '\t'))
            line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        for (char& c : line)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        words.push_back(line);
    }
    return words;
}

double char_entropy(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("char_entropy: empty string");
    std::array<std::size_t, 256> freq{};
    for (unsigned char c : s) ++freq[c];
    // -sum p log2 p  ==  log2(n) - (1/n) sum c log2 c; the latter is exact
    // for uniform power-of-two cases
    const double n = static_cast<double>(s.size());
    double acc = 0.0;
    for (std::size_t c : freq) {
        if (c > 1) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    return std::log2(n) - acc / n;
}

std::string smashword_preprocess(std::string_view domain) {
    std::string s;
    s.reserve(domain.size());
    for (char c : domain)
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!s.empty() && s.back() == '.') s.pop_back();

    std::size_t last_dot = s.rfind('.');
    if (last_dot != std::string::npos) s.erase(last_dot); // drop TLD label

    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != '.') out += c;
    return out;
}

double smashword_score(std::string_view domain, const NgramIndex& index) {
    std::string text = smashword_preprocess(domain);
    if (text.size() < 3) return 0.0;

    auto grams = distinct_ngrams_345(text);
    double sum = 0.0;
    for (const auto& gram : grams) {
        std::uint32_t c = index.count(gram);
        if (c > 0) sum += std::log(static_cast<double>(c));
    }
    return sum / static_cast<double>(grams.size());
}

FamilyStats family_stats(const std::string& name,
                         const std::vector<std::string>& domains,
                         const NgramIndex& index) {
    if (domains.empty())
        throw std::invalid_argument("family_stats: empty domain list");
    FamilyStats stats;
    stats.name = name;
    stats.n = domains.size();
    double len = 0.0, ent = 0.0, smash = 0.0;
    for (const auto& d : domains) {
        len += static_cast<double>(d.size());
        ent += char_entropy(d);
        smash += smashword_score(d, index);
    }
    const double n = static_cast<double>(domains.size());
    stats.avg_length = len / n;
    stats.avg_entropy = ent / n;
    stats.avg_smashword = smash / n;
    return stats;
}

} // namespace dga
