#include "dga/domain_parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace dga {

namespace {

constexpr std::size_t kMaxHostname = 253;

bool valid_domain_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
}

std::vector<std::string> split_labels(std::string_view s) {
    std::vector<std::string> labels;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = s.find('.', start);
        if (dot == std::string_view::npos) {
            labels.emplace_back(s.substr(start));
            break;
        }
        labels.emplace_back(s.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

std::string join_tail(const std::vector<std::string>& labels, std::size_t count) {
    std::string out;
    for (std::size_t i = labels.size() - count; i < labels.size(); ++i) {
        if (!out.empty()) out += '.';
        out += labels[i];
    }
    return out;
}

std::string join_range(const std::vector<std::string>& labels,
                       std::size_t first, std::size_t last) {
    std::string out;
    for (std::size_t i = first; i < last; ++i) {
        if (!out.empty()) out += '.';
        out += labels[i];
    }
    return out;
}

bool valid_rule_label(std::string_view label) {
    if (label.empty()) return false;
    for (char c : label)
        if (!valid_domain_char(c) || c == '.') return false;
    return true;
}

} // namespace

SuffixSet SuffixSet::parse(std::string_view text) {
    SuffixSet set;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        ++line_no;
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

        // trim surrounding whitespace/CR
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
            line.remove_prefix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.remove_suffix(1);
        if (line.empty() || line.substr(0, 2) == "//") continue;

        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c)))
                throw ParseError("suffix list line " + std::to_string(line_no) +
                                 ": embedded whitespace in rule");
        }

        std::string rule;
        rule.reserve(line.size());
        for (char c : line)
            rule += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

        bool exception = false;
        bool wildcard = false;
        if (!rule.empty() && rule.front() == '!') {
            exception = true;
            rule.erase(0, 1);
        } else if (rule.size() >= 2 && rule[0] == '*' && rule[1] == '.') {
            wildcard = true;
            rule.erase(0, 2);
        }

        if (rule.empty())
            throw ParseError("suffix list line " + std::to_string(line_no) +
                             ": empty rule");

        auto labels = split_labels(rule);
        for (const auto& label : labels) {
            if (!valid_rule_label(label))
                throw ParseError("suffix list line " + std::to_string(line_no) +
                                 ": invalid label in rule '" + rule + "'");
        }
        if (exception && labels.size() < 2)
            throw ParseError("suffix list line " + std::to_string(line_no) +
                             ": exception rule needs at least two labels");

        if (exception)
            set.exception_.insert(rule);
        else if (wildcard)
            set.wildcard_.insert(rule);
        else
            set.plain_.insert(rule);
    }
    return set;
}

SuffixSet SuffixSet::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open suffix list: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::size_t SuffixSet::match_suffix_labels(const std::vector<std::string>& labels) const {
    const std::size_t n = labels.size();

    // Exception rules take priority: the public suffix is the exception
    // with its leftmost label removed.
    std::size_t exception_len = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (exception_.count(join_tail(labels, k)) > 0) exception_len = k;
    }
    if (exception_len > 0) return exception_len - 1;

    std::size_t best = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (plain_.count(join_tail(labels, k)) > 0) best = std::max(best, k);
    }
    // "*.base" matches base plus exactly one extra label
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        if (wildcard_.count(join_tail(labels, k)) > 0) best = std::max(best, k + 1);
    }
    // implicit "*" rule
    return best > 0 ? best : 1;
}

std::vector<std::string> SuffixSet::rules_text() const {
    std::vector<std::string> out;
    out.reserve(rule_count());
    for (const auto& r : plain_) out.push_back(r);
    for (const auto& r : wildcard_) out.push_back("*." + r);
    for (const auto& r : exception_) out.push_back("!" + r);
    std::sort(out.begin(), out.end());
    return out;
}

std::string normalize_domain(std::string_view raw) {
    std::string s;
    s.reserve(raw.size());
    for (char c : raw)
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s.empty()) throw ParseError("empty domain name");
    if (s.size() > kMaxHostname)
        throw ParseError("domain name longer than 253 characters");
    for (char c : s) {
        if (!valid_domain_char(c))
            throw ParseError(std::string("invalid character '") + c +
                             "' in domain name");
    }
    if (s.front() == '.' || s.find("..") != std::string::npos)
        throw ParseError("empty label in domain name");
    return s;
}

ParsedDomain split_domain(std::string_view raw, const SuffixSet& suffixes) {
    ParsedDomain out;
    out.raw = normalize_domain(raw);
    auto labels = split_labels(out.raw);
    std::size_t suffix_len = suffixes.match_suffix_labels(labels);

    out.tld = join_tail(labels, suffix_len);
    std::size_t rest = labels.size() - suffix_len;
    if (rest >= 1) out.domain = labels[rest - 1];
    if (rest >= 2) out.subdomain = join_range(labels, 0, rest - 1);
    return out;
}

TldEncoder TldEncoder::build(const std::vector<ParsedDomain>& corpus) {
    if (corpus.empty())
        throw std::invalid_argument("TldEncoder: empty training corpus");

    std::map<std::string, std::size_t> counts;
    for (const auto& d : corpus) ++counts[d.tld];

    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > kMaxTracked) ranked.resize(kMaxTracked);

    std::vector<std::string> top;
    top.reserve(ranked.size());
    for (auto& [tld, cnt] : ranked) top.push_back(std::move(tld));
    return from_list(std::move(top));
}

TldEncoder TldEncoder::from_list(std::vector<std::string> top_tlds) {
    if (top_tlds.size() > kMaxTracked)
        throw std::invalid_argument("TldEncoder: more than 249 TLDs");
    TldEncoder enc;
    enc.top_tlds_ = std::move(top_tlds);
    for (std::size_t i = 0; i < enc.top_tlds_.size(); ++i) {
        auto [it, inserted] = enc.index_.emplace(enc.top_tlds_[i], i);
        if (!inserted)
            throw std::invalid_argument("TldEncoder: duplicate TLD '" + enc.top_tlds_[i] + "'");
    }
    return enc;
}

std::size_t TldEncoder::slot(const std::string& tld) const {
    auto it = index_.find(tld);
    return it == index_.end() ? kOtherSlot : it->second;
}

std::vector<double> TldEncoder::encode(const std::string& tld) const {
    std::vector<double> v(kDim, 0.0);
    v[slot(tld)] = 1.0;
    return v;
}

} // namespace dga
