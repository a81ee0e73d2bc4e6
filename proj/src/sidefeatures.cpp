#include "dga/sidefeatures.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dga/domain_parse.hpp"

namespace dga {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

int days_in_month(int year, int month) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return kDays[month - 1];
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::optional<std::string> opt_string(const std::string& field) {
    if (field.empty()) return std::nullopt;
    return field;
}

// returns false on a malformed flag
bool parse_flag(const std::string& field, bool& out) {
    if (field.empty() || field == "0") {
        out = false;
        return true;
    }
    if (field == "1") {
        out = true;
        return true;
    }
    return false;
}

} // namespace

std::optional<Date> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
        !all_digits(s.substr(8, 2)))
        return std::nullopt;
    Date d;
    d.year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    d.month = (s[5] - '0') * 10 + (s[6] - '0');
    d.day = (s[8] - '0') * 10 + (s[9] - '0');
    if (d.month < 1 || d.month > 12) return std::nullopt;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
    return d;
}

std::int64_t days_from_civil(const Date& d) {
    // Howard Hinnant's algorithm
    std::int64_t y = d.year;
    const int m = d.month;
    const int day = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

WhoisSnapshot WhoisSnapshot::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open WHOIS snapshot: " + path);
    return parse(in);
}

WhoisSnapshot WhoisSnapshot::parse(std::istream& in) {
    WhoisSnapshot snap;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        auto fields = split_tabs(line);
        if (fields.size() != 13) {
            ++snap.stats_.skipped;
            continue;
        }

        std::string domain;
        try {
            domain = normalize_domain(fields[0]);
        } catch (const ParseError&) {
            ++snap.stats_.skipped;
            continue;
        }

        WhoisRecord rec;
        rec.registrar_name = opt_string(fields[1]);
        rec.contact_email = opt_string(fields[2]);

        bool bad = false;
        auto read_date = [&](const std::string& f) -> std::optional<Date> {
            if (f.empty()) return std::nullopt;
            auto d = parse_date(f);
            if (!d) bad = true;
            return d;
        };
        rec.created = read_date(fields[3]);
        rec.updated = read_date(fields[4]);
        rec.expiration = read_date(fields[5]);
        rec.status = opt_string(fields[6]);
        bad = bad || !parse_flag(fields[7], rec.registrant_info);
        bad = bad || !parse_flag(fields[8], rec.admincontact_info);
        bad = bad || !parse_flag(fields[9], rec.billingcontact_info);
        bad = bad || !parse_flag(fields[10], rec.techcontact_info);
        bad = bad || !parse_flag(fields[11], rec.zonecontact_info);
        rec.registrar_iana_id = opt_string(fields[12]);

        if (bad) {
            ++snap.stats_.skipped;
            continue;
        }
        snap.records_[domain] = std::move(rec); // last duplicate wins
        ++snap.stats_.loaded;
    }
    return snap;
}

const WhoisRecord* WhoisSnapshot::find(const std::string& domain) const {
    auto it = records_.find(domain);
    return it == records_.end() ? nullptr : &it->second;
}

WhoisFeatures extract_whois_features(const WhoisRecord* record, const Date& reference) {
    WhoisFeatures f;
    if (record == nullptr) return f; // NXDOMAIN: all zeros

    const std::int64_t ref_days = days_from_civil(reference);
    auto days_since = [&](const std::optional<Date>& d) -> double {
        if (!d) return 0.0;
        return static_cast<double>(std::max<std::int64_t>(0, ref_days - days_from_civil(*d)));
    };
    auto days_until = [&](const std::optional<Date>& d) -> double {
        if (!d) return 0.0;
        return static_cast<double>(std::max<std::int64_t>(0, days_from_civil(*d) - ref_days));
    };

    f.values[0] = record->registrar_name.has_value() ? 1.0 : 0.0;
    f.values[1] = record->contact_email.has_value() ? 1.0 : 0.0;
    f.values[2] = days_since(record->created);
    f.values[3] = days_since(record->updated);
    f.values[4] = days_until(record->expiration);
    f.values[5] = record->status ? static_cast<double>(record->status->size()) : 0.0;
    f.values[6] = record->registrant_info ? 1.0 : 0.0;
    f.values[7] = record->admincontact_info ? 1.0 : 0.0;
    f.values[8] = record->billingcontact_info ? 1.0 : 0.0;
    f.values[9] = record->techcontact_info ? 1.0 : 0.0;
    f.values[10] = record->zonecontact_info ? 1.0 : 0.0;
    f.values[11] = record->registrar_iana_id.has_value() ? 1.0 : 0.0;
    return f;
}

FeatureVector assemble(const GlrtFeatures& glrt_sub, const GlrtFeatures& glrt_dom,
                       const std::vector<double>& tld_onehot,
                       const WhoisFeatures& whois) {
    if (tld_onehot.size() != TldEncoder::kDim)
        throw std::invalid_argument("assemble: TLD vector must have 250 entries");

    FeatureVector out(kFeatureDim, 0.0);
    auto sub = glrt_sub.as_array();
    auto dom = glrt_dom.as_array();
    std::copy(sub.begin(), sub.end(), out.begin() + kSubGlrtOffset);
    std::copy(dom.begin(), dom.end(), out.begin() + kDomGlrtOffset);
    std::copy(tld_onehot.begin(), tld_onehot.end(), out.begin() + kTldOffset);
    std::copy(whois.values.begin(), whois.values.end(), out.begin() + kWhoisOffset);
    return out;
}

} // namespace dga
