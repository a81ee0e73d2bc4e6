#pragma once

// WHOIS snapshot ingestion, the 12 WHOIS features, and assembly of the
// 274-dimensional stacked feature vector
// (6 subdomain GLRT + 6 domain GLRT + 250 TLD one-hot + 12 WHOIS).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dga/glrt.hpp"

namespace dga {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    bool operator==(const Date&) const = default;
};

// strict YYYY-MM-DD; nullopt on anything else (including invalid days)
std::optional<Date> parse_date(std::string_view s);

// days since 1970-01-01 (proleptic Gregorian)
std::int64_t days_from_civil(const Date& d);

struct WhoisRecord {
    std::optional<std::string> registrar_name;
    std::optional<std::string> contact_email;
    std::optional<Date> created;
    std::optional<Date> updated;
    std::optional<Date> expiration;
    std::optional<std::string> status;
    bool registrant_info = false;
    bool admincontact_info = false;
    bool billingcontact_info = false;
    bool techcontact_info = false;
    bool zonecontact_info = false;
    std::optional<std::string> registrar_iana_id;
};

struct WhoisFeatures {
    static constexpr std::size_t kDim = 12;
    // order: has_registrarname, has_contactemail, days_since_created,
    // days_since_updated, days_until_expiration, status_length,
    // has_registrant_info, has_admincontact_info, has_billingcontact_info,
    // has_techcontact_info, has_zonecontact_info, has_registrar_iana_id
    std::array<double, kDim> values{};
};

struct SnapshotStats {
    std::size_t loaded = 0;
    std::size_t skipped = 0;
};

// Tab-separated snapshot, one record per line:
//   domain  registrar_name  contact_email  created  updated  expiration
//   status  registrant_info  admincontact_info  billingcontact_info
//   techcontact_info  zonecontact_info  registrar_iana_id
// Dates are YYYY-MM-DD, booleans 1/0, empty fields missing.  Malformed
// lines are skipped and counted; later duplicates win.
class WhoisSnapshot {
public:
    static WhoisSnapshot load_file(const std::string& path);
    static WhoisSnapshot parse(std::istream& in);

    const WhoisRecord* find(const std::string& domain) const;
    std::size_t size() const { return records_.size(); }
    const SnapshotStats& stats() const { return stats_; }

private:
    std::unordered_map<std::string, WhoisRecord> records_;
    SnapshotStats stats_;
};

// NXDOMAIN rule: a missing record produces all zeros.  Day counts are
// floored at 0; missing dates or status contribute 0.
WhoisFeatures extract_whois_features(const WhoisRecord* record, const Date& reference);

inline constexpr std::size_t kFeatureDim = 274;
inline constexpr std::size_t kSubGlrtOffset = 0;
inline constexpr std::size_t kDomGlrtOffset = 6;
inline constexpr std::size_t kTldOffset = 12;
inline constexpr std::size_t kWhoisOffset = 262;

using FeatureVector = std::vector<double>; // length kFeatureDim

FeatureVector assemble(const GlrtFeatures& glrt_sub, const GlrtFeatures& glrt_dom,
                       const std::vector<double>& tld_onehot,
                       const WhoisFeatures& whois);

} // namespace dga
