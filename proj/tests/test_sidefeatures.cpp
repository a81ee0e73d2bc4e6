#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "dga/domain_parse.hpp"
#include "dga/sidefeatures.hpp"

using namespace dga;

namespace {

std::string snapshot_line(const std::string& domain, const std::string& registrar,
                          const std::string& email, const std::string& created,
                          const std::string& updated, const std::string& expiration,
                          const std::string& status, const std::string& flags5,
                          const std::string& iana) {
    // flags5 = "1,0,1,0,1" style shorthand
    std::string out = domain + '\t' + registrar + '\t' + email + '\t' + created +
                      '\t' + updated + '\t' + expiration + '\t' + status;
    std::size_t start = 0;
    for (int i = 0; i < 5; ++i) {
        std::size_t comma = flags5.find(',', start);
        out += '\t' + flags5.substr(start, comma == std::string::npos
                                               ? std::string::npos
                                               : comma - start);
        start = comma + 1;
    }
    out += '\t' + iana;
    return out;
}

} // namespace

TEST_CASE("date parsing is strict") {
    CHECK(parse_date("2018-01-31") == Date{2018, 1, 31});
    CHECK(parse_date("2020-02-29") == Date{2020, 2, 29});
    CHECK_FALSE(parse_date("2018-02-29").has_value()); // not a leap year
    CHECK_FALSE(parse_date("2018-13-01").has_value());
    CHECK_FALSE(parse_date("2018-00-01").has_value());
    CHECK_FALSE(parse_date("2018-01-00").has_value());
    CHECK_FALSE(parse_date("2018/01/01").has_value());
    CHECK_FALSE(parse_date("18-01-01").has_value());
    CHECK_FALSE(parse_date("2018-1-1").has_value());
    CHECK_FALSE(parse_date("").has_value());
}

TEST_CASE("civil day arithmetic") {
    CHECK(days_from_civil({1970, 1, 1}) == 0);
    CHECK(days_from_civil({1970, 1, 31}) - days_from_civil({1970, 1, 1}) == 30);
    CHECK(days_from_civil({2018, 1, 31}) - days_from_civil({2018, 1, 1}) == 30);
    CHECK(days_from_civil({2000, 3, 1}) - days_from_civil({2000, 2, 28}) == 2);
    CHECK(days_from_civil({1900, 3, 1}) - days_from_civil({1900, 2, 28}) == 1);
    CHECK(days_from_civil({1969, 12, 31}) == -1);
    CHECK(days_from_civil({2000, 1, 1}) == 10957);
}

TEST_CASE("snapshot ingestion") {
    std::stringstream in;
    in << snapshot_line("example.com", "Example Registrar", "admin@example.com",
                        "2017-01-01", "2018-06-15", "2025-01-01",
                        "clientTransferProhibited", "1,1,0,1,0", "1234")
       << '\n';
    in << snapshot_line("minimal.net", "", "", "", "", "", "", ",,,,", "") << '\n';
    in << "malformed line without tabs\n";
    in << snapshot_line("dup.org", "First", "", "", "", "", "", ",,,,", "") << '\n';
    in << snapshot_line("dup.org", "Second", "", "", "", "", "", ",,,,", "") << '\n';

    WhoisSnapshot snap = WhoisSnapshot::parse(in);
    CHECK(snap.stats().loaded == 4);
    CHECK(snap.stats().skipped == 1);
    CHECK(snap.size() == 3);

    const WhoisRecord* rec = snap.find("example.com");
    REQUIRE(rec != nullptr);
    CHECK(rec->registrar_name == "Example Registrar");
    CHECK(rec->created == Date{2017, 1, 1});
    CHECK(rec->registrant_info);
    CHECK_FALSE(rec->billingcontact_info);
    CHECK(rec->registrar_iana_id == "1234");

    const WhoisRecord* minimal = snap.find("minimal.net");
    REQUIRE(minimal != nullptr);
    CHECK_FALSE(minimal->registrar_name.has_value());
    CHECK_FALSE(minimal->created.has_value());

    // last duplicate wins
    CHECK(snap.find("dup.org")->registrar_name == "Second");
    CHECK(snap.find("absent.io") == nullptr);
}

TEST_CASE("snapshot skips malformed dates and flags without aborting") {
    std::stringstream in;
    in << snapshot_line("baddate.com", "R", "", "2017-13-45", "", "", "", ",,,,", "")
       << '\n';
    in << snapshot_line("badflag.com", "R", "", "", "", "", "", "2,,,,", "") << '\n';
    in << snapshot_line("ok.com", "R", "", "", "", "", "", ",,,,", "") << '\n';
    in << snapshot_line("bad domain!.com", "R", "", "", "", "", "", ",,,,", "") << '\n';

    WhoisSnapshot snap = WhoisSnapshot::parse(in);
    CHECK(snap.size() == 1);
    CHECK(snap.stats().skipped == 3);
    CHECK(snap.find("ok.com") != nullptr);
}

TEST_CASE("whois feature extraction") {
    const Date ref{2018, 1, 31};

    // NXDOMAIN: all twelve values are exactly zero
    WhoisFeatures none = extract_whois_features(nullptr, ref);
    for (double v : none.values) CHECK(v == 0.0);

    WhoisRecord rec;
    rec.registrar_name = "Reg";
    rec.contact_email = "a@b.c";
    rec.created = Date{2018, 1, 1};
    rec.updated = Date{2018, 1, 21};
    rec.expiration = Date{2018, 3, 2};
    rec.status = "clientTransferProhibited";
    rec.registrant_info = true;
    rec.techcontact_info = true;
    rec.registrar_iana_id = "99";

    WhoisFeatures f = extract_whois_features(&rec, ref);
    CHECK(f.values[0] == 1.0);
    CHECK(f.values[1] == 1.0);
    CHECK(f.values[2] == 30.0); // days since created
    CHECK(f.values[3] == 10.0); // days since updated
    CHECK(f.values[4] == 30.0); // days until expiration
    CHECK(f.values[5] == 24.0); // status length
    CHECK(f.values[6] == 1.0);
    CHECK(f.values[7] == 0.0);
    CHECK(f.values[8] == 0.0);
    CHECK(f.values[9] == 1.0);
    CHECK(f.values[10] == 0.0);
    CHECK(f.values[11] == 1.0);

    // purity: identical inputs give identical outputs
    WhoisFeatures again = extract_whois_features(&rec, ref);
    CHECK(f.values == again.values);
}

TEST_CASE("day counts floor at zero and missing fields contribute zero") {
    const Date ref{2018, 1, 31};
    WhoisRecord rec;
    rec.created = Date{2020, 5, 5};    // future creation from dirty data
    rec.expiration = Date{2017, 1, 1}; // already expired

    WhoisFeatures f = extract_whois_features(&rec, ref);
    CHECK(f.values[2] == 0.0);
    CHECK(f.values[3] == 0.0); // missing updated
    CHECK(f.values[4] == 0.0);
    CHECK(f.values[5] == 0.0); // missing status
}

TEST_CASE("feature vector assembly layout") {
    GlrtFeatures zero;
    WhoisFeatures whois;
    std::vector<double> tld(TldEncoder::kDim, 0.0);

    FeatureVector v = assemble(zero, zero, tld, whois);
    REQUIRE(v.size() == kFeatureDim);
    for (double x : v) CHECK(x == 0.0);

    // sentinels land at the documented offsets
    GlrtFeatures sub;
    sub.present = true;
    sub.loglik_nondga = -1.5;
    sub.loglik_dga = -2.5;
    sub.post_nondga = 0.25;
    sub.post_dga = 0.75;
    sub.log_ratio = -1.0;
    GlrtFeatures dom = sub;
    dom.loglik_nondga = -9.0;
    tld[7] = 1.0;
    whois.values[0] = 1.0;
    whois.values[11] = 42.0;

    v = assemble(sub, dom, tld, whois);
    CHECK(v[kSubGlrtOffset] == 1.0);
    CHECK(v[kSubGlrtOffset + 1] == -1.5);
    CHECK(v[kDomGlrtOffset + 1] == -9.0);
    CHECK(v[kTldOffset + 7] == 1.0);
    CHECK(v[kWhoisOffset] == 1.0);
    CHECK(v[kWhoisOffset + 11] == 42.0);

    // slicing recovers the blocks
    auto sub_arr = sub.as_array();
    auto dom_arr = dom.as_array();
    for (std::size_t i = 0; i < GlrtFeatures::kDim; ++i) {
        CHECK(v[kSubGlrtOffset + i] == sub_arr[i]);
        CHECK(v[kDomGlrtOffset + i] == dom_arr[i]);
    }
    for (std::size_t i = 0; i < TldEncoder::kDim; ++i)
        CHECK(v[kTldOffset + i] == tld[i]);
    for (std::size_t i = 0; i < WhoisFeatures::kDim; ++i)
        CHECK(v[kWhoisOffset + i] == whois.values[i]);

    std::vector<double> short_tld(5, 0.0);
    CHECK_THROWS_AS(assemble(sub, dom, short_tld, whois), std::invalid_argument);
}
