#include "dga/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include "dga/domain_parse.hpp"

namespace dga {

std::vector<std::string> Dataset::dga_families() const {
    std::set<std::string> names;
    for (const auto& r : rows)
        if (r.is_dga) names.insert(r.family);
    return {names.begin(), names.end()};
}

bool Dataset::has_dga_family(const std::string& family) const {
    return std::any_of(rows.begin(), rows.end(), [&](const DatasetRow& r) {
        return r.is_dga && r.family == family;
    });
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset: " + path);
    return parse_dataset(in, path);
}

Dataset parse_dataset(std::istream& in, const std::string& source_name) {
    Dataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        auto fail = [&](const std::string& why) -> ParseError {
            return ParseError(source_name + " line " + std::to_string(line_no) +
                              ": " + why);
        };

        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                     : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            line.find('\t', tab2 + 1) != std::string::npos)
            throw fail("expected domain<TAB>label<TAB>family");

        DatasetRow row;
        try {
            row.domain = normalize_domain(line.substr(0, tab1));
        } catch (const ParseError& e) {
            throw fail(e.what());
        }
        std::string label = line.substr(tab1 + 1, tab2 - tab1 - 1);
        row.family = line.substr(tab2 + 1);
        if (label == "dga") {
            row.is_dga = true;
        } else if (label == "clean") {
            row.is_dga = false;
        } else {
            throw fail("label must be 'dga' or 'clean', got '" + label + "'");
        }
        if (row.family.empty()) throw fail("empty family");
        if (!row.is_dga && row.family != "clean")
            throw fail("clean rows must use family 'clean'");
        if (row.is_dga && row.family == "clean")
            throw fail("dga rows must not use family 'clean'");

        ds.rows.push_back(std::move(row));
    }
    return ds;
}

} // namespace dga
