#pragma once

// Labeled domain dataset: UTF-8 TSV, one "domain<TAB>label<TAB>family"
// row per line, '#' comments.  label is "dga" or "clean"; clean rows use
// family "clean".

#include <string>
#include <vector>

namespace dga {

struct DatasetRow {
    std::string domain; // normalized
    bool is_dga = false;
    std::string family;
};

struct Dataset {
    std::vector<DatasetRow> rows;

    // sorted distinct DGA family names
    std::vector<std::string> dga_families() const;
    bool has_dga_family(const std::string& family) const;
};

Dataset load_dataset(const std::string& path);
Dataset parse_dataset(std::istream& in, const std::string& source_name);

} // namespace dga
