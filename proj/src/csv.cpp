#include "jcs/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace jcs {

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    std::string s(buf);
    // Guard against a surprise locale swap of the decimal point.
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

std::string render_csv(const CsvTable& table) {
    if (table.columns.empty()) throw std::invalid_argument("table has no columns");
    std::string out;
    for (const std::string& m : table.meta) out += "# " + m + "\n";
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("row width does not match the header");
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_g9(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        std::remove(path.c_str());
        throw std::runtime_error("write to '" + path + "' failed; partial file removed");
    }
}

}  // namespace jcs
