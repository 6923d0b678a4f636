#pragma once

#include <string>
#include <vector>

namespace jcs {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Nine significant digits, '.' decimal point.
std::string format_g9(double v);

// Rectangular numeric table. Rendering writes the meta lines first, each
// prefixed "# ", then the comma-separated header row, then one line per row,
// all with '\n' line ends. Identical tables render to identical bytes.
struct CsvTable {
    std::vector<std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render_csv(const CsvTable& table);

// Single-shot write. A failure removes the partial file before the error
// propagates, so an output path either holds a complete table or nothing.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace jcs
