#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Rectangular tables of finite reals, written as CSV with full-precision
// scientific notation ("%.17g"), so re-reading is bit-exact.

namespace slowbeam {

struct SeriesTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // optional leading text column (e.g. molecule names); when set, labels
    // must have one entry per row and label_column is written first
    std::string label_column;
    std::vector<std::string> labels;

    void validate() const;  // rectangular + finite; throws std::invalid_argument
    std::size_t n_rows() const { return rows.size(); }
};

std::string format_full(double v);  // %.17g

void write_csv(const std::filesystem::path& path, const SeriesTable& table);

// Strict parse: header + uniform numeric rows; errors carry the line number.
SeriesTable read_csv(const std::filesystem::path& path);

// Throws when the header does not match exactly.
void expect_columns(const SeriesTable& t, const std::vector<std::string>& expected);

}  // namespace slowbeam
