#include "slowbeam/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "slowbeam/errors.hpp"

namespace slowbeam {

void SeriesTable::validate() const {
    if (columns.empty()) throw std::invalid_argument("table '" + name + "': no columns");
    if (!label_column.empty() && labels.size() != rows.size())
        throw std::invalid_argument("table '" + name + "': need one label per row");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns.size())
            throw std::invalid_argument("table '" + name + "': row " + std::to_string(r) +
                                        " is not rectangular");
        for (double v : rows[r])
            if (!std::isfinite(v))
                throw std::invalid_argument("table '" + name + "': non-finite entry in row " +
                                            std::to_string(r));
    }
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const SeriesTable& table) {
    table.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    bool labelled = !table.label_column.empty();
    if (labelled) out << table.label_column << ',';
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (labelled) out << table.labels[r] << ',';
        for (std::size_t c = 0; c < table.rows[r].size(); ++c)
            out << (c ? "," : "") << format_full(table.rows[r][c]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

namespace {

bool parse_cell(const std::string& cell, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(cell, &used);
        return used == cell.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

SeriesTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(ConfigError::Kind::MissingFile, "cannot open " + path.string());
    SeriesTable t;
    t.name = path.stem().string();
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    ++line_no;
    auto header = split(line);
    bool labelled = false;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " cells");
        if (first_row) {
            // a non-numeric first cell marks a leading label column
            double probe = 0.0;
            labelled = !parse_cell(cells[0], probe);
            if (labelled) {
                t.label_column = header[0];
                t.columns.assign(header.begin() + 1, header.end());
            } else {
                t.columns = header;
            }
            first_row = false;
        }
        std::vector<double> row;
        std::size_t start = labelled ? 1 : 0;
        if (labelled) t.labels.push_back(cells[0]);
        row.reserve(cells.size() - start);
        for (std::size_t c = start; c < cells.size(); ++c) {
            double v = 0.0;
            if (!parse_cell(cells[c], v))
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": not a number: '" + cells[c] + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (first_row) t.columns = header;  // header-only file
    return t;
}

void expect_columns(const SeriesTable& t, const std::vector<std::string>& expected) {
    if (t.columns != expected) {
        std::ostringstream msg;
        msg << "table '" << t.name << "': expected header ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? "," : "") << expected[i];
        msg << " but got ";
        for (std::size_t i = 0; i < t.columns.size(); ++i) msg << (i ? "," : "") << t.columns[i];
        throw std::runtime_error(msg.str());
    }
}

}  // namespace slowbeam
