#include "lassodf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lassodf {
namespace io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_number(const std::string& cell, int line_no) {
    try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw CsvParse("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name) return static_cast<int>(j);
    }
    throw CsvParse("missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvParse("cannot open " + path);

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw CsvParse("empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.header = split_line(line);
    const size_t cols = table.header.size();
    if (cols == 0) throw CsvParse("empty header in " + path);

    std::vector<double> data;
    int rows = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != cols) {
            throw CsvParse("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(cols) + " cells, got " +
                           std::to_string(cells.size()));
        }
        for (const auto& c : cells) data.push_back(parse_number(c, line_no));
        ++rows;
    }
    table.values.resize(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) table.values(i, j) = data[i * cols + j];
    }
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values) {
    std::ofstream out(path);
    if (!out) throw CsvParse("cannot write " + path);
    for (size_t j = 0; j < header.size(); ++j) {
        out << header[j] << (j + 1 < header.size() ? "," : "\n");
    }
    for (int i = 0; i < values.rows(); ++i) {
        for (int j = 0; j < values.cols(); ++j) {
            out << format_double(values(i, j)) << (j + 1 < values.cols() ? "," : "\n");
        }
    }
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

GroupStructure read_group_file(const std::string& path, int p) {
    std::ifstream in(path);
    if (!in) throw CsvParse("cannot open " + path);
    std::vector<int> assignment(p, -1);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != 2) {
            throw CsvParse("group file line " + std::to_string(line_no) +
                           ": expected 'variable_index,group_index'");
        }
        const int var = static_cast<int>(parse_number(cells[0], line_no));
        const int grp = static_cast<int>(parse_number(cells[1], line_no));
        if (var < 0 || var >= p) {
            throw CsvParse("group file line " + std::to_string(line_no) +
                           ": variable index out of range");
        }
        assignment[var] = grp;
    }
    for (int j = 0; j < p; ++j) {
        if (assignment[j] < 0) {
            throw CsvParse("variable " + std::to_string(j) + " has no group");
        }
    }
    return GroupStructure::from_assignment(std::move(assignment));
}

}  // namespace io
}  // namespace lassodf
