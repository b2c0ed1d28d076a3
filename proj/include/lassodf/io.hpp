#pragma once

#include <string>
#include <vector>

#include "lassodf/model.hpp"

namespace lassodf {
namespace io {

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;

    int column(const std::string& name) const;  // CsvParse when missing
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values);

// Shortest representation that parses back to the same double.
std::string format_double(double x);

// One line per variable: "variable_index,group_index".
GroupStructure read_group_file(const std::string& path, int p);

}  // namespace io
}  // namespace lassodf
