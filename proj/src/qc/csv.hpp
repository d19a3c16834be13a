// csv.hpp — deterministic CSV emission (shortest round-trip decimals)
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "qc/common.hpp"

namespace qc::csv {

// Shortest decimal that round-trips to the same double.
std::string format(double x);

class Writer {
public:
    explicit Writer(const std::string& path);

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row_cells(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

} // namespace qc::csv
