#include "qc/csv.hpp"

#include <charconv>
#include <cmath>

namespace qc::csv {

std::string format(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw validation_error("cannot open output file: " + path);
}

void Writer::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void Writer::header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void Writer::row(const std::vector<double>& values) {
    if (columns_ != 0 && values.size() != columns_)
        throw validation_error("csv row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void Writer::row_cells(const std::vector<std::string>& cells) {
    if (columns_ != 0 && cells.size() != columns_)
        throw validation_error("csv row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

} // namespace qc::csv
