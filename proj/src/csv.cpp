#include "tvd/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace tvd {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    file_ = f;
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void CsvWriter::field(const std::string& s) {
    auto* f = static_cast<std::FILE*>(file_);
    if (row_started_) std::fputc(',', f);
    std::fwrite(s.data(), 1, s.size(), f);
    row_started_ = true;
}

void CsvWriter::field(double v) { field(format_double(v)); }

void CsvWriter::field(std::size_t v) { field(std::to_string(v)); }

void CsvWriter::end_row() {
    std::fputc('\n', static_cast<std::FILE*>(file_));
    row_started_ = false;
}

}  // namespace tvd
