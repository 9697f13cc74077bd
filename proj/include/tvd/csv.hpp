#ifndef TVD_CSV_HPP
#define TVD_CSV_HPP

#include <string>

namespace tvd {

// Fixed numeric formatting for every emitted file: 17 significant digits,
// enough to round-trip an IEEE double exactly.
std::string format_double(double v);

// Opens for writing, throws std::runtime_error on failure.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void field(const std::string& s);
    void field(double v);
    void field(std::size_t v);
    void end_row();

private:
    void* file_;  // FILE*
    bool row_started_ = false;
};

}  // namespace tvd

#endif
