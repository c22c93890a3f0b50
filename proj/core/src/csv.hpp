#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace flakelex::detail {

// Minimal RFC 4180 reader: comma-separated, double-quote quoting, quoted
// fields may contain commas, newlines and doubled quotes. Accepts both \n
// and \r\n line endings.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads one record; returns std::nullopt at end of input. `line` receives
    // the 1-based line number the record started on.
    std::optional<std::vector<std::string>> next(std::size_t& line);

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::string csv_quote(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace flakelex::detail
