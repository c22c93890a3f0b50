#include "csv.hpp"

#include "flakelex/error.hpp"

namespace flakelex::detail {

namespace {
constexpr int kEof = std::istream::traits_type::eof();
}

// line_ holds the current 1-based file line; every consumed line break
// (bare \n or \r\n, quoted or not) advances it.
std::optional<std::vector<std::string>> CsvReader::next(std::size_t& line) {
    if (line_ == 0) line_ = 1;
    int c = in_.get();
    // skip blank lines between records
    while (c == '\n' || (c == '\r' && in_.peek() == '\n')) {
        if (c == '\r') in_.get();
        ++line_;
        c = in_.get();
    }
    if (c == kEof) return std::nullopt;

    line = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;

    while (true) {
        if (c == kEof) {
            if (quoted)
                throw Error("line " + std::to_string(line) + ": unterminated quoted field");
            fields.push_back(std::move(field));
            return fields;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    quoted = false;
                }
            } else if (ch == '\n') {
                ++line_;
                field.push_back('\n');
            } else if (ch == '\r' && in_.peek() == '\n') {
                in_.get();
                ++line_;
                field.push_back('\n');  // CRLF inside quotes normalizes to \n
            } else {
                field.push_back(ch);
            }
        } else {
            if (ch == '"' && field.empty()) {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\n') {
                ++line_;
                fields.push_back(std::move(field));
                return fields;
            } else if (ch == '\r' && in_.peek() == '\n') {
                in_.get();
                ++line_;
                fields.push_back(std::move(field));
                return fields;
            } else {
                field.push_back(ch);
            }
        }
        c = in_.get();
    }
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_quote(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace flakelex::detail
