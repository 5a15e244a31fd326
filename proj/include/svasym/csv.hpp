#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace svasym::csv {

/// 12 significant digits, '.' decimal, locale independent. Non-finite
/// values print as inf, -inf or nan.
std::string num(double x);

/// Quotes a field when it contains a comma, quote or newline.
std::string field(const std::string& s);

/// In-memory table with a header row.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row);
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    /// Optional trailing comment lines, written as "# text".
    void footer(const std::string& line) { footer_.push_back(line); }

    void write(std::ostream& os) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> footer_;
};

/// Splits a CSV document (no embedded newlines in fields) into rows,
/// skipping lines starting with '#'.
std::vector<std::vector<std::string>> parse(const std::string& text);

}  // namespace svasym::csv
