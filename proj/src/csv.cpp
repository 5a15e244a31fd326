#include "svasym/csv.hpp"

#include "svasym/errors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace svasym::csv {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // folds -0 into 0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void Table::add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw DomainError("csv::Table: row width does not match header");
    rows_.push_back(std::move(row));
}

void Table::write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << field(r[i]);
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    for (const auto& f : footer_) os << "# " << f << '\n';
}

std::string Table::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

std::vector<std::vector<std::string>> parse(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        row.push_back(cur);
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace svasym::csv
