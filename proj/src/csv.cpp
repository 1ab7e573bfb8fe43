#include "wptsim/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <istream>

#include "wptsim/errors.hpp"

namespace wptsim::csv {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view field, std::size_t line_no) {
    const std::string s = trim(field);
    if (s.empty()) throw ParseError("empty numeric field", line_no);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw ParseError("malformed number '" + s + "'", line_no);
    return v;
}

long long parse_int(std::string_view field, std::size_t line_no) {
    const std::string s = trim(field);
    if (s.empty()) throw ParseError("empty integer field", line_no);
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw ParseError("malformed integer '" + s + "'", line_no);
    return v;
}

Table read_table(std::istream& in, const std::vector<std::string>& expected_header) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '#') {
            const auto eq = stripped.find('=');
            if (eq != std::string::npos) {
                std::string key = trim(std::string_view(stripped).substr(1, eq - 1));
                std::string value = trim(std::string_view(stripped).substr(eq + 1));
                if (!key.empty()) table.metadata.emplace_back(std::move(key), std::move(value));
            }
            continue;
        }
        auto fields = split_fields(stripped);
        if (!have_header) {
            if (!expected_header.empty() && fields != expected_header)
                throw ParseError("unexpected header, want '" + [&] {
                                     std::string h;
                                     for (const auto& f : expected_header) {
                                         if (!h.empty()) h += ',';
                                         h += f;
                                     }
                                     return h;
                                 }() + "'",
                                 line_no);
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError("expected " + std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, line_no));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError("file has no header row", line_no);
    return table;
}

}  // namespace wptsim::csv
