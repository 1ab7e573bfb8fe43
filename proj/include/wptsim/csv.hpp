#ifndef WPTSIM_CSV_HPP
#define WPTSIM_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wptsim::csv {

// Minimal CSV support for the simulator's simple comma-separated files:
// UTF-8, '.' decimal separator, LF line endings, no quoting. `#` starts a
// comment line; comment lines before the header may carry `key=value`
// metadata.

std::vector<std::string> split_fields(std::string_view line);

/// Strict double parse of a whole field; throws ParseError with `line_no`.
double parse_double(std::string_view field, std::size_t line_no);

/// Strict non-negative integer parse; throws ParseError with `line_no`.
long long parse_int(std::string_view field, std::size_t line_no);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    /// `key=value` pairs harvested from `#` comment lines.
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// Reads a numeric CSV table. `expected_header` is matched exactly (after
/// trimming) when non-empty; every data row must have exactly as many fields
/// as the header.
Table read_table(std::istream& in, const std::vector<std::string>& expected_header);

std::string trim(std::string_view s);

}  // namespace wptsim::csv

#endif
