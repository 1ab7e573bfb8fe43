#ifndef WPTSIM_REPORT_HPP
#define WPTSIM_REPORT_HPP

#include <string>

#include "wptsim/campaign.hpp"

namespace wptsim {

enum class ReportFormat { csv, json, table_text };

ReportFormat parse_report_format(std::string_view name);

/// Serializes a sweep report. Column order is stable and numbers are printed
/// in shortest round-trip form, so identical reports emit identical bytes.
/// The CSV carries one row per (cell, MCU mode) with "-" for values that do
/// not exist (censored percentiles, RF-side fields of a trace replay); JSON
/// additionally carries the per-trial outcomes and CDF points. The text table
/// mirrors the efficiency/feasibility and response-time summary layout.
std::string emit_report(const SweepReport& report, ReportFormat format);

/// Inverse of emit_report for csv and json. CSV restores the summary fields
/// only (trial lists and CDFs live in the JSON form).
SweepReport parse_report(const std::string& bytes, ReportFormat format);

/// Writes report.csv, report.json and one cdf_<strategy>_<gain>_<mode>.csv per
/// response-statistics entry into `dir` (created if needed).
void save_report_files(const SweepReport& report, const std::string& dir);

/// Loads a report previously written by save_report_files.
SweepReport load_report_dir(const std::string& dir);

}  // namespace wptsim

#endif
