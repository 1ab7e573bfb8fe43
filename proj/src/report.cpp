#include "wptsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wptsim/csv.hpp"
#include "wptsim/errors.hpp"

namespace wptsim {

namespace {

using nlohmann::json;

/// Shortest decimal form that parses back to the same double.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "-"; }

std::optional<double> parse_opt(const std::string& field, std::size_t line_no) {
    if (field == "-") return std::nullopt;
    return csv::parse_double(field, line_no);
}

constexpr const char* kCsvHeader =
    "strategy,gain_db,per_antenna_dbm,total_dbm,mean_rf_w,mean_dc_w,harvester_efficiency,"
    "overall_efficiency_ppm,feasibility_pct,mcu_mode,n_trials,n_censored,p50_s,p95_s,p98_s";

std::string emit_csv(const SweepReport& report) {
    std::string out;
    out += "# n_antennas=" + std::to_string(report.n_antennas) + "\n";
    out += "# duration_s=" + fmt(report.duration_s) + "\n";
    out += "# n_trials=" + std::to_string(report.n_trials) + "\n";
    out += "# seed=" + std::to_string(report.seed) + "\n";
    out += kCsvHeader;
    out += "\n";
    for (const auto& cell : report.cells) {
        for (const auto& [mode, stats] : cell.response) {
            out += strategy_name(cell.strategy);
            out += ',';
            out += fmt(cell.gain_db) + ',';
            out += fmt_opt(cell.per_antenna_dbm) + ',';
            out += fmt_opt(cell.total_dbm) + ',';
            out += fmt_opt(cell.mean_rf_w) + ',';
            out += fmt(cell.mean_dc_w) + ',';
            out += fmt_opt(cell.harvester_efficiency) + ',';
            out += fmt_opt(cell.overall_efficiency_ppm) + ',';
            out += fmt(cell.feasibility_pct) + ',';
            out += mcu_mode_name(mode);
            out += ',';
            out += std::to_string(stats.n_trials) + ',';
            out += std::to_string(stats.n_censored) + ',';
            out += fmt_opt(stats.p50_s) + ',';
            out += fmt_opt(stats.p95_s) + ',';
            out += fmt_opt(stats.p98_s) + '\n';
        }
    }
    return out;
}

SweepReport parse_csv(const std::string& bytes) {
    std::istringstream in(bytes);
    const auto expected = csv::split_fields(kCsvHeader);

    SweepReport report;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    SweepCell* current = nullptr;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = csv::trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '#') {
            const auto eq = stripped.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = csv::trim(std::string_view(stripped).substr(1, eq - 1));
            const std::string value = csv::trim(std::string_view(stripped).substr(eq + 1));
            if (key == "n_antennas")
                report.n_antennas = static_cast<std::size_t>(csv::parse_int(value, line_no));
            else if (key == "duration_s")
                report.duration_s = csv::parse_double(value, line_no);
            else if (key == "n_trials")
                report.n_trials = static_cast<std::size_t>(csv::parse_int(value, line_no));
            else if (key == "seed")
                report.seed = static_cast<std::uint64_t>(csv::parse_int(value, line_no));
            continue;
        }
        auto fields = csv::split_fields(stripped);
        if (!have_header) {
            if (fields != expected) throw ParseError("report CSV: unexpected header", line_no);
            have_header = true;
            continue;
        }
        if (fields.size() != expected.size())
            throw ParseError("report CSV: wrong field count", line_no);

        const Strategy strategy = parse_strategy(fields[0]);
        const double gain_db = csv::parse_double(fields[1], line_no);
        if (!current || current->strategy != strategy || current->gain_db != gain_db) {
            SweepCell cell;
            cell.strategy = strategy;
            cell.gain_db = gain_db;
            cell.per_antenna_dbm = parse_opt(fields[2], line_no);
            cell.total_dbm = parse_opt(fields[3], line_no);
            cell.mean_rf_w = parse_opt(fields[4], line_no);
            cell.mean_dc_w = csv::parse_double(fields[5], line_no);
            cell.harvester_efficiency = parse_opt(fields[6], line_no);
            cell.overall_efficiency_ppm = parse_opt(fields[7], line_no);
            cell.feasibility_pct = csv::parse_double(fields[8], line_no);
            report.cells.push_back(std::move(cell));
            current = &report.cells.back();
        }
        ResponseStats stats;
        stats.n_trials = static_cast<std::size_t>(csv::parse_int(fields[10], line_no));
        stats.n_censored = static_cast<std::size_t>(csv::parse_int(fields[11], line_no));
        stats.p50_s = parse_opt(fields[12], line_no);
        stats.p95_s = parse_opt(fields[13], line_no);
        stats.p98_s = parse_opt(fields[14], line_no);
        current->response.emplace_back(parse_mcu_mode(fields[9]), std::move(stats));
    }
    if (!have_header) throw ParseError("report CSV: missing header", line_no);
    return report;
}

json stats_to_json(const ResponseStats& stats) {
    json j;
    j["n_trials"] = stats.n_trials;
    j["n_censored"] = stats.n_censored;
    j["p50_s"] = stats.p50_s ? json(*stats.p50_s) : json(nullptr);
    j["p95_s"] = stats.p95_s ? json(*stats.p95_s) : json(nullptr);
    j["p98_s"] = stats.p98_s ? json(*stats.p98_s) : json(nullptr);
    json trials = json::array();
    for (const auto& t : stats.trials) trials.push_back({t.time_s, t.censored});
    j["trials"] = std::move(trials);
    json cdf = json::array();
    for (const auto& p : stats.cdf) cdf.push_back({p.t_s, p.fraction});
    j["cdf"] = std::move(cdf);
    return j;
}

ResponseStats stats_from_json(const json& j) {
    ResponseStats stats;
    stats.n_trials = j.at("n_trials").get<std::size_t>();
    stats.n_censored = j.at("n_censored").get<std::size_t>();
    if (!j.at("p50_s").is_null()) stats.p50_s = j.at("p50_s").get<double>();
    if (!j.at("p95_s").is_null()) stats.p95_s = j.at("p95_s").get<double>();
    if (!j.at("p98_s").is_null()) stats.p98_s = j.at("p98_s").get<double>();
    for (const auto& t : j.at("trials")) stats.trials.push_back({t.at(0).get<double>(), t.at(1).get<bool>()});
    for (const auto& p : j.at("cdf")) stats.cdf.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return stats;
}

std::string emit_json(const SweepReport& report) {
    json j;
    j["n_antennas"] = report.n_antennas;
    j["duration_s"] = report.duration_s;
    j["n_trials"] = report.n_trials;
    j["seed"] = report.seed;
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c;
        c["strategy"] = strategy_name(cell.strategy);
        c["gain_db"] = cell.gain_db;
        c["per_antenna_dbm"] = cell.per_antenna_dbm ? json(*cell.per_antenna_dbm) : json(nullptr);
        c["total_dbm"] = cell.total_dbm ? json(*cell.total_dbm) : json(nullptr);
        c["mean_rf_w"] = cell.mean_rf_w ? json(*cell.mean_rf_w) : json(nullptr);
        c["mean_dc_w"] = cell.mean_dc_w;
        c["harvester_efficiency"] =
            cell.harvester_efficiency ? json(*cell.harvester_efficiency) : json(nullptr);
        c["overall_efficiency_ppm"] =
            cell.overall_efficiency_ppm ? json(*cell.overall_efficiency_ppm) : json(nullptr);
        c["feasibility_pct"] = cell.feasibility_pct;
        json response = json::array();
        for (const auto& [mode, stats] : cell.response) {
            json r = stats_to_json(stats);
            r["mcu_mode"] = mcu_mode_name(mode);
            response.push_back(std::move(r));
        }
        c["response"] = std::move(response);
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

SweepReport parse_json_report(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
    try {
        SweepReport report;
        report.n_antennas = j.at("n_antennas").get<std::size_t>();
        report.duration_s = j.at("duration_s").get<double>();
        report.n_trials = j.at("n_trials").get<std::size_t>();
        report.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& c : j.at("cells")) {
            SweepCell cell;
            cell.strategy = parse_strategy(c.at("strategy").get<std::string>());
            cell.gain_db = c.at("gain_db").get<double>();
            if (!c.at("per_antenna_dbm").is_null())
                cell.per_antenna_dbm = c.at("per_antenna_dbm").get<double>();
            if (!c.at("total_dbm").is_null()) cell.total_dbm = c.at("total_dbm").get<double>();
            if (!c.at("mean_rf_w").is_null()) cell.mean_rf_w = c.at("mean_rf_w").get<double>();
            cell.mean_dc_w = c.at("mean_dc_w").get<double>();
            if (!c.at("harvester_efficiency").is_null())
                cell.harvester_efficiency = c.at("harvester_efficiency").get<double>();
            if (!c.at("overall_efficiency_ppm").is_null())
                cell.overall_efficiency_ppm = c.at("overall_efficiency_ppm").get<double>();
            cell.feasibility_pct = c.at("feasibility_pct").get<double>();
            for (const auto& r : c.at("response")) {
                cell.response.emplace_back(parse_mcu_mode(r.at("mcu_mode").get<std::string>()),
                                           stats_from_json(r));
            }
            report.cells.push_back(std::move(cell));
        }
        return report;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
}

void append_padded(std::string& out, const std::string& s, std::size_t width) {
    out += s;
    for (std::size_t i = s.size(); i < width + 2; ++i) out += ' ';
}

std::string fmt_fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string fmt_fixed_opt(const std::optional<double>& v, int decimals) {
    return v ? fmt_fixed(*v, decimals) : "-";
}

std::string emit_table(const SweepReport& report) {
    // pivot cells by gain (rows) and strategy (column groups)
    std::vector<double> gains;
    std::vector<Strategy> strategies;
    for (const auto& cell : report.cells) {
        if (std::find(gains.begin(), gains.end(), cell.gain_db) == gains.end())
            gains.push_back(cell.gain_db);
        if (std::find(strategies.begin(), strategies.end(), cell.strategy) == strategies.end())
            strategies.push_back(cell.strategy);
    }
    const auto find_cell = [&](Strategy s, double g) -> const SweepCell* {
        for (const auto& cell : report.cells) {
            if (cell.strategy == s && cell.gain_db == g) return &cell;
        }
        return nullptr;
    };

    std::string out;
    out += "Overall efficiency and target-voltage feasibility (" +
           std::to_string(report.n_antennas) + " antennas)\n";
    std::string head;
    append_padded(head, "gain[dB]", 8);
    append_padded(head, "p_ant[dBm]", 10);
    append_padded(head, "total[dBm]", 10);
    for (Strategy s : strategies) {
        append_padded(head, std::string(strategy_name(s)) + ":eff[ppm]", 14);
        append_padded(head, std::string(strategy_name(s)) + ":V_B>V_th[%]", 16);
    }
    out += head + "\n";
    for (double g : gains) {
        std::string row;
        const SweepCell* any = nullptr;
        for (Strategy s : strategies) {
            if (const SweepCell* c = find_cell(s, g)) {
                any = c;
                break;
            }
        }
        append_padded(row, fmt(g), 8);
        append_padded(row, any ? fmt_fixed_opt(any->per_antenna_dbm, 2) : "-", 10);
        append_padded(row, any ? fmt_fixed_opt(any->total_dbm, 2) : "-", 10);
        for (Strategy s : strategies) {
            const SweepCell* c = find_cell(s, g);
            append_padded(row, c ? fmt_fixed_opt(c->overall_efficiency_ppm, 1) : "-", 14);
            append_padded(row, c ? fmt_fixed(c->feasibility_pct, 2) : "-", 16);
        }
        out += row + "\n";
    }

    out += "\nResponse time percentiles [s] (" + std::to_string(report.n_trials) +
           " trials; - exceeds measurement time)\n";
    std::vector<McuMode> modes;
    for (const auto& cell : report.cells) {
        for (const auto& [mode, stats] : cell.response) {
            if (std::find(modes.begin(), modes.end(), mode) == modes.end()) modes.push_back(mode);
        }
    }
    std::string head2;
    append_padded(head2, "total[dBm]", 10);
    for (Strategy s : strategies) {
        for (McuMode m : modes) {
            const std::string tag = std::string(strategy_name(s)) + "/" + mcu_mode_name(m);
            append_padded(head2, tag + ":P50", 16);
            append_padded(head2, tag + ":P95", 16);
            append_padded(head2, tag + ":P98", 16);
        }
    }
    out += head2 + "\n";
    for (double g : gains) {
        std::string row;
        const SweepCell* any = nullptr;
        for (Strategy s : strategies) {
            if (const SweepCell* c = find_cell(s, g)) {
                any = c;
                break;
            }
        }
        append_padded(row, any && any->total_dbm ? fmt_fixed(*any->total_dbm, 2) : fmt(g), 10);
        for (Strategy s : strategies) {
            const SweepCell* c = find_cell(s, g);
            for (McuMode m : modes) {
                const ResponseStats* stats = nullptr;
                if (c) {
                    for (const auto& [mode, st] : c->response) {
                        if (mode == m) stats = &st;
                    }
                }
                append_padded(row, stats ? fmt_fixed_opt(stats->p50_s, 1) : "-", 16);
                append_padded(row, stats ? fmt_fixed_opt(stats->p95_s, 1) : "-", 16);
                append_padded(row, stats ? fmt_fixed_opt(stats->p98_s, 1) : "-", 16);
            }
        }
        out += row + "\n";
    }
    return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    if (name == "table") return ReportFormat::table_text;
    throw InvalidArgument("unknown report format '" + std::string(name) +
                          "', expected csv|json|table");
}

std::string emit_report(const SweepReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::csv:
            return emit_csv(report);
        case ReportFormat::json:
            return emit_json(report);
        case ReportFormat::table_text:
            return emit_table(report);
    }
    throw InvalidArgument("unknown report format");
}

SweepReport parse_report(const std::string& bytes, ReportFormat format) {
    switch (format) {
        case ReportFormat::csv:
            return parse_csv(bytes);
        case ReportFormat::json:
            return parse_json_report(bytes);
        case ReportFormat::table_text:
            throw InvalidArgument("table format is write-only");
    }
    throw InvalidArgument("unknown report format");
}

void save_report_files(const SweepReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());

    const auto write_file = [&](const std::string& name, const std::string& bytes) {
        const fs::path path = fs::path(dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << bytes;
    };
    write_file("report.csv", emit_report(report, ReportFormat::csv));
    write_file("report.json", emit_report(report, ReportFormat::json));
    for (const auto& cell : report.cells) {
        for (const auto& [mode, stats] : cell.response) {
            std::string bytes = "t_s,cdf\n";
            for (const auto& p : stats.cdf) bytes += fmt(p.t_s) + "," + fmt(p.fraction) + "\n";
            write_file(std::string("cdf_") + strategy_name(cell.strategy) + "_" +
                           fmt(cell.gain_db) + "_" + mcu_mode_name(mode) + ".csv",
                       bytes);
        }
    }
}

SweepReport load_report_dir(const std::string& dir) {
    const auto path = std::filesystem::path(dir) / "report.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_report(buf.str(), ReportFormat::json);
}

}  // namespace wptsim
