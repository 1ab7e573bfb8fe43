#include "wptsim/quantities.hpp"

#include <cmath>
#include <istream>

#include "wptsim/csv.hpp"
#include "wptsim/errors.hpp"

namespace wptsim {

double dbm_to_watt(double p_dbm) {
    if (!std::isfinite(p_dbm)) throw InvalidArgument("dbm_to_watt: non-finite input");
    return 1e-3 * std::pow(10.0, p_dbm / 10.0);
}

double watt_to_dbm(double p_watt) {
    if (!std::isfinite(p_watt) || p_watt < 0.0)
        throw InvalidArgument("watt_to_dbm: power must be finite and non-negative");
    return 10.0 * std::log10(p_watt / 1e-3);
}

double combine_equal_sources(double p_per_antenna_dbm, std::size_t n_antennas) {
    if (n_antennas == 0) throw InvalidArgument("combine_equal_sources: need at least one source");
    return p_per_antenna_dbm + 10.0 * std::log10(static_cast<double>(n_antennas));
}

PowerQuantity PowerQuantity::from_watt(double w) {
    if (!std::isfinite(w) || w < 0.0)
        throw InvalidArgument("PowerQuantity: power must be finite and non-negative");
    PowerQuantity p;
    p.watt_ = w;
    return p;
}

VoltageQuantity VoltageQuantity::from_volt(double v) {
    if (!std::isfinite(v)) throw InvalidArgument("VoltageQuantity: voltage must be finite");
    VoltageQuantity q;
    q.volt_ = v;
    return q;
}

GainCalibration::GainCalibration(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidArgument("GainCalibration: empty table");
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
        if (!(entries_[i].gain_db < entries_[i + 1].gain_db))
            throw InvalidArgument("GainCalibration: gains must be strictly increasing");
    }
}

const GainCalibration& GainCalibration::default_table() {
    static const GainCalibration table{{
        {75.0, 9.1},
        {76.0, 9.96},
        {77.0, 10.82},
        {78.0, 11.68},
        {79.0, 12.54},
        {80.0, 13.4},
        {81.0, 14.2},
        {82.0, 15.0},
        {83.0, 15.8},
        {84.0, 16.6},
        {85.0, 17.4},
    }};
    return table;
}

GainCalibration GainCalibration::from_csv(std::istream& in) {
    const auto table = csv::read_table(in, {"gain_db", "p_dbm"});
    std::vector<Entry> entries;
    entries.reserve(table.rows.size());
    for (const auto& row : table.rows) entries.push_back({row[0], row[1]});
    return GainCalibration(std::move(entries));
}

double GainCalibration::to_power_dbm(double gain_db) const {
    if (gain_db < min_gain_db() || gain_db > max_gain_db())
        throw OutOfRange("gain " + std::to_string(gain_db) + " dB outside calibrated range [" +
                         std::to_string(min_gain_db()) + ", " + std::to_string(max_gain_db()) + "]");
    // exact at listed gains, linear in dB between them
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (gain_db == entries_[i].gain_db) return entries_[i].p_dbm;
    }
    std::size_t hi = 1;
    while (entries_[hi].gain_db < gain_db) ++hi;
    const Entry& a = entries_[hi - 1];
    const Entry& b = entries_[hi];
    const double frac = (gain_db - a.gain_db) / (b.gain_db - a.gain_db);
    return a.p_dbm + frac * (b.p_dbm - a.p_dbm);
}

}  // namespace wptsim
