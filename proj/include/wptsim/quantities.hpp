#ifndef WPTSIM_QUANTITIES_HPP
#define WPTSIM_QUANTITIES_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace wptsim {

double dbm_to_watt(double p_dbm);
double watt_to_dbm(double p_watt);

/// Total radiated power of n identical sources: p_dbm + 10*log10(n).
/// Throws InvalidArgument for n == 0.
double combine_equal_sources(double p_per_antenna_dbm, std::size_t n_antennas);

/// Power stored linearly in watts; dBm is a derived view only, so sums of
/// powers never accumulate conversion error.
class PowerQuantity {
  public:
    PowerQuantity() = default;
    static PowerQuantity from_watt(double w);
    static PowerQuantity from_dbm(double dbm) { return from_watt(dbm_to_watt(dbm)); }

    double watt() const { return watt_; }
    double dbm() const { return watt_to_dbm(watt_); }

    PowerQuantity& operator+=(PowerQuantity other) {
        watt_ += other.watt_;
        return *this;
    }
    friend PowerQuantity operator+(PowerQuantity a, PowerQuantity b) { return a += b; }
    friend auto operator<=>(PowerQuantity, PowerQuantity) = default;

  private:
    double watt_ = 0.0;
};

class VoltageQuantity {
  public:
    VoltageQuantity() = default;
    static VoltageQuantity from_volt(double v);
    double volt() const { return volt_; }
    friend auto operator<=>(VoltageQuantity, VoltageQuantity) = default;

  private:
    double volt_ = 0.0;
};

/// Transmitter gain-setting to per-antenna radiated power lookup.
/// Gains must be strictly increasing; queries between entries interpolate
/// linearly in the dB domain, queries outside the table throw OutOfRange.
class GainCalibration {
  public:
    struct Entry {
        double gain_db;
        double p_dbm;
    };

    explicit GainCalibration(std::vector<Entry> entries);

    /// Bench calibration of the 84-antenna testbed transmitters: gain settings
    /// 75..85 dB in 1 dB steps against measured per-antenna output power.
    static const GainCalibration& default_table();

    /// Loads a table from CSV with header `gain_db,p_dbm`.
    static GainCalibration from_csv(std::istream& in);

    double to_power_dbm(double gain_db) const;
    const std::vector<Entry>& entries() const { return entries_; }
    double min_gain_db() const { return entries_.front().gain_db; }
    double max_gain_db() const { return entries_.back().gain_db; }

  private:
    std::vector<Entry> entries_;
};

}  // namespace wptsim

#endif
