#ifndef WPTSIM_HARVESTER_HPP
#define WPTSIM_HARVESTER_HPP

#include <iosfwd>
#include <variant>
#include <vector>

#include "wptsim/excitation.hpp"

namespace wptsim {

/// Measured RF-in to DC-out operating points, strictly increasing in RF power.
/// Between knots the curve is interpolated linearly in log-log space: rectifier
/// curves are smooth in the dB domain and linear-in-watts interpolation would
/// distort the low-power region.
class EfficiencyCurve {
  public:
    struct Point {
        double p_rf_w;
        double p_dc_w;
    };

    explicit EfficiencyCurve(std::vector<Point> points);

    /// Measured mean operating points of the reference harvester under
    /// single-tone excitation, one point per transmitter gain setting.
    static const EfficiencyCurve& testbed_single_tone();
    /// Same harvester driven by the 84-carrier multi-tone excitation.
    static const EfficiencyCurve& testbed_multi_tone();

    /// Loads a curve from CSV with header `p_rf_w,p_dc_w`.
    static EfficiencyCurve from_csv(std::istream& in);

    /// 0 below the first knot, exact at knots, log-log interpolation between
    /// them, constant efficiency above the last knot.
    double dc_output_w(double p_rf_w) const;

    const std::vector<Point>& points() const { return points_; }

  private:
    std::vector<Point> points_;
};

/// Threshold-plus-saturation memoryless nonlinearity: no output below
/// `sensitivity_w`, efficiency ramping smoothly up to `peak_efficiency`, and
/// constant DC output above `saturation_w`. Unlike the measured curves this
/// mode lets waveform differences emerge from envelope statistics alone.
struct ParametricHarvester {
    double sensitivity_w = 1e-6;
    double peak_efficiency = 0.5;
    double saturation_w = 10e-6;
};

struct HarvesterModel {
    std::variant<ParametricHarvester, EfficiencyCurve> mode;
    double v_max_v = 2.0;                  // charge-pump output clamp
    double averaging_window_s = 1e-3;      // energy-profiler control loop period
    double load_resistance_ohm = 324e3;    // equivalent regulated load at the 1.8 V target

    static HarvesterModel measured(EfficiencyCurve curve);
    static HarvesterModel parametric(double sensitivity_w, double peak_efficiency,
                                     double saturation_w);
    void validate() const;
};

/// Harvested DC power and harvester output voltage on the device time base.
struct HarvestTrace {
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;
    std::vector<double> p_eh_w;
    std::vector<double> v_eh_v;

    std::size_t size() const { return p_eh_w.size(); }
    double mean_dc_w() const;
};

/// Memoryless RF to DC conversion at one power level.
double rf_to_dc(const HarvesterModel& model, double p_rf_w);

/// Quasi-static output voltage against the equivalent load, clamped at v_max.
double harvester_voltage(const HarvesterModel& model, double p_dc_w, double load_resistance_ohm);

/// Applies rf_to_dc sample-by-sample at the envelope rate, then averages the
/// DC power over `averaging_window_s` onto the device time base (a trailing
/// partial window is averaged over its actual sample count). The harvester
/// must see the sub-beat envelope structure before averaging; that is the
/// whole mechanism by which waveform choice matters.
HarvestTrace harvest_envelope(const HarvesterModel& model, const PowerEnvelope& env);

}  // namespace wptsim

#endif
