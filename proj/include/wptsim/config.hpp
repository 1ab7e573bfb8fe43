#ifndef WPTSIM_CONFIG_HPP
#define WPTSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wptsim/array_channel.hpp"
#include "wptsim/end_device.hpp"
#include "wptsim/excitation.hpp"
#include "wptsim/harvester.hpp"
#include "wptsim/quantities.hpp"

namespace wptsim {

enum class McuMode { realistic, ideal };

const char* mcu_mode_name(McuMode m);
McuMode parse_mcu_mode(std::string_view name);

/// Harvester choice for a campaign. `measured` replays the per-waveform
/// testbed curves (single-tone cells use the single-tone curve and so on);
/// `parametric` applies one threshold/saturation nonlinearity to every cell so
/// waveform differences emerge from envelope statistics; `custom` applies one
/// CSV-loaded curve to every cell.
struct HarvesterSelection {
    enum class Kind { measured, parametric, custom };
    Kind kind = Kind::measured;
    ParametricHarvester parametric{1e-6, 0.5, 10e-6};
    std::optional<EfficiencyCurve> custom_curve;

    HarvesterModel model_for(Strategy strategy, double load_resistance_ohm,
                             double averaging_window_s) const;
};

struct CampaignConfig {
    // array and channel
    ArrayGeometry geometry = ArrayGeometry::ceiling_grid();
    Vec3 device_position{2.5, 1.2, 0.0};
    FadingConfig fading;

    // excitation
    std::vector<Strategy> strategies{Strategy::single_tone, Strategy::multi_tone};
    std::vector<double> gains_db;  // default 75..85 in 1 dB steps
    double duration_s = 1800.0;
    double envelope_rate_hz = 100e3;
    double single_tone_dwell_s = 5.0;
    double multi_tone_spacing_hz = 100.0;
    GainCalibration calibration = GainCalibration::default_table();

    // harvester
    HarvesterSelection harvester;
    double load_resistance_ohm = 324e3;
    double averaging_window_s = 1e-3;

    // end device and Monte-Carlo
    EndDeviceConfig device;
    std::vector<McuMode> mcu_modes{McuMode::realistic, McuMode::ideal};
    std::size_t n_trials = 50;
    std::uint64_t seed = 1;

    CampaignConfig();
    void validate() const;

    /// Applies one `key = value` override (same keys as the config file).
    void set(const std::string& key, const std::string& value, const std::string& base_dir = ".");
};

/// Loads a campaign configuration from the key = value text format described
/// in the README. Relative file references resolve against the config file's
/// directory. Unknown keys are rejected.
CampaignConfig load_campaign_config(const std::string& path);

/// Parses configuration text; `base_dir` anchors relative file references.
CampaignConfig parse_campaign_config(std::istream& in, const std::string& base_dir);

}  // namespace wptsim

#endif
