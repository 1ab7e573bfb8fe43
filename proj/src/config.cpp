#include "wptsim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wptsim/csv.hpp"
#include "wptsim/errors.hpp"

namespace wptsim {

const char* mcu_mode_name(McuMode m) { return m == McuMode::realistic ? "realistic" : "ideal"; }

McuMode parse_mcu_mode(std::string_view name) {
    if (name == "realistic") return McuMode::realistic;
    if (name == "ideal") return McuMode::ideal;
    throw InvalidArgument("unknown MCU mode '" + std::string(name) + "', expected realistic|ideal");
}

HarvesterModel HarvesterSelection::model_for(Strategy strategy, double load_resistance_ohm,
                                             double averaging_window_s) const {
    HarvesterModel model;
    switch (kind) {
        case Kind::measured:
            model.mode = strategy == Strategy::single_tone ? EfficiencyCurve::testbed_single_tone()
                                                           : EfficiencyCurve::testbed_multi_tone();
            break;
        case Kind::parametric:
            model.mode = parametric;
            break;
        case Kind::custom:
            if (!custom_curve) throw InvalidArgument("harvester: custom curve not loaded");
            model.mode = *custom_curve;
            break;
    }
    model.load_resistance_ohm = load_resistance_ohm;
    model.averaging_window_s = averaging_window_s;
    model.validate();
    return model;
}

CampaignConfig::CampaignConfig() {
    gains_db.reserve(11);
    for (int g = 75; g <= 85; ++g) gains_db.push_back(static_cast<double>(g));
}

void CampaignConfig::validate() const {
    geometry.validate();
    device.validate();
    if (strategies.empty()) throw ValidationError("config: strategy list is empty");
    if (gains_db.empty()) throw ValidationError("config: gain sweep is empty");
    if (!(duration_s > 0.0)) throw ValidationError("config: duration must be positive");
    if (!(envelope_rate_hz > 0.0)) throw ValidationError("config: envelope rate must be positive");
    if (!(single_tone_dwell_s > 0.0)) throw ValidationError("config: dwell must be positive");
    if (!(multi_tone_spacing_hz > 0.0)) throw ValidationError("config: tone spacing must be positive");
    if (!(load_resistance_ohm > 0.0)) throw ValidationError("config: load resistance must be positive");
    if (!(averaging_window_s > 0.0)) throw ValidationError("config: averaging window must be positive");
    if (mcu_modes.empty()) throw ValidationError("config: MCU mode list is empty");
    if (n_trials == 0) throw ValidationError("config: n_trials must be at least 1");
    for (double g : gains_db) {
        if (g < calibration.min_gain_db() || g > calibration.max_gain_db())
            throw ValidationError("config: gain " + std::to_string(g) +
                                  " dB outside the calibration table");
    }
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto piece = comma == std::string::npos ? value.substr(start)
                                                      : value.substr(start, comma - start);
        const auto item = csv::trim(piece);
        if (!item.empty()) items.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::vector<std::string> split_ws(const std::string& value) {
    std::vector<std::string> items;
    std::istringstream ss(value);
    std::string item;
    while (ss >> item) items.push_back(item);
    return items;
}

double parse_num(const std::string& value, const std::string& key) {
    try {
        return csv::parse_double(value, 0);
    } catch (const ParseError&) {
        throw ValidationError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

/// `a:b:step` ranges (inclusive) or plain comma lists.
std::vector<double> parse_gain_list(const std::string& value, const std::string& key) {
    std::vector<double> gains;
    if (value.find(':') != std::string::npos) {
        const auto c1 = value.find(':');
        const auto c2 = value.find(':', c1 + 1);
        const double start = parse_num(csv::trim(value.substr(0, c1)), key);
        const double stop = parse_num(
            csv::trim(c2 == std::string::npos ? value.substr(c1 + 1)
                                              : value.substr(c1 + 1, c2 - c1 - 1)),
            key);
        const double step =
            c2 == std::string::npos ? 1.0 : parse_num(csv::trim(value.substr(c2 + 1)), key);
        if (!(step > 0.0) || stop < start)
            throw ValidationError("config: bad range '" + value + "' for key '" + key + "'");
        for (double g = start; g <= stop + 1e-9; g += step) gains.push_back(g);
    } else {
        for (const auto& item : split_list(value)) gains.push_back(parse_num(item, key));
    }
    return gains;
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    const std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

template <typename Loader>
auto load_file(const std::string& path, Loader&& loader) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return loader(in);
}

}  // namespace

void CampaignConfig::set(const std::string& key, const std::string& value,
                         const std::string& base_dir) {
    if (key == "seed") {
        seed = static_cast<std::uint64_t>(csv::parse_int(value, 0));
    } else if (key == "duration_s") {
        duration_s = parse_num(value, key);
    } else if (key == "envelope_rate_hz") {
        envelope_rate_hz = parse_num(value, key);
    } else if (key == "geometry") {
        if (value != "default") {
            geometry = load_file(resolve_path(value, base_dir), [&](std::istream& in) {
                return ArrayGeometry::from_csv(in, geometry.carrier_frequency_hz);
            });
        }
    } else if (key == "carrier_hz") {
        geometry.carrier_frequency_hz = parse_num(value, key);
    } else if (key == "device_position") {
        const auto parts = split_list(value);
        if (parts.size() != 3)
            throw ValidationError("config: device_position expects 'x, y, z'");
        device_position = {parse_num(parts[0], key), parse_num(parts[1], key),
                           parse_num(parts[2], key)};
    } else if (key == "fading") {
        const auto parts = split_ws(value);
        if (parts.empty()) throw ValidationError("config: fading expects a mode");
        if (parts[0] == "none" && parts.size() == 1) {
            fading.kind = FadingConfig::Kind::none;
        } else if (parts[0] == "rayleigh" && parts.size() == 1) {
            fading.kind = FadingConfig::Kind::rayleigh;
        } else if (parts[0] == "rician" && parts.size() == 2) {
            fading.kind = FadingConfig::Kind::rician;
            fading.rician_k_db = parse_num(parts[1], key);
        } else {
            throw ValidationError("config: fading expects none | rayleigh | rician <k_db>");
        }
    } else if (key == "strategies") {
        strategies.clear();
        for (const auto& item : split_list(value)) strategies.push_back(parse_strategy(item));
    } else if (key == "gains_db") {
        gains_db = parse_gain_list(value, key);
    } else if (key == "gain_calibration") {
        if (value != "default") {
            calibration = load_file(resolve_path(value, base_dir), [](std::istream& in) {
                return GainCalibration::from_csv(in);
            });
        }
    } else if (key == "single_tone_dwell_s") {
        single_tone_dwell_s = parse_num(value, key);
    } else if (key == "multi_tone_spacing_hz") {
        multi_tone_spacing_hz = parse_num(value, key);
    } else if (key == "harvester") {
        const auto parts = split_ws(value);
        if (parts.size() == 1 && parts[0] == "measured") {
            harvester.kind = HarvesterSelection::Kind::measured;
        } else if (parts.size() == 4 && parts[0] == "parametric") {
            harvester.kind = HarvesterSelection::Kind::parametric;
            harvester.parametric = {parse_num(parts[1], key), parse_num(parts[2], key),
                                    parse_num(parts[3], key)};
        } else if (parts.size() == 2 && parts[0] == "csv") {
            harvester.kind = HarvesterSelection::Kind::custom;
            harvester.custom_curve = load_file(resolve_path(parts[1], base_dir),
                                               [](std::istream& in) {
                                                   return EfficiencyCurve::from_csv(in);
                                               });
        } else {
            throw ValidationError(
                "config: harvester expects measured | parametric <sens_w> <peak_eff> <sat_w> | "
                "csv <path>");
        }
    } else if (key == "load_resistance_ohm") {
        load_resistance_ohm = parse_num(value, key);
    } else if (key == "averaging_window_s") {
        averaging_window_s = parse_num(value, key);
    } else if (key == "c_b_f") {
        device.c_b_f = parse_num(value, key);
    } else if (key == "v_mcu_th_v") {
        device.v_mcu_th_v = parse_num(value, key);
    } else if (key == "v_bod_v") {
        device.v_bod_v = parse_num(value, key);
    } else if (key == "pilot_bytes") {
        device.pilot_bytes = static_cast<std::size_t>(csv::parse_int(value, 0));
    } else if (key == "baud_bit_s") {
        device.baud_bit_s = parse_num(value, key);
    } else if (key == "p_active_w") {
        device.p_active_w = parse_num(value, key);
    } else if (key == "mcu_modes") {
        mcu_modes.clear();
        for (const auto& item : split_list(value)) mcu_modes.push_back(parse_mcu_mode(item));
    } else if (key == "n_trials") {
        const long long n = csv::parse_int(value, 0);
        if (n < 1) throw ValidationError("config: n_trials must be at least 1");
        n_trials = static_cast<std::size_t>(n);
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

CampaignConfig parse_campaign_config(std::istream& in, const std::string& base_dir) {
    CampaignConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = csv::trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: expected 'key = value'", line_no);
        const std::string key = csv::trim(std::string_view(stripped).substr(0, eq));
        const std::string value = csv::trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) throw ParseError("config: empty key", line_no);
        cfg.set(key, value, base_dir);
    }
    cfg.validate();
    return cfg;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    return parse_campaign_config(in, base_dir.empty() ? "." : base_dir);
}

}  // namespace wptsim
