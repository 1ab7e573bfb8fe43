#include "wptsim.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "wptsim/campaign.hpp"
#include "wptsim/config.hpp"
#include "wptsim/end_device.hpp"
#include "wptsim/errors.hpp"
#include "wptsim/quantities.hpp"
#include "wptsim/report.hpp"
#include "wptsim/trace_replay.hpp"

struct wpt_config {
    wptsim::CampaignConfig cfg;
    std::string base_dir = ".";
};

struct wpt_trace {
    wptsim::EpTrace trace;
};

struct wpt_report {
    wptsim::SweepReport report;
};

namespace {

thread_local std::string g_last_error;

wpt_status record_error(wpt_status status, const char* what) {
    g_last_error = what ? what : "";
    return status;
}

/// Runs `fn`, translating the C++ error taxonomy onto status codes.
template <typename Fn>
wpt_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return WPT_OK;
    } catch (const wptsim::OutOfRange& e) {
        return record_error(WPT_ERR_OUT_OF_RANGE, e.what());
    } catch (const wptsim::ParseError& e) {
        return record_error(WPT_ERR_PARSE, e.what());
    } catch (const wptsim::ValidationError& e) {
        return record_error(WPT_ERR_VALIDATION, e.what());
    } catch (const wptsim::IoError& e) {
        return record_error(WPT_ERR_IO, e.what());
    } catch (const wptsim::InvalidArgument& e) {
        return record_error(WPT_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc& e) {
        return record_error(WPT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record_error(WPT_ERR_INTERNAL, e.what());
    } catch (...) {
        return record_error(WPT_ERR_INTERNAL, "unknown error");
    }
}

wpt_status require(bool ok, const char* message) {
    return ok ? WPT_OK : record_error(WPT_ERR_INVALID_ARGUMENT, message);
}

}  // namespace

extern "C" {

const char* wpt_version(void) { return "1.0.0"; }

const char* wpt_last_error(void) { return g_last_error.c_str(); }

wpt_status wpt_size_buffer(double e_mcu_j, double v_th_v, double v_bod_v, double* c_b_f) {
    if (require(c_b_f != nullptr, "c_b_f is NULL") != WPT_OK) return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] { *c_b_f = wptsim::size_buffer(e_mcu_j, v_th_v, v_bod_v); });
}

wpt_status wpt_pilot_energy(size_t pilot_bytes, double baud_bit_s, double p_active_w,
                            double* duration_s, double* energy_j) {
    if (require(duration_s != nullptr && energy_j != nullptr, "out-parameter is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        wptsim::EndDeviceConfig cfg;
        cfg.pilot_bytes = pilot_bytes;
        cfg.baud_bit_s = baud_bit_s;
        cfg.p_active_w = p_active_w;
        cfg.validate();
        const auto budget = wptsim::pilot_energy(cfg);
        *duration_s = budget.duration_s;
        *energy_j = budget.energy_j;
    });
}

wpt_status wpt_dbm_to_watt(double p_dbm, double* watt) {
    if (require(watt != nullptr, "watt is NULL") != WPT_OK) return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] { *watt = wptsim::dbm_to_watt(p_dbm); });
}

wpt_status wpt_combine_equal_sources(double p_per_antenna_dbm, size_t n_antennas,
                                     double* total_dbm) {
    if (require(total_dbm != nullptr, "total_dbm is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded(
        [&] { *total_dbm = wptsim::combine_equal_sources(p_per_antenna_dbm, n_antennas); });
}

wpt_status wpt_config_load(const char* path, wpt_config** out) {
    if (require(path != nullptr && out != nullptr, "path/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        auto handle = std::make_unique<wpt_config>();
        handle->cfg = wptsim::load_campaign_config(path);
        const auto parent = std::filesystem::path(path).parent_path().string();
        handle->base_dir = parent.empty() ? "." : parent;
        *out = handle.release();
    });
}

wpt_status wpt_config_default(wpt_config** out) {
    if (require(out != nullptr, "out is NULL") != WPT_OK) return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new wpt_config(); });
}

wpt_status wpt_config_set(wpt_config* cfg, const char* key, const char* value) {
    if (require(cfg != nullptr && key != nullptr && value != nullptr,
                "cfg/key/value is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        cfg->cfg.set(key, value, cfg->base_dir);
        cfg->cfg.validate();
    });
}

void wpt_config_free(wpt_config* cfg) { delete cfg; }

wpt_status wpt_trace_load(const char* path, wpt_trace** out) {
    if (require(path != nullptr && out != nullptr, "path/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw wptsim::IoError("cannot open trace '" + std::string(path) + "'");
        auto handle = std::make_unique<wpt_trace>();
        handle->trace = wptsim::parse_ep_trace(in);
        *out = handle.release();
    });
}

wpt_status wpt_trace_length(const wpt_trace* trace, size_t* n_samples) {
    if (require(trace != nullptr && n_samples != nullptr, "trace/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    *n_samples = trace->trace.size();
    return WPT_OK;
}

wpt_status wpt_trace_sample_rate(const wpt_trace* trace, double* rate_hz) {
    if (require(trace != nullptr && rate_hz != nullptr, "trace/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    *rate_hz = trace->trace.sample_rate_hz;
    return WPT_OK;
}

void wpt_trace_free(wpt_trace* trace) { delete trace; }

wpt_status wpt_run_sweep(const wpt_config* cfg, wpt_report** out) {
    if (require(cfg != nullptr && out != nullptr, "cfg/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        auto handle = std::make_unique<wpt_report>();
        handle->report = wptsim::run_sweep(cfg->cfg);
        *out = handle.release();
    });
}

wpt_status wpt_run_point(const wpt_config* cfg, const char* strategy, const double* gain_db,
                         wpt_report** out) {
    if (require(cfg != nullptr && out != nullptr, "cfg/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::optional<wptsim::Strategy> s;
        if (strategy != nullptr) s = wptsim::parse_strategy(strategy);
        std::optional<double> g;
        if (gain_db != nullptr) g = *gain_db;
        auto handle = std::make_unique<wpt_report>();
        handle->report = wptsim::run_point(cfg->cfg, s, g);
        *out = handle.release();
    });
}

wpt_status wpt_replay(const wpt_config* cfg, const wpt_trace* trace, wpt_report** out) {
    if (require(cfg != nullptr && trace != nullptr && out != nullptr,
                "cfg/trace/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        auto handle = std::make_unique<wpt_report>();
        handle->report = wptsim::replay_trace(cfg->cfg, trace->trace);
        *out = handle.release();
    });
}

wpt_status wpt_reconstruct_trajectory(const wpt_config* cfg, const wpt_trace* trace,
                                      size_t start_index, const char* mcu_mode,
                                      const char* out_path) {
    if (require(cfg != nullptr && trace != nullptr && mcu_mode != nullptr && out_path != nullptr,
                "cfg/trace/mcu_mode/out_path is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        wptsim::EndDeviceConfig device = cfg->cfg.device;
        device.mcu_load = wptsim::parse_mcu_mode(mcu_mode) == wptsim::McuMode::ideal
                              ? wptsim::McuLoadCurve::ideal()
                              : device.mcu_load;
        const auto result = wptsim::reconstruct_buffer(trace->trace, device, start_index);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw wptsim::IoError("cannot write '" + std::string(out_path) + "'");
        wptsim::write_trajectory_csv(result.trajectory, out);
    });
}

void wpt_report_free(wpt_report* report) { delete report; }

wpt_status wpt_report_emit(const wpt_report* report, const char* format, char** bytes_out) {
    if (require(report != nullptr && format != nullptr && bytes_out != nullptr,
                "report/format/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const std::string bytes =
            wptsim::emit_report(report->report, wptsim::parse_report_format(format));
        char* copy = new char[bytes.size() + 1];
        std::memcpy(copy, bytes.data(), bytes.size() + 1);
        *bytes_out = copy;
    });
}

wpt_status wpt_report_save(const wpt_report* report, const char* dir) {
    if (require(report != nullptr && dir != nullptr, "report/dir is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] { wptsim::save_report_files(report->report, dir); });
}

wpt_status wpt_report_open(const char* dir, wpt_report** out) {
    if (require(dir != nullptr && out != nullptr, "dir/out is NULL") != WPT_OK)
        return WPT_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        auto handle = std::make_unique<wpt_report>();
        handle->report = wptsim::load_report_dir(dir);
        *out = handle.release();
    });
}

void wpt_string_free(char* bytes) { delete[] bytes; }

}  // extern "C"
