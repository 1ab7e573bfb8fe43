/*
 * wptsim C API: wireless power transfer initial-access simulator and
 * trace-replay analyzer.
 *
 * The library is consumed through opaque handles and integer status codes.
 * Every function returns WPT_OK on success; on failure it returns the error
 * class and leaves a human-readable message in thread-local storage,
 * retrievable with wpt_last_error(). Out-parameters are written only on
 * success. Handles are freed with their matching wpt_*_free function; free
 * functions accept NULL.
 */
#ifndef WPTSIM_H
#define WPTSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wpt_status {
    WPT_OK = 0,
    WPT_ERR_INVALID_ARGUMENT = 1,
    WPT_ERR_OUT_OF_RANGE = 2,
    WPT_ERR_PARSE = 3,
    WPT_ERR_VALIDATION = 4,
    WPT_ERR_IO = 5,
    WPT_ERR_INTERNAL = 6
} wpt_status;

/* Campaign configuration (geometry, sweep, harvester, device, seeds). */
typedef struct wpt_config wpt_config;
/* Energy-profiler measurement trace. */
typedef struct wpt_trace wpt_trace;
/* Sweep / replay results. */
typedef struct wpt_report wpt_report;

const char* wpt_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
const char* wpt_last_error(void);

/* ---- closed-form device helpers ---------------------------------------- */

/* Buffer capacitance that spends e_mcu between v_th and v_bod:
 * 2*e/(v_th^2 - v_bod^2). */
wpt_status wpt_size_buffer(double e_mcu_j, double v_th_v, double v_bod_v, double* c_b_f);

/* Pilot duration 8*bytes/baud and its energy at the active power draw. */
wpt_status wpt_pilot_energy(size_t pilot_bytes, double baud_bit_s, double p_active_w,
                            double* duration_s, double* energy_j);

wpt_status wpt_dbm_to_watt(double p_dbm, double* watt);
wpt_status wpt_combine_equal_sources(double p_per_antenna_dbm, size_t n_antennas,
                                     double* total_dbm);

/* ---- configuration ------------------------------------------------------ */

wpt_status wpt_config_load(const char* path, wpt_config** out);
wpt_status wpt_config_default(wpt_config** out);
/* Applies one `key = value` override using the config-file schema. */
wpt_status wpt_config_set(wpt_config* cfg, const char* key, const char* value);
void wpt_config_free(wpt_config* cfg);

/* ---- traces ------------------------------------------------------------- */

wpt_status wpt_trace_load(const char* path, wpt_trace** out);
wpt_status wpt_trace_length(const wpt_trace* trace, size_t* n_samples);
wpt_status wpt_trace_sample_rate(const wpt_trace* trace, double* rate_hz);
void wpt_trace_free(wpt_trace* trace);

/* ---- simulation and replay ---------------------------------------------- */

/* Full sweep over the configured strategies and gains. */
wpt_status wpt_run_sweep(const wpt_config* cfg, wpt_report** out);

/* One sweep point. `strategy` is "single", "multi" or NULL for all
 * configured strategies; pass gain_db = NULL for all configured gains. */
wpt_status wpt_run_point(const wpt_config* cfg, const char* strategy, const double* gain_db,
                         wpt_report** out);

/* Monte-Carlo response-time reconstruction over a measured trace. */
wpt_status wpt_replay(const wpt_config* cfg, const wpt_trace* trace, wpt_report** out);

/* Reconstructs the buffer-voltage trajectory from `start_index` onward and
 * writes it as `t_s,v_b_v,mcu_active` CSV. `mcu_mode` is "realistic" or
 * "ideal". */
wpt_status wpt_reconstruct_trajectory(const wpt_config* cfg, const wpt_trace* trace,
                                      size_t start_index, const char* mcu_mode,
                                      const char* out_path);

void wpt_report_free(wpt_report* report);

/* ---- report emission ---------------------------------------------------- */

/* `format` is "csv", "json" or "table". The returned string is owned by the
 * caller; release it with wpt_string_free. */
wpt_status wpt_report_emit(const wpt_report* report, const char* format, char** bytes_out);

/* Writes report.csv, report.json and per-cell CDF files into `dir`. */
wpt_status wpt_report_save(const wpt_report* report, const char* dir);

/* Loads a report directory written by wpt_report_save. */
wpt_status wpt_report_open(const char* dir, wpt_report** out);

void wpt_string_free(char* bytes);

#ifdef __cplusplus
}
#endif

#endif /* WPTSIM_H */
