// wptsim command-line front end. Talks to the simulator exclusively through
// the C API in wptsim.h. Exit codes: 0 success, 2 configuration/validation
// error, 3 data error.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wptsim.h"

namespace {

struct ConfigDeleter {
    void operator()(wpt_config* p) const { wpt_config_free(p); }
};
struct TraceDeleter {
    void operator()(wpt_trace* p) const { wpt_trace_free(p); }
};
struct ReportDeleter {
    void operator()(wpt_report* p) const { wpt_report_free(p); }
};
using ConfigPtr = std::unique_ptr<wpt_config, ConfigDeleter>;
using TracePtr = std::unique_ptr<wpt_trace, TraceDeleter>;
using ReportPtr = std::unique_ptr<wpt_report, ReportDeleter>;

int exit_code_for(wpt_status status) {
    switch (status) {
        case WPT_OK:
            return 0;
        case WPT_ERR_INVALID_ARGUMENT:
        case WPT_ERR_OUT_OF_RANGE:
        case WPT_ERR_VALIDATION:
            return 2;
        case WPT_ERR_PARSE:
        case WPT_ERR_IO:
        case WPT_ERR_INTERNAL:
            return 3;
    }
    return 3;
}

int fail(wpt_status status) {
    std::fprintf(stderr, "error: %s\n", wpt_last_error());
    return exit_code_for(status);
}

// anything wrong with the configuration itself is a configuration error
int fail_config() {
    std::fprintf(stderr, "error: %s\n", wpt_last_error());
    return 2;
}

// unreadable or malformed input data
int fail_data() {
    std::fprintf(stderr, "error: %s\n", wpt_last_error());
    return 3;
}

int load_config(const std::string& path, std::optional<long long> seed,
                std::optional<long long> trials, ConfigPtr& out) {
    wpt_config* raw = nullptr;
    if (wpt_config_load(path.c_str(), &raw) != WPT_OK) return fail_config();
    out.reset(raw);
    if (seed) {
        const std::string v = std::to_string(*seed);
        if (wpt_config_set(out.get(), "seed", v.c_str()) != WPT_OK) return fail_config();
    }
    if (trials) {
        const std::string v = std::to_string(*trials);
        if (wpt_config_set(out.get(), "n_trials", v.c_str()) != WPT_OK) return fail_config();
    }
    return 0;
}

int print_report(const wpt_report* report, const std::string& format) {
    char* bytes = nullptr;
    if (const wpt_status s = wpt_report_emit(report, format.c_str(), &bytes); s != WPT_OK)
        return fail(s);
    std::fputs(bytes, stdout);
    wpt_string_free(bytes);
    return 0;
}

int maybe_save(const wpt_report* report, const std::string& out_dir) {
    if (out_dir.empty()) return 0;
    if (const wpt_status s = wpt_report_save(report, out_dir.c_str()); s != WPT_OK)
        return fail(s);
    std::fprintf(stderr, "wrote report files to %s\n", out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wireless power transfer initial-access simulator"};
    app.require_subcommand(1);

    // size-buffer
    double e_mcu = 0.0, v_th = 0.0, v_bod = 0.0;
    auto* size_cmd = app.add_subcommand("size-buffer", "buffer capacitance for an energy budget");
    size_cmd->add_option("--e-mcu", e_mcu, "MCU energy demand [J]")->required();
    size_cmd->add_option("--v-th", v_th, "MCU activation threshold [V]")->required();
    size_cmd->add_option("--v-bod", v_bod, "brown-out threshold [V]")->required();

    // shared options
    std::string config_path, trace_path, out_dir, in_dir;
    std::string format = "table";
    std::string strategy;
    std::optional<double> gain;
    std::optional<long long> seed, trials;

    auto* sim_cmd = app.add_subcommand("simulate", "simulate configured sweep points");
    sim_cmd->add_option("--config", config_path, "campaign config file")->required();
    sim_cmd->add_option("--strategy", strategy, "single|multi (default: all configured)")
        ->check(CLI::IsMember({"single", "multi"}));
    sim_cmd->add_option("--gain", gain, "transmitter gain [dB] (default: all configured)");
    sim_cmd->add_option("--seed", seed, "override the configured seed");
    sim_cmd->add_option("--format", format, "csv|json|table")->capture_default_str();
    sim_cmd->add_option("--out", out_dir, "also save report files to this directory");

    std::string trajectory_out, trajectory_mcu = "realistic";
    std::size_t trajectory_start = 0;
    auto* replay_cmd = app.add_subcommand("replay", "replay a measured energy-profiler trace");
    replay_cmd->add_option("--trace", trace_path, "EP trace CSV")->required();
    replay_cmd->add_option("--config", config_path, "campaign config file")->required();
    replay_cmd->add_option("--trials", trials, "Monte-Carlo trials (default from config)");
    replay_cmd->add_option("--seed", seed, "override the configured seed");
    replay_cmd->add_option("--format", format, "csv|json|table")->capture_default_str();
    replay_cmd->add_option("--out", out_dir, "also save report files to this directory");
    replay_cmd->add_option("--trajectory-out", trajectory_out,
                           "write the reconstructed buffer-voltage trajectory CSV here");
    replay_cmd->add_option("--trajectory-start", trajectory_start,
                           "trace sample index the trajectory reconstruction starts from")
        ->capture_default_str();
    replay_cmd->add_option("--trajectory-mcu", trajectory_mcu, "realistic|ideal")
        ->check(CLI::IsMember({"realistic", "ideal"}))
        ->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "run the full gain sweep");
    sweep_cmd->add_option("--config", config_path, "campaign config file")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_option("--seed", seed, "override the configured seed");

    auto* report_cmd = app.add_subcommand("report", "re-emit a saved report");
    report_cmd->add_option("--in", in_dir, "directory written by sweep/--out")->required();
    report_cmd->add_option("--format", format, "csv|json|table")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (size_cmd->parsed()) {
        double c_b = 0.0;
        if (const wpt_status s = wpt_size_buffer(e_mcu, v_th, v_bod, &c_b); s != WPT_OK)
            return fail(s);
        std::printf("c_b_f=%.17g\nc_b_uf=%.4f\n", c_b, c_b * 1e6);
        return 0;
    }

    if (sim_cmd->parsed()) {
        ConfigPtr cfg;
        if (const int rc = load_config(config_path, seed, trials, cfg); rc != 0) return rc;
        wpt_report* raw = nullptr;
        const double* gain_ptr = gain ? &*gain : nullptr;
        const char* strategy_ptr = strategy.empty() ? nullptr : strategy.c_str();
        if (const wpt_status s = wpt_run_point(cfg.get(), strategy_ptr, gain_ptr, &raw);
            s != WPT_OK)
            return fail(s);
        ReportPtr report(raw);
        if (const int rc = maybe_save(report.get(), out_dir); rc != 0) return rc;
        return print_report(report.get(), format);
    }

    if (replay_cmd->parsed()) {
        ConfigPtr cfg;
        if (const int rc = load_config(config_path, seed, trials, cfg); rc != 0) return rc;
        wpt_trace* traw = nullptr;
        if (wpt_trace_load(trace_path.c_str(), &traw) != WPT_OK) return fail_data();
        TracePtr trace(traw);
        wpt_report* raw = nullptr;
        if (const wpt_status s = wpt_replay(cfg.get(), trace.get(), &raw); s != WPT_OK)
            return fail(s);
        ReportPtr report(raw);
        if (!trajectory_out.empty()) {
            if (const wpt_status s =
                    wpt_reconstruct_trajectory(cfg.get(), trace.get(), trajectory_start,
                                               trajectory_mcu.c_str(), trajectory_out.c_str());
                s != WPT_OK)
                return fail(s);
        }
        if (const int rc = maybe_save(report.get(), out_dir); rc != 0) return rc;
        return print_report(report.get(), format);
    }

    if (sweep_cmd->parsed()) {
        ConfigPtr cfg;
        if (const int rc = load_config(config_path, seed, trials, cfg); rc != 0) return rc;
        wpt_report* raw = nullptr;
        if (const wpt_status s = wpt_run_sweep(cfg.get(), &raw); s != WPT_OK) return fail(s);
        ReportPtr report(raw);
        if (const wpt_status s = wpt_report_save(report.get(), out_dir.c_str()); s != WPT_OK)
            return fail(s);
        return print_report(report.get(), "table");
    }

    if (report_cmd->parsed()) {
        wpt_report* raw = nullptr;
        if (wpt_report_open(in_dir.c_str(), &raw) != WPT_OK) return fail_data();
        ReportPtr report(raw);
        return print_report(report.get(), format);
    }

    return 2;
}
