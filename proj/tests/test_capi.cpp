#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "wptsim.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("c api closed-form helpers") {
    double c_b = 0.0;
    REQUIRE(wpt_size_buffer(30.4e-6, 1.75, 1.55, &c_b) == WPT_OK);
    CHECK(c_b == doctest::Approx(92.1e-6).epsilon(1e-3));

    CHECK(wpt_size_buffer(30.4e-6, 1.55, 1.75, &c_b) == WPT_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(wpt_last_error()) > 0);
    CHECK(wpt_size_buffer(1e-6, 1.75, 1.55, nullptr) == WPT_ERR_INVALID_ARGUMENT);

    double duration = 0.0, energy = 0.0;
    REQUIRE(wpt_pilot_energy(10, 1000.0, 380e-6, &duration, &energy) == WPT_OK);
    CHECK(duration == 0.08);
    CHECK(energy == doctest::Approx(30.4e-6).epsilon(1e-12));

    double watt = 0.0;
    REQUIRE(wpt_dbm_to_watt(0.0, &watt) == WPT_OK);
    CHECK(watt == 1e-3);

    double total = 0.0;
    REQUIRE(wpt_combine_equal_sources(9.1, 84, &total) == WPT_OK);
    CHECK(total == doctest::Approx(28.34).epsilon(1e-3));
    CHECK(wpt_combine_equal_sources(9.1, 0, &total) == WPT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api config lifecycle") {
    wpt_config* cfg = nullptr;
    REQUIRE(wpt_config_default(&cfg) == WPT_OK);
    CHECK(wpt_config_set(cfg, "seed", "9") == WPT_OK);
    CHECK(wpt_config_set(cfg, "nonsense", "1") == WPT_ERR_VALIDATION);
    CHECK(wpt_config_set(cfg, "duration_s", "oops") == WPT_ERR_VALIDATION);
    wpt_config_free(cfg);
    wpt_config_free(nullptr);

    CHECK(wpt_config_load("/not/there.cfg", &cfg) == WPT_ERR_IO);

    TempDir dir("wptsim_capi_cfg");
    write_file(dir.path / "c.cfg", "gains_db = 120:130:1\n");
    CHECK(wpt_config_load((dir.path / "c.cfg").string().c_str(), &cfg) == WPT_ERR_VALIDATION);
}

TEST_CASE("c api trace loading and validation") {
    TempDir dir("wptsim_capi_trace");
    write_file(dir.path / "good.csv",
               "# strategy=single\n# gain_db=80\n# sample_rate_hz=250\n"
               "t_s,p_dc_w,v_dc_v\n0,1e-6,1.0\n0.004,1e-6,1.0\n0.008,1e-6,1.0\n");
    wpt_trace* trace = nullptr;
    REQUIRE(wpt_trace_load((dir.path / "good.csv").string().c_str(), &trace) == WPT_OK);
    size_t n = 0;
    double rate = 0.0;
    CHECK(wpt_trace_length(trace, &n) == WPT_OK);
    CHECK(n == 3);
    CHECK(wpt_trace_sample_rate(trace, &rate) == WPT_OK);
    CHECK(rate == 250.0);
    wpt_trace_free(trace);

    write_file(dir.path / "bad.csv", "t_s,p_dc_w,v_dc_v\n0,oops,1.0\n");
    CHECK(wpt_trace_load((dir.path / "bad.csv").string().c_str(), &trace) == WPT_ERR_PARSE);

    write_file(dir.path / "negative.csv", "t_s,p_dc_w,v_dc_v\n0,-1e-6,1.0\n0.004,1e-6,1.0\n");
    CHECK(wpt_trace_load((dir.path / "negative.csv").string().c_str(), &trace) ==
          WPT_ERR_VALIDATION);

    CHECK(wpt_trace_load("/missing.csv", &trace) == WPT_ERR_IO);
}

TEST_CASE("c api simulation, replay and report emission") {
    TempDir dir("wptsim_capi_run");
    write_file(dir.path / "run.cfg",
               "strategies = single\n"
               "gains_db = 80\n"
               "duration_s = 1\n"
               "single_tone_dwell_s = 0.25\n"
               "envelope_rate_hz = 10000\n"
               "harvester = parametric 1e-7 0.5 1e-4\n"
               "mcu_modes = ideal\n"
               "n_trials = 5\n"
               "seed = 2\n");
    wpt_config* cfg = nullptr;
    REQUIRE(wpt_config_load((dir.path / "run.cfg").string().c_str(), &cfg) == WPT_OK);

    wpt_report* report = nullptr;
    REQUIRE(wpt_run_point(cfg, "single", nullptr, &report) == WPT_OK);
    char* bytes = nullptr;
    REQUIRE(wpt_report_emit(report, "csv", &bytes) == WPT_OK);
    CHECK(std::string(bytes).find("single,80,") != std::string::npos);
    wpt_string_free(bytes);
    CHECK(wpt_report_emit(report, "xml", &bytes) == WPT_ERR_INVALID_ARGUMENT);

    // unknown strategy name surfaces as invalid argument
    wpt_report* bad = nullptr;
    CHECK(wpt_run_point(cfg, "quad", nullptr, &bad) == WPT_ERR_INVALID_ARGUMENT);
    // a gain outside the configured sweep is a validation failure
    const double off_grid = 81.0;
    CHECK(wpt_run_point(cfg, "single", &off_grid, &bad) == WPT_ERR_VALIDATION);

    // save and reopen through the directory format
    const auto out_dir = (dir.path / "report").string();
    REQUIRE(wpt_report_save(report, out_dir.c_str()) == WPT_OK);
    wpt_report* reopened = nullptr;
    REQUIRE(wpt_report_open(out_dir.c_str(), &reopened) == WPT_OK);
    char* a = nullptr;
    char* b = nullptr;
    REQUIRE(wpt_report_emit(report, "json", &a) == WPT_OK);
    REQUIRE(wpt_report_emit(reopened, "json", &b) == WPT_OK);
    CHECK(std::string(a) == std::string(b));
    wpt_string_free(a);
    wpt_string_free(b);
    wpt_report_free(reopened);
    wpt_report_free(report);

    // replay a quickly-charging constant trace
    std::string trace_text = "# strategy=single\n# gain_db=80\nt_s,p_dc_w,v_dc_v\n";
    for (int i = 0; i < 2500; ++i)
        trace_text += std::to_string(i / 250.0) + ",3e-5,2.0\n";
    write_file(dir.path / "trace.csv", trace_text);
    wpt_trace* trace = nullptr;
    REQUIRE(wpt_trace_load((dir.path / "trace.csv").string().c_str(), &trace) == WPT_OK);
    wpt_report* replay = nullptr;
    REQUIRE(wpt_replay(cfg, trace, &replay) == WPT_OK);
    REQUIRE(wpt_report_emit(replay, "table", &bytes) == WPT_OK);
    CHECK(std::string(bytes).find("single") != std::string::npos);
    wpt_string_free(bytes);
    wpt_report_free(replay);

    const auto traj_path = (dir.path / "trajectory.csv").string();
    REQUIRE(wpt_reconstruct_trajectory(cfg, trace, 0, "ideal", traj_path.c_str()) == WPT_OK);
    std::ifstream traj(traj_path);
    std::string header;
    std::getline(traj, header);
    CHECK(header == "t_s,v_b_v,mcu_active");
    CHECK(wpt_reconstruct_trajectory(cfg, trace, 1u << 30, "ideal", traj_path.c_str()) ==
          WPT_ERR_INVALID_ARGUMENT);

    wpt_trace_free(trace);
    wpt_config_free(cfg);

    CHECK(std::string(wpt_version()).find('.') != std::string::npos);
}
