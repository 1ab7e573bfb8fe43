#ifndef WPTSIM_CAMPAIGN_HPP
#define WPTSIM_CAMPAIGN_HPP

#include <optional>
#include <utility>
#include <vector>

#include "wptsim/config.hpp"
#include "wptsim/stats.hpp"
#include "wptsim/trace_replay.hpp"

namespace wptsim {

/// One (strategy, gain) sweep point. Power/efficiency fields are optional
/// because trace replay only observes the DC side of the harvester.
struct SweepCell {
    Strategy strategy = Strategy::single_tone;
    double gain_db = 0.0;
    std::optional<double> per_antenna_dbm;
    std::optional<double> total_dbm;
    std::optional<double> mean_rf_w;
    double mean_dc_w = 0.0;
    std::optional<double> harvester_efficiency;      // fraction of RF input recovered as DC
    std::optional<double> overall_efficiency_ppm;    // DC output over total radiated power
    double feasibility_pct = 0.0;                    // time fraction above v_mcu_th, percent
    std::vector<std::pair<McuMode, ResponseStats>> response;
};

struct SweepReport {
    std::size_t n_antennas = 0;
    double duration_s = 0.0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
    std::vector<SweepCell> cells;  // ordered by (strategy, gain) as configured
};

/// Runs the full simulation pipeline for every configured (strategy, gain)
/// point: excitation plan -> channel -> envelope -> harvester -> device
/// Monte-Carlo. Points execute on a small work pool; the report order and all
/// values are independent of scheduling, and identical (config, seed) runs
/// produce identical reports.
SweepReport run_sweep(const CampaignConfig& cfg);

/// Sweep restricted to one strategy and/or one gain.
SweepReport run_point(const CampaignConfig& cfg, std::optional<Strategy> strategy,
                      std::optional<double> gain_db);

/// Replays a measured energy-profiler trace through the device model:
/// feasibility from the measured harvester voltage, response statistics from
/// Monte-Carlo reconstruction.
SweepReport replay_trace(const CampaignConfig& cfg, const EpTrace& trace);

}  // namespace wptsim

#endif
