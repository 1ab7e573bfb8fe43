#ifndef WPTSIM_TRACE_REPLAY_HPP
#define WPTSIM_TRACE_REPLAY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wptsim/end_device.hpp"
#include "wptsim/excitation.hpp"
#include "wptsim/stats.hpp"

namespace wptsim {

/// Energy-profiler measurement trace: harvested DC power and harvester output
/// voltage logged over time, plus the measurement's metadata.
struct EpTrace {
    double sample_rate_hz = 250.0;
    std::vector<double> t_s;
    std::vector<double> p_dc_w;
    std::vector<double> v_dc_v;

    std::optional<Strategy> strategy;
    std::optional<double> gain_db;

    std::size_t size() const { return t_s.size(); }
    double sample_period_s() const { return 1.0 / sample_rate_hz; }
    double duration_s() const { return static_cast<double>(size()) / sample_rate_hz; }

    void validate() const;
};

/// Parses the `t_s,p_dc_w,v_dc_v` CSV format. Metadata comes from `#` comment
/// lines (`strategy=single|multi`, `gain_db=...`, `sample_rate_hz=...`). The
/// sample rate is taken from the time column when not declared — profiler
/// exports vary between their forwarding and control-loop rates, so it is
/// never assumed — and a declared rate that disagrees with the time column is
/// rejected. Time gaps larger than two sample periods are rejected.
EpTrace parse_ep_trace(std::istream& in);

void write_ep_trace_csv(const EpTrace& trace, std::ostream& out);

struct ReplayResult {
    std::vector<BufferState> trajectory;
    DeviceEvents events;
    bool censored;            // no completed pilot within the remaining trace
    double censor_limit_s;    // remaining duration after start_index
};

/// Feeds the measured (p_dc, v_dc) into the buffer recurrence as (p_eh, v_eh)
/// starting from a depleted buffer at `start_index`; event times are relative
/// to the trial start.
ReplayResult reconstruct_buffer(const EpTrace& trace, const EndDeviceConfig& cfg,
                                std::size_t start_index);

/// The trial start indices monte_carlo_response draws for a given seed:
/// n_trials uniform picks over the full trace. Exposed so that independent
/// oracles can score the exact same trials.
std::vector<std::size_t> monte_carlo_start_indices(const EpTrace& trace, std::size_t n_trials,
                                                   std::uint64_t seed);

/// Monte-Carlo response-time estimate: runs reconstruct_buffer from seeded
/// random start instants, censoring trials at the remaining trace duration.
ResponseStats monte_carlo_response(const EpTrace& trace, const EndDeviceConfig& cfg,
                                   std::size_t n_trials, std::uint64_t seed);

}  // namespace wptsim

#endif
