#include "wptsim/trace_replay.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "wptsim/csv.hpp"
#include "wptsim/errors.hpp"
#include "wptsim/rng.hpp"

namespace wptsim {

void EpTrace::validate() const {
    if (t_s.empty()) throw ValidationError("EP trace is empty");
    if (p_dc_w.size() != t_s.size() || v_dc_v.size() != t_s.size())
        throw ValidationError("EP trace column lengths disagree");
    if (!(sample_rate_hz > 0.0)) throw ValidationError("EP trace sample rate must be positive");
    const double period = sample_period_s();
    for (std::size_t i = 0; i < t_s.size(); ++i) {
        if (p_dc_w[i] < 0.0 || !std::isfinite(p_dc_w[i]))
            throw ValidationError("EP trace: p_dc must be finite and non-negative (sample " +
                                  std::to_string(i) + ")");
        if (v_dc_v[i] < 0.0 || !std::isfinite(v_dc_v[i]))
            throw ValidationError("EP trace: v_dc must be finite and non-negative (sample " +
                                  std::to_string(i) + ")");
        if (i > 0) {
            const double dt = t_s[i] - t_s[i - 1];
            if (!(dt > 0.0))
                throw ValidationError("EP trace: time must be strictly increasing (sample " +
                                      std::to_string(i) + ")");
            if (dt > 2.0 * period)
                throw ValidationError("EP trace: gap of " + std::to_string(dt) +
                                      " s exceeds two sample periods (sample " +
                                      std::to_string(i) + ")");
        }
    }
}

EpTrace parse_ep_trace(std::istream& in) {
    const auto table = csv::read_table(in, {"t_s", "p_dc_w", "v_dc_v"});
    if (table.rows.empty()) throw ValidationError("EP trace has no samples");

    EpTrace trace;
    trace.t_s.reserve(table.rows.size());
    trace.p_dc_w.reserve(table.rows.size());
    trace.v_dc_v.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        trace.t_s.push_back(row[0]);
        trace.p_dc_w.push_back(row[1]);
        trace.v_dc_v.push_back(row[2]);
    }

    std::optional<double> declared_rate;
    for (const auto& [key, value] : table.metadata) {
        if (key == "strategy") {
            trace.strategy = parse_strategy(value);
        } else if (key == "gain_db") {
            trace.gain_db = csv::parse_double(value, 0);
        } else if (key == "sample_rate_hz") {
            declared_rate = csv::parse_double(value, 0);
            if (!(*declared_rate > 0.0))
                throw ValidationError("EP trace: declared sample rate must be positive");
        }
    }

    if (trace.size() >= 2) {
        std::vector<double> dts;
        dts.reserve(trace.size() - 1);
        for (std::size_t i = 1; i < trace.size(); ++i) dts.push_back(trace.t_s[i] - trace.t_s[i - 1]);
        std::nth_element(dts.begin(), dts.begin() + dts.size() / 2, dts.end());
        const double median_dt = dts[dts.size() / 2];
        if (!(median_dt > 0.0)) throw ValidationError("EP trace: time must be strictly increasing");
        if (declared_rate) {
            // the declared rate must agree with the time column
            if (std::abs(median_dt - 1.0 / *declared_rate) > 0.5 / *declared_rate)
                throw ValidationError("EP trace: declared sample_rate_hz disagrees with time column");
            trace.sample_rate_hz = *declared_rate;
        } else {
            trace.sample_rate_hz = 1.0 / median_dt;
        }
    } else if (declared_rate) {
        trace.sample_rate_hz = *declared_rate;
    }
    trace.validate();
    return trace;
}

void write_ep_trace_csv(const EpTrace& trace, std::ostream& out) {
    if (trace.strategy) out << "# strategy=" << strategy_name(*trace.strategy) << "\n";
    if (trace.gain_db) out << "# gain_db=" << *trace.gain_db << "\n";
    out << "# sample_rate_hz=" << trace.sample_rate_hz << "\n";
    out << "t_s,p_dc_w,v_dc_v\n";
    char buf[96];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", trace.t_s[i], trace.p_dc_w[i],
                      trace.v_dc_v[i]);
        out << buf;
    }
}

namespace {

HarvestView suffix_view(const EpTrace& trace, std::size_t start_index) {
    HarvestView view;
    view.sample_rate_hz = trace.sample_rate_hz;
    view.start_time_s = 0.0;  // event times are relative to the trial start
    view.p_eh_w = std::span<const double>(trace.p_dc_w).subspan(start_index);
    view.v_eh_v = std::span<const double>(trace.v_dc_v).subspan(start_index);
    return view;
}

}  // namespace

ReplayResult reconstruct_buffer(const EpTrace& trace, const EndDeviceConfig& cfg,
                                std::size_t start_index) {
    trace.validate();
    if (start_index >= trace.size())
        throw InvalidArgument("reconstruct_buffer: start index beyond trace end");

    ReplayResult result;
    auto sim = simulate_device(suffix_view(trace, start_index), cfg, 0.0);
    result.trajectory = std::move(sim.trajectory);
    result.events = sim.events;
    result.censored = !result.events.pilot_sent_at_s.has_value();
    result.censor_limit_s =
        static_cast<double>(trace.size() - start_index) * trace.sample_period_s();
    return result;
}

std::vector<std::size_t> monte_carlo_start_indices(const EpTrace& trace, std::size_t n_trials,
                                                   std::uint64_t seed) {
    if (n_trials == 0) throw InvalidArgument("monte_carlo_response: need at least one trial");
    if (trace.size() == 0) throw InvalidArgument("monte_carlo_response: empty trace");
    Rng rng(seed);
    std::vector<std::size_t> indices;
    indices.reserve(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i)
        indices.push_back(static_cast<std::size_t>(rng.uniform_index(trace.size())));
    return indices;
}

ResponseStats monte_carlo_response(const EpTrace& trace, const EndDeviceConfig& cfg,
                                   std::size_t n_trials, std::uint64_t seed) {
    trace.validate();
    const auto indices = monte_carlo_start_indices(trace, n_trials, seed);

    std::vector<TrialOutcome> trials;
    trials.reserve(indices.size());
    for (std::size_t start : indices) {
        const DeviceEvents events = simulate_device_events(suffix_view(trace, start), cfg, 0.0);
        const double censor_limit =
            static_cast<double>(trace.size() - start) * trace.sample_period_s();
        if (events.pilot_sent_at_s)
            trials.push_back({*events.pilot_sent_at_s, false});
        else
            trials.push_back({censor_limit, true});
    }
    return make_response_stats(std::move(trials), trace.duration_s());
}

}  // namespace wptsim
