#include "wptsim/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "wptsim/errors.hpp"
#include "wptsim/quantities.hpp"
#include "wptsim/rng.hpp"

namespace wptsim {

namespace {

// Envelope synthesis chunk. One second keeps peak memory small and stays an
// exact multiple of the harvester averaging window at the default rates.
constexpr double kChunkSeconds = 1.0;

struct CellJob {
    Strategy strategy;
    std::size_t strategy_index;
    double gain_db;
    std::size_t gain_index;
};

EndDeviceConfig device_for_mode(const CampaignConfig& cfg, McuMode mode) {
    EndDeviceConfig device = cfg.device;
    device.mcu_load =
        mode == McuMode::ideal ? McuLoadCurve::ideal() : McuLoadCurve::default_realistic();
    if (mode == McuMode::realistic && cfg.device.mcu_load.kind == McuLoadCurve::Kind::realistic)
        device.mcu_load = cfg.device.mcu_load;
    return device;
}

McuMode feasibility_mode(const CampaignConfig& cfg) {
    // feasibility uses the realistic load when configured, the first mode otherwise
    for (McuMode m : cfg.mcu_modes) {
        if (m == McuMode::realistic) return m;
    }
    return cfg.mcu_modes.front();
}

SweepCell run_cell(const CampaignConfig& cfg, const ChannelRealization& channel,
                   const CellJob& job) {
    const std::size_t n_antennas = cfg.geometry.size();
    const double per_antenna_dbm = cfg.calibration.to_power_dbm(job.gain_db);
    const double amplitude = std::sqrt(dbm_to_watt(per_antenna_dbm));
    const double total_dbm = combine_equal_sources(per_antenna_dbm, n_antennas);

    // One phase schedule per strategy, reused across the gain sweep (common
    // random numbers): gain steps then differ only in transmit power, which
    // keeps sweep columns comparable the way repeated measurements of one
    // schedule would be.
    const std::uint64_t plan_seed = derive_seed(cfg.seed, "plan", job.strategy_index);
    const ExcitationPlan plan =
        job.strategy == Strategy::single_tone
            ? adaptive_single_tone_plan(n_antennas, amplitude, cfg.single_tone_dwell_s,
                                        cfg.duration_s, plan_seed)
            : multi_tone_plan(n_antennas, amplitude, cfg.multi_tone_spacing_hz, plan_seed);

    const HarvesterModel harvester =
        cfg.harvester.model_for(job.strategy, cfg.load_resistance_ohm, cfg.averaging_window_s);

    // Envelope -> harvest in chunks; chunk boundaries are aligned to the
    // averaging window so the result matches a monolithic run.
    const auto total_samples =
        static_cast<std::uint64_t>(std::llround(cfg.duration_s * cfg.envelope_rate_hz));
    if (total_samples == 0)
        throw InvalidArgument("run_sweep: duration shorter than one envelope sample");
    const auto window =
        static_cast<std::uint64_t>(std::max<std::int64_t>(
            1, std::llround(cfg.averaging_window_s * cfg.envelope_rate_hz)));
    auto chunk_samples = static_cast<std::uint64_t>(
        std::max<std::int64_t>(1, std::llround(kChunkSeconds * cfg.envelope_rate_hz)));
    chunk_samples = std::max(window, chunk_samples - chunk_samples % window);

    HarvestTrace harvest;
    harvest.sample_rate_hz = cfg.envelope_rate_hz / static_cast<double>(window);
    harvest.start_time_s = 0.0;
    harvest.p_eh_w.reserve(static_cast<std::size_t>((total_samples + window - 1) / window));
    harvest.v_eh_v.reserve(harvest.p_eh_w.capacity());

    double rf_sum = 0.0;
    for (std::uint64_t first = 0; first < total_samples; first += chunk_samples) {
        const auto n = static_cast<std::size_t>(std::min(chunk_samples, total_samples - first));
        const PowerEnvelope env =
            synthesize_envelope_range(plan, channel, first, n, cfg.envelope_rate_hz);
        for (double s : env.samples_w) rf_sum += s;
        const HarvestTrace part = harvest_envelope(harvester, env);
        harvest.p_eh_w.insert(harvest.p_eh_w.end(), part.p_eh_w.begin(), part.p_eh_w.end());
        harvest.v_eh_v.insert(harvest.v_eh_v.end(), part.v_eh_v.begin(), part.v_eh_v.end());
    }

    SweepCell cell;
    cell.strategy = job.strategy;
    cell.gain_db = job.gain_db;
    cell.per_antenna_dbm = per_antenna_dbm;
    cell.total_dbm = total_dbm;
    cell.mean_rf_w = rf_sum / static_cast<double>(total_samples);
    cell.mean_dc_w = harvest.mean_dc_w();
    cell.harvester_efficiency = cell.mean_dc_w / *cell.mean_rf_w;
    cell.overall_efficiency_ppm = cell.mean_dc_w / dbm_to_watt(total_dbm) * 1e6;

    // Feasibility: time fraction of the reconstructed buffer voltage above the
    // MCU threshold over one full-duration run from a depleted buffer.
    {
        const EndDeviceConfig device = device_for_mode(cfg, feasibility_mode(cfg));
        std::size_t above = 0;
        std::size_t steps = 0;
        bool first_state = true;
        run_device_simulation(HarvestView(harvest), device, 0.0, [&](const BufferState& s) {
            if (first_state) {
                first_state = false;  // initial state occupies no time
                return;
            }
            ++steps;
            if (s.v_b_v > device.v_mcu_th_v) ++above;
        });
        cell.feasibility_pct = 100.0 * static_cast<double>(above) / static_cast<double>(steps);
    }

    // Response statistics: the synthesized harvest trace replayed exactly like
    // a measured one, including the censor-at-trace-end convention. The same
    // seed across MCU modes reuses the same start instants, matching how the
    // measurements compare the two models.
    EpTrace synthetic;
    synthetic.sample_rate_hz = harvest.sample_rate_hz;
    synthetic.strategy = job.strategy;
    synthetic.gain_db = job.gain_db;
    synthetic.t_s.resize(harvest.size());
    for (std::size_t i = 0; i < harvest.size(); ++i)
        synthetic.t_s[i] = static_cast<double>(i) / harvest.sample_rate_hz;
    synthetic.p_dc_w = std::move(harvest.p_eh_w);
    synthetic.v_dc_v = std::move(harvest.v_eh_v);

    const std::uint64_t mc_seed = derive_seed(cfg.seed, "mc", job.strategy_index, job.gain_index);
    for (McuMode mode : cfg.mcu_modes) {
        cell.response.emplace_back(
            mode, monte_carlo_response(synthetic, device_for_mode(cfg, mode), cfg.n_trials,
                                       mc_seed));
    }
    return cell;
}

SweepReport run_jobs(const CampaignConfig& cfg, const std::vector<CellJob>& jobs) {
    cfg.validate();
    const ChannelRealization channel =
        sample_channel(cfg.geometry, cfg.device_position,
                       FadingConfig{cfg.fading.kind, cfg.fading.rician_k_db,
                                    derive_seed(cfg.seed, "channel")});

    SweepReport report;
    report.n_antennas = cfg.geometry.size();
    report.duration_s = cfg.duration_s;
    report.n_trials = cfg.n_trials;
    report.seed = cfg.seed;
    report.cells.resize(jobs.size());

    // Independent jobs on a small pool; results land in their preassigned
    // slots so the report is identical however the pool schedules them.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t n_workers =
        std::min<std::size_t>(jobs.size(),
                              std::max(1u, std::thread::hardware_concurrency()));
    {
        std::vector<std::jthread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) return;
                    try {
                        report.cells[i] = run_cell(cfg, channel, jobs[i]);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return report;
}

}  // namespace

SweepReport run_sweep(const CampaignConfig& cfg) { return run_point(cfg, std::nullopt, std::nullopt); }

SweepReport run_point(const CampaignConfig& cfg, std::optional<Strategy> strategy,
                      std::optional<double> gain_db) {
    cfg.validate();
    std::vector<CellJob> jobs;
    for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
        if (strategy && cfg.strategies[si] != *strategy) continue;
        for (std::size_t gi = 0; gi < cfg.gains_db.size(); ++gi) {
            if (gain_db && cfg.gains_db[gi] != *gain_db) continue;
            jobs.push_back({cfg.strategies[si], si, cfg.gains_db[gi], gi});
        }
    }
    if (jobs.empty()) {
        if (strategy &&
            std::find(cfg.strategies.begin(), cfg.strategies.end(), *strategy) ==
                cfg.strategies.end())
            throw ValidationError("run_point: strategy not in the configured list");
        throw ValidationError("run_point: requested gain not in the configured sweep");
    }
    return run_jobs(cfg, jobs);
}

SweepReport replay_trace(const CampaignConfig& cfg, const EpTrace& trace) {
    cfg.validate();
    trace.validate();

    SweepCell cell;
    cell.strategy = trace.strategy.value_or(Strategy::single_tone);
    cell.gain_db = trace.gain_db.value_or(0.0);
    double dc_sum = 0.0;
    std::size_t above = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        dc_sum += trace.p_dc_w[i];
        if (trace.v_dc_v[i] > cfg.device.v_mcu_th_v) ++above;
    }
    cell.mean_dc_w = dc_sum / static_cast<double>(trace.size());
    // replay feasibility comes from the measured harvester voltage
    cell.feasibility_pct = 100.0 * static_cast<double>(above) / static_cast<double>(trace.size());
    if (trace.gain_db) {
        const double per_antenna = cfg.calibration.to_power_dbm(*trace.gain_db);
        cell.per_antenna_dbm = per_antenna;
        const double total = combine_equal_sources(per_antenna, cfg.geometry.size());
        cell.total_dbm = total;
        cell.overall_efficiency_ppm = cell.mean_dc_w / dbm_to_watt(total) * 1e6;
    }

    const std::uint64_t mc_seed = derive_seed(cfg.seed, "replay-mc");
    for (McuMode mode : cfg.mcu_modes) {
        cell.response.emplace_back(
            mode, monte_carlo_response(trace, device_for_mode(cfg, mode), cfg.n_trials, mc_seed));
    }

    SweepReport report;
    report.n_antennas = cfg.geometry.size();
    report.duration_s = trace.duration_s();
    report.n_trials = cfg.n_trials;
    report.seed = cfg.seed;
    report.cells.push_back(std::move(cell));
    return report;
}

}  // namespace wptsim
