#ifndef WPTSIM_END_DEVICE_HPP
#define WPTSIM_END_DEVICE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wptsim/errors.hpp"
#include "wptsim/harvester.hpp"

namespace wptsim {

/// MCU supply-current model. `ideal` draws nothing below the activation
/// threshold; `realistic` draws a few microwatts even while asleep, linearly
/// interpolated from measured (voltage, power) points. Above the threshold
/// both draw the configured active power.
struct McuLoadCurve {
    enum class Kind { ideal, realistic };
    struct Point {
        double v;
        double p_w;
    };

    Kind kind = Kind::realistic;
    std::vector<Point> points;  // sub-threshold curve, monotone in v

    static McuLoadCurve ideal();
    /// Placeholder sub-threshold curve consistent with a sleeping MCU that
    /// draws single-digit microwatts; replace with measured data when
    /// available.
    static McuLoadCurve default_realistic();

    void validate() const;
    /// Sub-threshold draw at voltage v (0 for the ideal model).
    double subthreshold_power_w(double v) const;
};

struct EndDeviceConfig {
    double c_b_f = 100e-6;
    double v_mcu_th_v = 1.75;
    double v_bod_v = 1.55;
    std::size_t pilot_bytes = 10;
    double baud_bit_s = 1000.0;
    double p_active_w = 380e-6;
    double v_supply_nominal_v = 1.8;
    double lo_offset_hz = 512e3;  // informational: backscatter subcarrier offset
    McuLoadCurve mcu_load = McuLoadCurve::default_realistic();

    void validate() const;
};

struct PilotBudget {
    double duration_s;
    double energy_j;
};

/// Minimum buffer capacitance that carries the MCU from the activation
/// threshold down to brown-out while spending e_mcu: 2*e/(v_th^2 - v_bod^2).
double size_buffer(double e_mcu_j, double v_th_v, double v_bod_v);

/// Time and energy to backscatter the pilot: 8*bytes/baud at the active draw.
PilotBudget pilot_energy(const EndDeviceConfig& cfg);

/// Memoryless MCU draw at voltage v: the sub-threshold curve below v_th and
/// p_active at or above it. The stateful simulation adds hysteresis on top
/// (an MCU that woke at v_th keeps running down to v_bod).
double mcu_power(const McuLoadCurve& curve, double v, double v_th_v, double p_active_w);

enum class BufferStepKind {
    clamped_empty,   // update would go negative: buffer fully depleted, v = 0
    hold,            // p_b > 0 but v_eh <= v_b: harvester feeds the load, buffer unchanged
    charge_limited,  // energy update would exceed v_eh: buffer charges to v_eh
    energy_update,   // v'^2 = v^2 + 2 p_b dt / c_b
};

struct BufferStepResult {
    double v_b_sq_v2;  // primary state: squared buffer voltage
    double v_b_v;      // sqrt of the above
    BufferStepKind kind;
};

/// One step of the buffer-voltage recurrence. The squared voltage is the
/// primary state variable: the energy update is then a single addition and
/// the bookkeeping identity 0.5*c*(v_n^2 - v_{n-1}^2) = p_b*dt holds to the
/// last representable bit on energy_update steps (deriving v^2 from a stored
/// voltage would lose ~1e-9 of it to sqrt rounding). The buffer cannot be
/// charged above the harvester output voltage, so a charging step that would
/// overshoot v_eh is capped there instead.
BufferStepResult advance_buffer_energy(double v_b_sq_v2, double p_b_w, double v_eh_v, double dt_s,
                                       double c_b_f);

/// Voltage-domain convenience wrapper around advance_buffer_energy.
BufferStepResult advance_buffer_voltage(double v_b_v, double p_b_w, double v_eh_v, double dt_s,
                                        double c_b_f);

struct BufferState {
    double v_b_v = 0.0;
    double v_b_sq_v2 = 0.0;  // primary recurrence state; v_b_v = sqrt(v_b_sq_v2)
    double t_s = 0.0;
    bool mcu_active = false;
    double pilot_progress_s = 0.0;
};

struct DeviceEvents {
    std::optional<double> woke_at_s;
    std::optional<double> pilot_sent_at_s;
    std::vector<double> brownouts_s;

    /// Response time: wake-up plus a completed pilot transmission.
    std::optional<double> response_time_s() const { return pilot_sent_at_s; }
};

/// Advances one device sample: subtracts the MCU draw from the harvested
/// power, updates the buffer voltage, then the activation state (wake at
/// v_mcu_th, brown-out below v_bod resets pilot progress).
BufferState step_buffer(const BufferState& state, double p_eh_w, double v_eh_v, double dt_s,
                        const EndDeviceConfig& cfg);

struct DeviceSimResult {
    std::vector<BufferState> trajectory;  // initial state plus one entry per step
    DeviceEvents events;
};

namespace detail {

struct EventTracker {
    const EndDeviceConfig& cfg;
    double pilot_duration_s;
    DeviceEvents events;

    void observe_initial(const BufferState& state) {
        if (state.v_b_v >= cfg.v_mcu_th_v) events.woke_at_s = state.t_s;
        if (state.mcu_active && state.pilot_progress_s >= pilot_duration_s)
            events.pilot_sent_at_s = state.t_s;
    }

    void observe(const BufferState& prev, const BufferState& next) {
        if (!events.woke_at_s && next.v_b_v >= cfg.v_mcu_th_v) events.woke_at_s = next.t_s;
        if (prev.mcu_active && !next.mcu_active) events.brownouts_s.push_back(next.t_s);
        if (!events.pilot_sent_at_s && next.mcu_active && next.pilot_progress_s >= pilot_duration_s)
            events.pilot_sent_at_s = next.t_s;
    }
};

}  // namespace detail

/// Non-owning view of a harvest trace (or a suffix of one).
struct HarvestView {
    std::span<const double> p_eh_w;
    std::span<const double> v_eh_v;
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;

    HarvestView() = default;
    HarvestView(const HarvestTrace& trace)
        : p_eh_w(trace.p_eh_w), v_eh_v(trace.v_eh_v), sample_rate_hz(trace.sample_rate_hz),
          start_time_s(trace.start_time_s) {}
};

/// Core driver: runs the recurrence over the whole harvest trace with
/// dt = 1/sample_rate and calls `observer(state)` after every step (and once
/// for the initial state). Kept in the header so callers that only need
/// aggregates avoid materializing trajectories.
template <typename Observer>
DeviceEvents run_device_simulation(const HarvestView& harvest, const EndDeviceConfig& cfg,
                                   double start_v, Observer&& observer) {
    cfg.validate();
    if (harvest.p_eh_w.empty()) throw InvalidArgument("simulate_device: empty harvest trace");
    if (harvest.v_eh_v.size() != harvest.p_eh_w.size())
        throw InvalidArgument("simulate_device: harvest trace field lengths disagree");
    if (!(harvest.sample_rate_hz > 0.0))
        throw InvalidArgument("simulate_device: sample rate must be positive");
    if (!(start_v >= 0.0 && start_v <= cfg.v_mcu_th_v))
        throw InvalidArgument("simulate_device: start voltage must lie in [0, v_mcu_th]");

    const double dt = 1.0 / harvest.sample_rate_hz;
    detail::EventTracker tracker{cfg, pilot_energy(cfg).duration_s, {}};

    BufferState state;
    state.v_b_v = start_v;
    state.v_b_sq_v2 = start_v * start_v;
    state.t_s = harvest.start_time_s;
    state.mcu_active = start_v >= cfg.v_mcu_th_v;
    tracker.observe_initial(state);
    observer(state);

    for (std::size_t i = 0; i < harvest.p_eh_w.size(); ++i) {
        const BufferState next = step_buffer(state, harvest.p_eh_w[i], harvest.v_eh_v[i], dt, cfg);
        tracker.observe(state, next);
        observer(next);
        state = next;
    }
    return tracker.events;
}

/// Full trajectory variant (wake, pilot and brown-out events included).
DeviceSimResult simulate_device(const HarvestView& harvest, const EndDeviceConfig& cfg,
                                double start_v);

/// Events only; no trajectory storage.
DeviceEvents simulate_device_events(const HarvestView& harvest, const EndDeviceConfig& cfg,
                                    double start_v);

/// Writes `t_s,v_b_v,mcu_active` rows.
void write_trajectory_csv(const std::vector<BufferState>& trajectory, std::ostream& out);

}  // namespace wptsim

#endif
