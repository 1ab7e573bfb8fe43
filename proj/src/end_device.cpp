#include "wptsim/end_device.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wptsim/errors.hpp"

namespace wptsim {

McuLoadCurve McuLoadCurve::ideal() {
    McuLoadCurve c;
    c.kind = Kind::ideal;
    return c;
}

McuLoadCurve McuLoadCurve::default_realistic() {
    McuLoadCurve c;
    c.kind = Kind::realistic;
    c.points = {{0.0, 0.0}, {0.5, 1e-6}, {1.0, 3e-6}, {1.55, 6e-6}, {1.75, 8e-6}};
    return c;
}

void McuLoadCurve::validate() const {
    if (kind == Kind::ideal) return;
    if (points.empty()) throw InvalidArgument("McuLoadCurve: realistic curve needs points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].p_w >= 0.0))
            throw InvalidArgument("McuLoadCurve: power must be non-negative");
        if (i > 0 && !(points[i - 1].v < points[i].v))
            throw InvalidArgument("McuLoadCurve: voltages must be strictly increasing");
    }
}

double McuLoadCurve::subthreshold_power_w(double v) const {
    if (kind == Kind::ideal) return 0.0;
    if (v <= points.front().v) return points.front().p_w;
    if (v >= points.back().v) return points.back().p_w;
    auto hi = std::upper_bound(points.begin(), points.end(), v,
                               [](double value, const Point& p) { return value < p.v; });
    const Point& b = *hi;
    const Point& a = *(hi - 1);
    const double w = (v - a.v) / (b.v - a.v);
    return a.p_w + w * (b.p_w - a.p_w);
}

void EndDeviceConfig::validate() const {
    if (!(c_b_f > 0.0)) throw InvalidArgument("device: buffer capacitance must be positive");
    if (!(v_bod_v > 0.0 && v_bod_v < v_mcu_th_v && v_mcu_th_v <= 2.0))
        throw InvalidArgument("device: need 0 < v_bod < v_mcu_th <= 2.0");
    if (!(baud_bit_s > 0.0)) throw InvalidArgument("device: baud rate must be positive");
    if (!(p_active_w >= 0.0)) throw InvalidArgument("device: active power must be non-negative");
    mcu_load.validate();
}

double size_buffer(double e_mcu_j, double v_th_v, double v_bod_v) {
    if (!(e_mcu_j >= 0.0)) throw InvalidArgument("size_buffer: energy must be non-negative");
    if (!(v_th_v > v_bod_v && v_bod_v > 0.0))
        throw InvalidArgument("size_buffer: need v_th > v_bod > 0");
    return 2.0 * e_mcu_j / (v_th_v * v_th_v - v_bod_v * v_bod_v);
}

PilotBudget pilot_energy(const EndDeviceConfig& cfg) {
    const double duration = 8.0 * static_cast<double>(cfg.pilot_bytes) / cfg.baud_bit_s;
    return {duration, duration * cfg.p_active_w};
}

double mcu_power(const McuLoadCurve& curve, double v, double v_th_v, double p_active_w) {
    if (!(v >= 0.0)) throw InvalidArgument("mcu_power: voltage must be non-negative");
    if (v >= v_th_v) return p_active_w;
    return curve.subthreshold_power_w(v);
}

BufferStepResult advance_buffer_energy(double v_b_sq_v2, double p_b_w, double v_eh_v, double dt_s,
                                       double c_b_f) {
    if (!(dt_s > 0.0)) throw InvalidArgument("advance_buffer_energy: dt must be positive");
    if (!(c_b_f > 0.0)) throw InvalidArgument("advance_buffer_energy: capacitance must be positive");

    const double v_b_v = std::sqrt(v_b_sq_v2);
    const double arg = v_b_sq_v2 + 2.0 * p_b_w * dt_s / c_b_f;
    if (arg < 0.0) return {0.0, 0.0, BufferStepKind::clamped_empty};
    if (p_b_w > 0.0 && v_eh_v <= v_b_v) return {v_b_sq_v2, v_b_v, BufferStepKind::hold};
    const double v_next = std::sqrt(arg);
    if (p_b_w > 0.0 && v_next > v_eh_v)
        return {v_eh_v * v_eh_v, v_eh_v, BufferStepKind::charge_limited};
    return {arg, v_next, BufferStepKind::energy_update};
}

BufferStepResult advance_buffer_voltage(double v_b_v, double p_b_w, double v_eh_v, double dt_s,
                                        double c_b_f) {
    if (!(v_b_v >= 0.0)) throw InvalidArgument("advance_buffer_voltage: voltage must be non-negative");
    return advance_buffer_energy(v_b_v * v_b_v, p_b_w, v_eh_v, dt_s, c_b_f);
}

BufferState step_buffer(const BufferState& state, double p_eh_w, double v_eh_v, double dt_s,
                        const EndDeviceConfig& cfg) {
    const double p_mcu = state.mcu_active
                             ? cfg.p_active_w
                             : cfg.mcu_load.subthreshold_power_w(state.v_b_v);
    const double p_b = p_eh_w - p_mcu;

    BufferState next;
    const BufferStepResult step =
        advance_buffer_energy(state.v_b_sq_v2, p_b, v_eh_v, dt_s, cfg.c_b_f);
    next.v_b_sq_v2 = step.v_b_sq_v2;
    next.v_b_v = step.v_b_v;
    next.t_s = state.t_s + dt_s;

    const double pilot_duration = pilot_energy(cfg).duration_s;
    if (state.mcu_active) {
        if (next.v_b_v < cfg.v_bod_v) {
            // brown-out: execution halts, the pilot transmission is lost
            next.mcu_active = false;
            next.pilot_progress_s = 0.0;
        } else {
            next.mcu_active = true;
            next.pilot_progress_s = std::min(state.pilot_progress_s + dt_s, pilot_duration);
        }
    } else {
        next.mcu_active = next.v_b_v >= cfg.v_mcu_th_v;
        next.pilot_progress_s = 0.0;
    }
    return next;
}

DeviceSimResult simulate_device(const HarvestView& harvest, const EndDeviceConfig& cfg,
                                double start_v) {
    DeviceSimResult result;
    result.trajectory.reserve(harvest.p_eh_w.size() + 1);
    result.events = run_device_simulation(
        harvest, cfg, start_v, [&](const BufferState& s) { result.trajectory.push_back(s); });
    return result;
}

DeviceEvents simulate_device_events(const HarvestView& harvest, const EndDeviceConfig& cfg,
                                    double start_v) {
    return run_device_simulation(harvest, cfg, start_v, [](const BufferState&) {});
}

void write_trajectory_csv(const std::vector<BufferState>& trajectory, std::ostream& out) {
    out << "t_s,v_b_v,mcu_active\n";
    char buf[80];
    for (const auto& s : trajectory) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", s.t_s, s.v_b_v, s.mcu_active ? 1 : 0);
        out << buf;
    }
}

}  // namespace wptsim
