#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wptsim/end_device.hpp"
#include "wptsim/errors.hpp"
#include "wptsim/rng.hpp"

using namespace wptsim;

namespace {

HarvestTrace constant_trace(double p_eh_w, double v_eh_v, double duration_s, double rate_hz) {
    HarvestTrace trace;
    trace.sample_rate_hz = rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    trace.p_eh_w.assign(n, p_eh_w);
    trace.v_eh_v.assign(n, v_eh_v);
    return trace;
}

EndDeviceConfig ideal_device() {
    EndDeviceConfig cfg;
    cfg.mcu_load = McuLoadCurve::ideal();
    return cfg;
}

}  // namespace

TEST_CASE("buffer sizing formula") {
    const double c = size_buffer(30.4e-6, 1.75, 1.55);
    CHECK(c == 2.0 * 30.4e-6 / (1.75 * 1.75 - 1.55 * 1.55));
    CHECK(c >= 92.0e-6);
    CHECK(c <= 92.2e-6);
    CHECK(size_buffer(0.0, 1.75, 1.55) == 0.0);
    CHECK_THROWS_AS(size_buffer(30.4e-6, 1.75, 1.75), InvalidArgument);
    CHECK_THROWS_AS(size_buffer(-1e-6, 1.75, 1.55), InvalidArgument);
}

TEST_CASE("pilot budget") {
    EndDeviceConfig cfg;
    const auto budget = pilot_energy(cfg);
    CHECK(budget.duration_s == 0.08);  // 8 * 10 bytes / 1 kbit/s
    CHECK(budget.energy_j == doctest::Approx(30.4e-6).epsilon(1e-15));

    cfg.pilot_bytes = 0;
    CHECK(pilot_energy(cfg).duration_s == 0.0);
    CHECK(pilot_energy(cfg).energy_j == 0.0);

    cfg.pilot_bytes = 20;
    CHECK(pilot_energy(cfg).duration_s == doctest::Approx(0.16).epsilon(1e-15));
    CHECK(pilot_energy(cfg).energy_j == doctest::Approx(60.8e-6).epsilon(1e-15));
}

TEST_CASE("mcu load models") {
    const auto ideal = McuLoadCurve::ideal();
    CHECK(mcu_power(ideal, 1.0, 1.75, 380e-6) == 0.0);
    CHECK(mcu_power(ideal, 1.8, 1.75, 380e-6) == 380e-6);
    CHECK(mcu_power(ideal, 1.75, 1.75, 380e-6) == 380e-6);

    const auto realistic = McuLoadCurve::default_realistic();
    CHECK(mcu_power(realistic, 1.0, 1.75, 380e-6) == 3e-6);
    CHECK(mcu_power(realistic, 0.75, 1.75, 380e-6) == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(mcu_power(realistic, 1.75, 1.75, 380e-6) == 380e-6);  // activation step
    CHECK(mcu_power(realistic, 1.7499, 1.75, 380e-6) < 8.01e-6);
}

TEST_CASE("buffer voltage recurrence cases") {
    // energy update: v' = sqrt(1 + 8e-4)
    auto step = advance_buffer_voltage(1.0, 10e-6, 2.0, 4e-3, 100e-6);
    CHECK(step.kind == BufferStepKind::energy_update);
    CHECK(step.v_b_v == std::sqrt(1.0 + 8e-4));
    CHECK(step.v_b_v == doctest::Approx(1.00040).epsilon(1e-6));

    // hold: positive balance but the harvester voltage cannot raise the buffer
    step = advance_buffer_voltage(0.5, 1e-6, 0.4, 4e-3, 100e-6);
    CHECK(step.kind == BufferStepKind::hold);
    CHECK(step.v_b_v == 0.5);

    // clamp: discharge would push the squared voltage negative
    step = advance_buffer_voltage(0.01, -10e-6, 2.0, 4e-3, 100e-6);
    CHECK(step.kind == BufferStepKind::clamped_empty);
    CHECK(step.v_b_v == 0.0);

    // charge limited: a single step cannot overshoot the harvester voltage
    step = advance_buffer_voltage(1.0, 10e-3, 1.2, 4e-3, 100e-6);
    CHECK(step.kind == BufferStepKind::charge_limited);
    CHECK(step.v_b_v == 1.2);

    CHECK_THROWS_AS(advance_buffer_voltage(1.0, 0.0, 2.0, 0.0, 100e-6), InvalidArgument);
    CHECK_THROWS_AS(advance_buffer_voltage(1.0, 0.0, 2.0, 1e-3, 0.0), InvalidArgument);
}

TEST_CASE("per-step energy bookkeeping") {
    // random steps across the realistic parameter envelope
    Rng rng(2024);
    int update_steps = 0;
    for (int i = 0; i < 20000; ++i) {
        const double v = 2.0 * rng.uniform();
        const double v_sq = v * v;
        const double p_b = (rng.uniform() - 0.5) * 2e-3;
        const double v_eh = 2.0 * rng.uniform();
        const double dt = 1e-4 + rng.uniform() * 1e-2;
        const double c = 1e-6 + rng.uniform() * 1e-3;
        const auto step = advance_buffer_energy(v_sq, p_b, v_eh, dt, c);
        switch (step.kind) {
            case BufferStepKind::energy_update: {
                ++update_steps;
                const double lhs = 0.5 * c * (step.v_b_sq_v2 - v_sq);
                const double rhs = p_b * dt;
                const double quantum =
                    0.5 * c * (std::nextafter(std::max(v_sq, step.v_b_sq_v2), 4.0) -
                               std::max(v_sq, step.v_b_sq_v2));
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs) + quantum);
                break;
            }
            case BufferStepKind::hold:
                CHECK(step.v_b_sq_v2 == v_sq);
                break;
            case BufferStepKind::clamped_empty:
                CHECK(step.v_b_v == 0.0);
                CHECK(v_sq + 2.0 * p_b * dt / c < 0.0);
                break;
            case BufferStepKind::charge_limited:
                CHECK(step.v_b_v == v_eh);
                break;
        }
    }
    CHECK(update_steps > 1000);
}

TEST_CASE("buffer never charges above the harvester voltage") {
    Rng rng(555);
    for (int run = 0; run < 50; ++run) {
        HarvestTrace trace;
        trace.sample_rate_hz = 250.0;
        double v_eh_max = 0.0;
        for (int i = 0; i < 400; ++i) {
            trace.p_eh_w.push_back(rng.uniform() * 2e-3);
            const double v_eh = rng.uniform() * 2.0;
            trace.v_eh_v.push_back(v_eh);
            v_eh_max = std::max(v_eh_max, v_eh);
        }
        const double start_v = rng.uniform() * 1.5;
        const double bound = std::max(v_eh_max, start_v);
        run_device_simulation(trace, ideal_device(), start_v,
                              [&](const BufferState& s) { CHECK(s.v_b_v <= bound); });
    }
}

TEST_CASE("constant charge matches the closed-form wake time") {
    const auto cfg = ideal_device();
    const auto trace = constant_trace(10e-6, 2.0, 30.0, 250.0);
    const auto events = simulate_device_events(trace, cfg, 0.0);
    REQUIRE(events.woke_at_s.has_value());
    const double expected = cfg.c_b_f * cfg.v_mcu_th_v * cfg.v_mcu_th_v / (2.0 * 10e-6);
    CHECK(expected == doctest::Approx(15.3125));
    CHECK(std::abs(*events.woke_at_s - expected) <= 1.0 / 250.0);
}

TEST_CASE("wake time is proportional to the buffer capacitance") {
    const double dt = 1e-3;
    double woke[3] = {};
    const double caps[3] = {50e-6, 100e-6, 200e-6};
    for (int i = 0; i < 3; ++i) {
        auto cfg = ideal_device();
        cfg.c_b_f = caps[i];
        const auto events =
            simulate_device_events(constant_trace(20e-6, 2.0, 60.0, 1.0 / dt), cfg, 0.0);
        REQUIRE(events.woke_at_s.has_value());
        woke[i] = *events.woke_at_s;
    }
    CHECK(std::abs(woke[1] - 2.0 * woke[0]) <= 2.0 * dt);
    CHECK(std::abs(woke[2] - 2.0 * woke[1]) <= 2.0 * dt);
}

TEST_CASE("zero harvest leaves an ideal device idle and drains a realistic one") {
    const auto zero = constant_trace(0.0, 0.0, 5.0, 250.0);

    const auto idle = simulate_device(zero, ideal_device(), 1.0);
    CHECK(!idle.events.woke_at_s.has_value());
    CHECK(!idle.events.pilot_sent_at_s.has_value());
    CHECK(idle.trajectory.back().v_b_v == 1.0);

    EndDeviceConfig realistic;
    const auto drained = simulate_device(zero, realistic, 1.0);
    CHECK(drained.trajectory.back().v_b_v < 1.0);
    CHECK(!drained.events.woke_at_s.has_value());
}

TEST_CASE("pilot completes after wake within the energy window") {
    // active draw 380 uW against 10 uW harvest: 1.75 V .. 1.55 V lasts 89.2 ms,
    // longer than the 80 ms pilot
    const auto cfg = ideal_device();
    const auto trace = constant_trace(10e-6, 2.0, 30.0, 1000.0);
    const auto events = simulate_device_events(trace, cfg, 0.0);
    REQUIRE(events.woke_at_s.has_value());
    REQUIRE(events.pilot_sent_at_s.has_value());
    CHECK(*events.pilot_sent_at_s - *events.woke_at_s ==
          doctest::Approx(0.08).epsilon(0.026));  // 80 ms plus at most two steps
    const bool pilot_before_brownout =
        events.brownouts_s.empty() || events.brownouts_s.front() > *events.pilot_sent_at_s;
    CHECK(pilot_before_brownout);
}

TEST_CASE("default sizing lets the pilot finish on stored energy alone") {
    // charged to the threshold with no further harvest: 100 uF > 92 uF
    const auto cfg = ideal_device();
    const auto trace = constant_trace(0.0, 0.0, 1.0, 1000.0);
    const auto events = simulate_device_events(trace, cfg, cfg.v_mcu_th_v);
    REQUIRE(events.woke_at_s.has_value());
    CHECK(*events.woke_at_s == 0.0);
    REQUIRE(events.pilot_sent_at_s.has_value());
    CHECK(*events.pilot_sent_at_s == doctest::Approx(0.08).epsilon(0.026));
    if (!events.brownouts_s.empty())
        CHECK(events.brownouts_s.front() > *events.pilot_sent_at_s);
}

TEST_CASE("brown-out aborts and restarts the pilot") {
    EndDeviceConfig cfg = ideal_device();
    cfg.c_b_f = 50e-6;  // drains from 1.75 V to 1.55 V in 43 ms, under the 80 ms pilot
    HarvestTrace trace;
    trace.sample_rate_hz = 1000.0;
    const auto feed = [&](double p, double v, double seconds) {
        for (int i = 0; i < seconds * 1000; ++i) {
            trace.p_eh_w.push_back(p);
            trace.v_eh_v.push_back(v);
        }
    };
    feed(500e-6, 2.0, 0.16);  // charge up and wake at ~0.155 s
    feed(0.0, 0.0, 0.1);      // starve the MCU a few ms into the pilot
    feed(500e-6, 2.0, 1.0);   // recover and finish

    const auto events = simulate_device_events(trace, cfg, 0.0);
    REQUIRE(events.woke_at_s.has_value());
    REQUIRE(!events.brownouts_s.empty());
    REQUIRE(events.pilot_sent_at_s.has_value());
    CHECK(*events.woke_at_s < events.brownouts_s.front());
    CHECK(events.brownouts_s.front() < *events.pilot_sent_at_s);
}

TEST_CASE("mcu keeps running between brown-out and threshold") {
    const auto cfg = ideal_device();
    // enough to wake, then a trickle that cannot sustain the active draw
    HarvestTrace trace;
    trace.sample_rate_hz = 1000.0;
    for (int i = 0; i < 200; ++i) {
        trace.p_eh_w.push_back(2e-3);
        trace.v_eh_v.push_back(2.0);
    }
    for (int i = 0; i < 150; ++i) {
        trace.p_eh_w.push_back(10e-6);
        trace.v_eh_v.push_back(2.0);
    }
    const auto result = simulate_device(trace, cfg, 0.0);
    bool saw_active_below_threshold = false;
    for (const auto& s : result.trajectory) {
        if (s.mcu_active && s.v_b_v < cfg.v_mcu_th_v && s.v_b_v >= cfg.v_bod_v)
            saw_active_below_threshold = true;
    }
    CHECK(saw_active_below_threshold);
}

TEST_CASE("ideal MCU never responds later than the realistic one") {
    Rng rng(808);
    for (int run = 0; run < 10; ++run) {
        HarvestTrace trace;
        trace.sample_rate_hz = 250.0;
        for (int i = 0; i < 6000; ++i) {
            const bool on = rng.uniform() < 0.6;
            trace.p_eh_w.push_back(on ? 40e-6 * rng.uniform() : 0.0);
            trace.v_eh_v.push_back(2.0);
        }
        EndDeviceConfig realistic;
        const auto slow = simulate_device_events(trace, realistic, 0.0);
        const auto fast = simulate_device_events(trace, ideal_device(), 0.0);
        if (slow.pilot_sent_at_s) {
            REQUIRE(fast.pilot_sent_at_s.has_value());
            CHECK(*fast.pilot_sent_at_s <= *slow.pilot_sent_at_s);
        }
    }
}

TEST_CASE("charging is capped at the harvester voltage") {
    auto cfg = ideal_device();
    const auto trace = constant_trace(1e-3, 1.6, 2.0, 1000.0);
    const auto result = simulate_device(trace, cfg, 0.0);
    for (const auto& s : result.trajectory) CHECK(s.v_b_v <= 1.6);
    CHECK(result.trajectory.back().v_b_v == 1.6);
    CHECK(!result.events.woke_at_s.has_value());  // 1.6 V never reaches the 1.75 V threshold
}

TEST_CASE("simulation input validation") {
    const auto cfg = ideal_device();
    HarvestTrace empty;
    empty.sample_rate_hz = 250.0;
    CHECK_THROWS_AS(simulate_device_events(empty, cfg, 0.0), InvalidArgument);
    const auto trace = constant_trace(1e-6, 2.0, 1.0, 250.0);
    CHECK_THROWS_AS(simulate_device_events(trace, cfg, 1.9), InvalidArgument);
    CHECK_THROWS_AS(simulate_device_events(trace, cfg, -0.1), InvalidArgument);
}

TEST_CASE("trajectory CSV export") {
    const auto result = simulate_device(constant_trace(10e-6, 2.0, 0.01, 1000.0),
                                        ideal_device(), 0.0);
    std::ostringstream out;
    write_trajectory_csv(result.trajectory, out);
    CHECK(out.str().rfind("t_s,v_b_v,mcu_active\n", 0) == 0);
}
