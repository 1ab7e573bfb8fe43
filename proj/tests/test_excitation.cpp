#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wptsim/errors.hpp"
#include "wptsim/excitation.hpp"
#include "wptsim/rng.hpp"

using namespace wptsim;

namespace {

ChannelRealization unit_gains(std::size_t n) {
    ChannelRealization ch;
    ch.gains.assign(n, {1.0, 0.0});
    return ch;
}

}  // namespace

TEST_CASE("adaptive single-tone plan structure") {
    const auto plan = adaptive_single_tone_plan(84, 0.1, 5.0, 1800.0, 42);
    CHECK(plan.n_antennas() == 84);
    CHECK(plan.n_epochs() == 360);  // 1800 s / 5 s
    CHECK(plan.epoch_start_times_s.front() == 0.0);
    CHECK(plan.epoch_start_times_s.back() == 1795.0);
    for (double f : plan.frequency_offsets_hz) CHECK(f == 0.0);
    for (const auto& phases : plan.phases_rad) {
        CHECK(phases.size() == 360);
        for (double phi : phases) CHECK((phi >= 0.0 && phi < 2.0 * std::numbers::pi));
    }

    const auto again = adaptive_single_tone_plan(84, 0.1, 5.0, 1800.0, 42);
    CHECK(plan.phases_rad == again.phases_rad);  // determinism contract

    CHECK_THROWS_AS(adaptive_single_tone_plan(0, 0.1, 5.0, 10.0, 1), InvalidArgument);
    CHECK_THROWS_AS(adaptive_single_tone_plan(4, 0.1, 0.0, 10.0, 1), InvalidArgument);
    CHECK_THROWS_AS(adaptive_single_tone_plan(4, 0.1, 5.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("multi-tone plan structure") {
    const auto plan = multi_tone_plan(84, 0.1, 100.0, 7);
    CHECK(plan.n_epochs() == 1);
    for (std::size_t k = 0; k < 84; ++k) CHECK(plan.frequency_offsets_hz[k] == 100.0 * double(k));
    CHECK(plan.max_frequency_offset_hz() == 8300.0);  // 84 carriers span 8.3 kHz

    const auto again = multi_tone_plan(84, 0.1, 100.0, 7);
    CHECK(plan.phases_rad == again.phases_rad);

    CHECK_THROWS_AS(multi_tone_plan(0, 0.1, 100.0, 1), InvalidArgument);
    CHECK_THROWS_AS(multi_tone_plan(4, 0.1, 0.0, 1), InvalidArgument);
}

TEST_CASE("single antenna gives a constant envelope for either strategy") {
    const auto ch = unit_gains(1);
    for (const auto& plan : {adaptive_single_tone_plan(1, 0.2, 5.0, 10.0, 3),
                             multi_tone_plan(1, 0.2, 100.0, 3)}) {
        const auto env = synthesize_envelope(plan, ch, 10.0, 1000.0);
        const auto [lo, hi] = std::minmax_element(env.samples_w.begin(), env.samples_w.end());
        CHECK(*hi - *lo <= 1e-12 * *hi);
        CHECK(*hi == doctest::Approx(0.04).epsilon(1e-12));  // a^2 |g|^2
    }
}

TEST_CASE("two equal tones beat with the closed-form envelope") {
    const double a = 0.05;
    const auto plan = multi_tone_plan(2, a, 100.0, 11);
    const auto ch = unit_gains(2);
    const auto env = synthesize_envelope(plan, ch, 0.04, 10000.0);  // 4 beat periods

    const double base = 2.0 * a * a;
    const double dphi = plan.phases_rad[1][0] - plan.phases_rad[0][0];
    for (std::size_t i = 0; i < env.samples_w.size(); ++i) {
        const double t = double(i) / 10000.0;
        const double expected = base * (1.0 + std::cos(2.0 * std::numbers::pi * 100.0 * t + dphi));
        CHECK(env.samples_w[i] == doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(env.mean_w() == doctest::Approx(base).epsilon(1e-9));
    const double peak = *std::max_element(env.samples_w.begin(), env.samples_w.end());
    CHECK(peak == doctest::Approx(2.0 * base).epsilon(1e-3));
}

TEST_CASE("aligned phases sum coherently") {
    ExcitationPlan plan;
    const std::size_t n = 5;
    plan.amplitudes_sqrt_w.assign(n, 0.3);
    plan.frequency_offsets_hz.assign(n, 0.0);
    plan.epoch_start_times_s = {0.0};
    plan.phases_rad.assign(n, std::vector<double>{0.0});
    const auto env = synthesize_envelope(plan, unit_gains(n), 0.01, 1000.0);
    for (double s : env.samples_w)
        CHECK(s == doctest::Approx(double(n * n) * 0.09).epsilon(1e-12));
}

TEST_CASE("time averages match the per-antenna power sum") {
    Rng rng(99);
    ChannelRealization ch;
    for (int k = 0; k < 84; ++k)
        ch.gains.push_back(std::polar(0.5 + rng.uniform(), rng.uniform_phase()));
    const double a = 0.01;
    double expected = 0.0;
    for (const auto& g : ch.gains) expected += a * a * std::norm(g);

    // multi-tone: orthogonality over one exact beat period
    const auto multi = multi_tone_plan(84, a, 100.0, 5);
    const auto menv = synthesize_envelope(multi, ch, 0.01, 100000.0);
    CHECK(menv.mean_w() == doctest::Approx(expected).epsilon(1e-9));

    // single-tone: uniform phase average over many dwells
    const auto single = adaptive_single_tone_plan(84, a, 1e-3, 20.0, 5);
    const auto senv = synthesize_envelope(single, ch, 20.0, 1000.0);
    CHECK(senv.mean_w() == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("multi-tone envelope is periodic in 1/spacing") {
    Rng rng(17);
    ChannelRealization ch;
    for (int k = 0; k < 84; ++k)
        ch.gains.push_back(std::polar(0.01 * (1.0 + rng.uniform()), rng.uniform_phase()));
    const auto plan = multi_tone_plan(84, 0.1, 100.0, 23);
    const auto env = synthesize_envelope(plan, ch, 0.03, 100000.0);
    const std::size_t period = 1000;  // 10 ms at 100 kHz
    for (std::size_t i = 0; i + period < env.samples_w.size(); i += 7)
        CHECK(env.samples_w[i + period] ==
              doctest::Approx(env.samples_w[i]).epsilon(1e-9));
}

TEST_CASE("single-tone envelope is piecewise constant between dwell boundaries") {
    Rng rng(4);
    ChannelRealization ch;
    for (int k = 0; k < 16; ++k)
        ch.gains.push_back(std::polar(0.3 + rng.uniform(), rng.uniform_phase()));
    // dwell of 0.25 s keeps every epoch boundary exactly representable
    const auto plan = adaptive_single_tone_plan(16, 0.1, 0.25, 2.5, 8);
    const auto env = synthesize_envelope(plan, ch, 2.5, 1000.0);
    REQUIRE(env.samples_w.size() == 2500);
    std::size_t changes = 0;
    for (std::size_t i = 1; i < env.samples_w.size(); ++i) {
        if (env.samples_w[i] != env.samples_w[i - 1]) {
            ++changes;
            CHECK(i % 250 == 0);  // only at 0.25 s boundaries
        }
    }
    CHECK(changes == 9);
}

TEST_CASE("peak envelope respects the triangle-inequality bound") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + rng.uniform_index(12);
        ChannelRealization ch;
        for (std::size_t k = 0; k < n; ++k)
            ch.gains.push_back(std::polar(rng.uniform(), rng.uniform_phase()));
        const double a = 0.1 + rng.uniform();
        const auto plan = rng.uniform() < 0.5
                              ? adaptive_single_tone_plan(n, a, 0.01, 0.1, seed)
                              : multi_tone_plan(n, a, 100.0, seed);
        const auto env = synthesize_envelope(plan, ch, 0.1, 50000.0);
        double bound = 0.0;
        for (const auto& g : ch.gains) bound += a * std::abs(g);
        bound *= bound;
        for (double s : env.samples_w) CHECK(s <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("chunked synthesis is bit-identical to a monolithic run") {
    Rng rng(31);
    ChannelRealization ch;
    for (int k = 0; k < 84; ++k)
        ch.gains.push_back(std::polar(0.2 + rng.uniform(), rng.uniform_phase()));

    for (const auto& plan : {multi_tone_plan(84, 0.05, 100.0, 2),
                             adaptive_single_tone_plan(84, 0.05, 0.004, 0.02, 2)}) {
        const auto whole = synthesize_envelope(plan, ch, 0.02, 100000.0);
        for (std::size_t split : std::initializer_list<std::size_t>{1, 137, 1000, 1999}) {
            const auto head = synthesize_envelope_range(plan, ch, 0, split, 100000.0);
            const auto tail = synthesize_envelope_range(plan, ch, split,
                                                        whole.samples_w.size() - split, 100000.0);
            for (std::size_t i = 0; i < split; ++i)
                CHECK(head.samples_w[i] == whole.samples_w[i]);
            for (std::size_t i = split; i < whole.samples_w.size(); ++i)
                CHECK(tail.samples_w[i - split] == whole.samples_w[i]);
        }
    }
}

TEST_CASE("synthesis input validation") {
    const auto plan = multi_tone_plan(4, 0.1, 100.0, 1);
    CHECK_THROWS_AS(synthesize_envelope(plan, unit_gains(3), 1.0, 10000.0), InvalidArgument);
    // rate below 4x the maximum offset (300 Hz) is undersampled
    CHECK_THROWS_AS(synthesize_envelope(plan, unit_gains(4), 1.0, 1000.0), InvalidArgument);
    CHECK_THROWS_AS(synthesize_envelope(plan, unit_gains(4), 1e-9, 10000.0), InvalidArgument);
}

TEST_CASE("envelope CSV export") {
    const auto env = synthesize_envelope(multi_tone_plan(2, 0.1, 100.0, 1), unit_gains(2),
                                         0.001, 10000.0);
    std::ostringstream out;
    write_envelope_csv(env, out);
    const std::string text = out.str();
    CHECK(text.rfind("t_s,p_rf_w\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}
