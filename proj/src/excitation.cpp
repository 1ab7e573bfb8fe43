#include "wptsim/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include "wptsim/errors.hpp"
#include "wptsim/rng.hpp"

namespace wptsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const char* strategy_name(Strategy s) {
    return s == Strategy::single_tone ? "single" : "multi";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "single") return Strategy::single_tone;
    if (name == "multi") return Strategy::multi_tone;
    throw InvalidArgument("unknown strategy '" + std::string(name) + "', expected single|multi");
}

double ExcitationPlan::max_frequency_offset_hz() const {
    double m = 0.0;
    for (double f : frequency_offsets_hz) m = std::max(m, std::abs(f));
    return m;
}

void ExcitationPlan::validate() const {
    const std::size_t n = n_antennas();
    if (n == 0) throw InvalidArgument("excitation plan has no antennas");
    if (frequency_offsets_hz.size() != n || phases_rad.size() != n)
        throw InvalidArgument("excitation plan: per-antenna field sizes disagree");
    if (epoch_start_times_s.empty()) throw InvalidArgument("excitation plan has no phase epochs");
    for (std::size_t e = 0; e + 1 < epoch_start_times_s.size(); ++e) {
        if (!(epoch_start_times_s[e] < epoch_start_times_s[e + 1]))
            throw InvalidArgument("excitation plan: dwell boundaries must be strictly increasing");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!(amplitudes_sqrt_w[k] >= 0.0))
            throw InvalidArgument("excitation plan: amplitudes must be non-negative");
        if (phases_rad[k].size() != n_epochs())
            throw InvalidArgument("excitation plan: phase schedule length must match epoch count");
        for (double phi : phases_rad[k]) {
            if (!(phi >= 0.0 && phi < kTwoPi))
                throw InvalidArgument("excitation plan: phases must lie in [0, 2*pi)");
        }
    }
}

ExcitationPlan adaptive_single_tone_plan(std::size_t n_antennas, double amplitude_sqrt_w,
                                         double dwell_s, double duration_s, std::uint64_t seed) {
    if (n_antennas == 0) throw InvalidArgument("adaptive_single_tone_plan: need antennas");
    if (!(dwell_s > 0.0)) throw InvalidArgument("adaptive_single_tone_plan: dwell must be positive");
    if (!(duration_s >= dwell_s))
        throw InvalidArgument("adaptive_single_tone_plan: duration must cover at least one dwell");

    const auto n_epochs = static_cast<std::size_t>(std::ceil(duration_s / dwell_s - 1e-12));
    ExcitationPlan plan;
    plan.amplitudes_sqrt_w.assign(n_antennas, amplitude_sqrt_w);
    plan.frequency_offsets_hz.assign(n_antennas, 0.0);
    plan.epoch_start_times_s.reserve(n_epochs);
    for (std::size_t e = 0; e < n_epochs; ++e)
        plan.epoch_start_times_s.push_back(static_cast<double>(e) * dwell_s);
    plan.phases_rad.assign(n_antennas, std::vector<double>(n_epochs, 0.0));
    Rng rng(seed);
    // epoch-major draw order: all antennas re-draw together at each boundary
    for (std::size_t e = 0; e < n_epochs; ++e) {
        for (std::size_t k = 0; k < n_antennas; ++k) plan.phases_rad[k][e] = rng.uniform_phase();
    }
    plan.validate();
    return plan;
}

ExcitationPlan multi_tone_plan(std::size_t n_antennas, double amplitude_sqrt_w, double spacing_hz,
                               std::uint64_t seed) {
    if (n_antennas == 0) throw InvalidArgument("multi_tone_plan: need antennas");
    if (!(spacing_hz > 0.0)) throw InvalidArgument("multi_tone_plan: spacing must be positive");

    ExcitationPlan plan;
    plan.amplitudes_sqrt_w.assign(n_antennas, amplitude_sqrt_w);
    plan.frequency_offsets_hz.reserve(n_antennas);
    for (std::size_t k = 0; k < n_antennas; ++k)
        plan.frequency_offsets_hz.push_back(static_cast<double>(k) * spacing_hz);
    plan.epoch_start_times_s = {0.0};
    plan.phases_rad.assign(n_antennas, std::vector<double>(1, 0.0));
    Rng rng(seed);
    for (std::size_t k = 0; k < n_antennas; ++k) plan.phases_rad[k][0] = rng.uniform_phase();
    plan.validate();
    return plan;
}

double PowerEnvelope::mean_w() const {
    if (samples_w.empty()) throw InvalidArgument("empty envelope has no mean");
    double acc = 0.0;
    for (double s : samples_w) acc += s;
    return acc / static_cast<double>(samples_w.size());
}

void PowerEnvelope::validate() const {
    if (!(sample_rate_hz > 0.0)) throw ValidationError("envelope sample rate must be positive");
    for (double s : samples_w) {
        if (!std::isfinite(s) || s < 0.0)
            throw ValidationError("envelope samples must be finite and non-negative");
    }
}

namespace {

// Epoch lookup for monotonically increasing sample times.
class EpochCursor {
  public:
    explicit EpochCursor(const std::vector<double>& starts) : starts_(starts) {}

    std::size_t at(double t) {
        while (index_ + 1 < starts_.size() && t >= starts_[index_ + 1]) ++index_;
        return index_;
    }

  private:
    const std::vector<double>& starts_;
    std::size_t index_ = 0;
};

bool is_uniform_tone_grid(const ExcitationPlan& plan, double& spacing_out) {
    if (plan.n_epochs() != 1 || plan.n_antennas() < 2) return false;
    const double base = plan.frequency_offsets_hz[0];
    const double spacing = plan.frequency_offsets_hz[1] - base;
    if (spacing == 0.0) return false;
    for (std::size_t k = 0; k < plan.n_antennas(); ++k) {
        if (plan.frequency_offsets_hz[k] != base + static_cast<double>(k) * spacing) return false;
    }
    spacing_out = spacing;
    return true;
}

bool all_offsets_zero(const ExcitationPlan& plan) {
    return std::all_of(plan.frequency_offsets_hz.begin(), plan.frequency_offsets_hz.end(),
                       [](double f) { return f == 0.0; });
}

}  // namespace

PowerEnvelope synthesize_envelope_range(const ExcitationPlan& plan,
                                        const ChannelRealization& channel,
                                        std::uint64_t first_sample_index, std::size_t n_samples,
                                        double sample_rate_hz) {
    plan.validate();
    if (channel.size() != plan.n_antennas())
        throw InvalidArgument("synthesize_envelope: plan and channel antenna counts differ");
    if (!(sample_rate_hz > 0.0))
        throw InvalidArgument("synthesize_envelope: sample rate must be positive");
    if (sample_rate_hz < 4.0 * plan.max_frequency_offset_hz())
        throw InvalidArgument("synthesize_envelope: sample rate below 4x max frequency offset");

    const std::size_t n_ant = plan.n_antennas();
    PowerEnvelope env;
    env.sample_rate_hz = sample_rate_hz;
    env.start_time_s = static_cast<double>(first_sample_index) / sample_rate_hz;
    env.samples_w.resize(n_samples);

    // Per-antenna phasor coefficient for a fixed epoch.
    const auto coefficient = [&](std::size_t k, std::size_t epoch) {
        return plan.amplitudes_sqrt_w[k] * channel.gains[k] *
               std::polar(1.0, plan.phases_rad[k][epoch]);
    };

    double spacing = 0.0;
    if (all_offsets_zero(plan)) {
        // Single-tone: the envelope is constant within each phase epoch.
        EpochCursor cursor(plan.epoch_start_times_s);
        std::size_t current_epoch = static_cast<std::size_t>(-1);
        double level = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double t = static_cast<double>(first_sample_index + i) / sample_rate_hz;
            const std::size_t e = cursor.at(t);
            if (e != current_epoch) {
                std::complex<double> acc{0.0, 0.0};
                for (std::size_t k = 0; k < n_ant; ++k) acc += coefficient(k, e);
                level = std::norm(acc);
                current_epoch = e;
            }
            env.samples_w[i] = level;
        }
    } else if (is_uniform_tone_grid(plan, spacing)) {
        // Uniform frequency grid: sum_k c_k z^k with z = exp(j 2 pi spacing t),
        // evaluated by Horner. The common offset_0 rotation has unit magnitude
        // and drops out of |.|^2.
        std::vector<std::complex<double>> coef(n_ant);
        for (std::size_t k = 0; k < n_ant; ++k) coef[k] = coefficient(k, 0);
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double t = static_cast<double>(first_sample_index + i) / sample_rate_hz;
            const std::complex<double> z = std::polar(1.0, kTwoPi * spacing * t);
            std::complex<double> acc = coef[n_ant - 1];
            for (std::size_t k = n_ant - 1; k-- > 0;) acc = acc * z + coef[k];
            env.samples_w[i] = std::norm(acc);
        }
    } else {
        EpochCursor cursor(plan.epoch_start_times_s);
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double t = static_cast<double>(first_sample_index + i) / sample_rate_hz;
            const std::size_t e = cursor.at(t);
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t k = 0; k < n_ant; ++k) {
                const double arg = kTwoPi * plan.frequency_offsets_hz[k] * t + plan.phases_rad[k][e];
                acc += plan.amplitudes_sqrt_w[k] * channel.gains[k] * std::polar(1.0, arg);
            }
            env.samples_w[i] = std::norm(acc);
        }
    }
    return env;
}

PowerEnvelope synthesize_envelope(const ExcitationPlan& plan, const ChannelRealization& channel,
                                  double duration_s, double sample_rate_hz) {
    const auto n = static_cast<std::int64_t>(std::llround(duration_s * sample_rate_hz));
    if (n < 1)
        throw InvalidArgument("synthesize_envelope: duration shorter than one envelope sample");
    return synthesize_envelope_range(plan, channel, 0, static_cast<std::size_t>(n),
                                     sample_rate_hz);
}

void write_envelope_csv(const PowerEnvelope& env, std::ostream& out) {
    out << "t_s,p_rf_w\n";
    char buf[64];
    for (std::size_t i = 0; i < env.samples_w.size(); ++i) {
        const double t = env.start_time_s + static_cast<double>(i) / env.sample_rate_hz;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, env.samples_w[i]);
        out << buf;
    }
}

}  // namespace wptsim
