#ifndef WPTSIM_EXCITATION_HPP
#define WPTSIM_EXCITATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "wptsim/array_channel.hpp"

namespace wptsim {

/// The two measured initial-access excitation strategies.
enum class Strategy { single_tone, multi_tone };

const char* strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

/// Per-antenna excitation: one amplitude (sqrt-watt transmit scale) and one
/// frequency offset per antenna, plus a piecewise-constant phase schedule.
/// Phase epochs are global: every antenna re-draws at the same dwell
/// boundaries, and `phases[antenna][epoch]` holds the value for that epoch.
struct ExcitationPlan {
    std::vector<double> amplitudes_sqrt_w;
    std::vector<double> frequency_offsets_hz;
    std::vector<double> epoch_start_times_s;        // strictly increasing, first is 0
    std::vector<std::vector<double>> phases_rad;    // [antenna][epoch], values in [0, 2*pi)

    std::size_t n_antennas() const { return amplitudes_sqrt_w.size(); }
    std::size_t n_epochs() const { return epoch_start_times_s.size(); }
    double max_frequency_offset_hz() const;
    void validate() const;
};

/// Instantaneous received RF power at the device, sampled at `sample_rate`.
/// Sample i corresponds to absolute time (first_sample_index + i) / rate;
/// start_time_s records that origin so chunks can be laid end to end.
struct PowerEnvelope {
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;
    std::vector<double> samples_w;

    double mean_w() const;
    void validate() const;
};

/// All antennas on one frequency; each antenna's phase is an independent
/// uniform draw on [0, 2*pi), re-drawn simultaneously at every dwell boundary.
ExcitationPlan adaptive_single_tone_plan(std::size_t n_antennas, double amplitude_sqrt_w,
                                         double dwell_s, double duration_s, std::uint64_t seed);

/// Antenna k transmits at offset k * spacing with a phase drawn once per run:
/// the transmitters are frequency locked but their phase relation is an
/// arbitrary constant.
ExcitationPlan multi_tone_plan(std::size_t n_antennas, double amplitude_sqrt_w, double spacing_hz,
                               std::uint64_t seed);

/// Complex-baseband envelope power |sum_k a_k g_k exp(j(2 pi df_k t + phi_k(t)))|^2
/// sampled on the global grid t_n = n / sample_rate for n in
/// [first_sample_index, first_sample_index + n_samples). Every sample is a
/// pure function of its absolute time, so synthesizing in chunks yields
/// bit-identical values.
PowerEnvelope synthesize_envelope_range(const ExcitationPlan& plan,
                                        const ChannelRealization& channel,
                                        std::uint64_t first_sample_index, std::size_t n_samples,
                                        double sample_rate_hz);

/// Convenience wrapper covering [0, duration). Requires at least one sample.
PowerEnvelope synthesize_envelope(const ExcitationPlan& plan, const ChannelRealization& channel,
                                  double duration_s, double sample_rate_hz);

/// Writes `t_s,p_rf_w` rows for debugging and cross-language comparison.
void write_envelope_csv(const PowerEnvelope& env, std::ostream& out);

}  // namespace wptsim

#endif
