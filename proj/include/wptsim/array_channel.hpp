#ifndef WPTSIM_ARRAY_CHANNEL_HPP
#define WPTSIM_ARRAY_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace wptsim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

double distance(const Vec3& a, const Vec3& b);

struct ArrayGeometry {
    std::vector<Vec3> antenna_positions;
    double carrier_frequency_hz = 920e6;

    std::size_t size() const { return antenna_positions.size(); }

    /// Ceiling grid of `cols x rows` antennas spanning `extent_x_m x extent_y_m`
    /// at `height_m` above the device plane (z = 0). The default models the
    /// 84-antenna testbed ceiling as a 12 x 7 grid over 8 m x 4 m at 2.4 m.
    static ArrayGeometry ceiling_grid(std::size_t cols = 12, std::size_t rows = 7,
                                      double extent_x_m = 8.0, double extent_y_m = 4.0,
                                      double height_m = 2.4, double carrier_hz = 920e6);

    /// Loads positions from CSV with header `antenna_id,x_m,y_m,z_m`.
    static ArrayGeometry from_csv(std::istream& in, double carrier_hz);

    void validate() const;
};

struct FadingConfig {
    enum class Kind { none, rician, rayleigh };
    Kind kind = Kind::none;
    double rician_k_db = 10.0;  // only used for Kind::rician
    std::uint64_t seed = 0;
};

/// Per-antenna narrowband complex voltage gain at the device location.
/// One gain per antenna is reused for that antenna's offset tone: the
/// excitation span (8.4 kHz) is negligible against the 920 MHz carrier.
struct ChannelRealization {
    std::vector<std::complex<double>> gains;
    std::size_t size() const { return gains.size(); }
};

/// Free-space voltage gain: magnitude lambda/(4*pi*d), phase -2*pi*d/lambda
/// wrapped to [0, 2*pi). Throws InvalidArgument for non-positive distance or
/// frequency.
std::complex<double> free_space_gain(double distance_m, double frequency_hz);

/// Samples the channel between every antenna and the device position.
/// Deterministic for a given FadingConfig seed; fading kind `none` yields the
/// pure line-of-sight gains.
ChannelRealization sample_channel(const ArrayGeometry& geometry, const Vec3& device_position,
                                  const FadingConfig& fading);

}  // namespace wptsim

#endif
