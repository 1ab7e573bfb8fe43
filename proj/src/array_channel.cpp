#include "wptsim/array_channel.hpp"

#include <cmath>
#include <istream>
#include <numbers>

#include "wptsim/csv.hpp"
#include "wptsim/errors.hpp"
#include "wptsim/rng.hpp"

namespace wptsim {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ArrayGeometry ArrayGeometry::ceiling_grid(std::size_t cols, std::size_t rows, double extent_x_m,
                                          double extent_y_m, double height_m, double carrier_hz) {
    if (cols == 0 || rows == 0) throw InvalidArgument("ceiling_grid: need at least one antenna");
    ArrayGeometry geom;
    geom.carrier_frequency_hz = carrier_hz;
    geom.antenna_positions.reserve(cols * rows);
    const double dx = cols > 1 ? extent_x_m / static_cast<double>(cols - 1) : 0.0;
    const double dy = rows > 1 ? extent_y_m / static_cast<double>(rows - 1) : 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            geom.antenna_positions.push_back(
                {static_cast<double>(c) * dx, static_cast<double>(r) * dy, height_m});
        }
    }
    geom.validate();
    return geom;
}

ArrayGeometry ArrayGeometry::from_csv(std::istream& in, double carrier_hz) {
    const auto table = csv::read_table(in, {"antenna_id", "x_m", "y_m", "z_m"});
    ArrayGeometry geom;
    geom.carrier_frequency_hz = carrier_hz;
    geom.antenna_positions.reserve(table.rows.size());
    for (const auto& row : table.rows) geom.antenna_positions.push_back({row[1], row[2], row[3]});
    geom.validate();
    return geom;
}

void ArrayGeometry::validate() const {
    if (antenna_positions.empty()) throw ValidationError("geometry has no antennas");
    if (!(carrier_frequency_hz > 0.0)) throw ValidationError("carrier frequency must be positive");
    for (const auto& p : antenna_positions) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw ValidationError("antenna position must be finite");
    }
}

std::complex<double> free_space_gain(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0)) throw InvalidArgument("free_space_gain: distance must be positive");
    if (!(frequency_hz > 0.0)) throw InvalidArgument("free_space_gain: frequency must be positive");
    const double lambda = kSpeedOfLight / frequency_hz;
    const double magnitude = lambda / (4.0 * std::numbers::pi * distance_m);
    double phase = std::fmod(-2.0 * std::numbers::pi * distance_m / lambda, 2.0 * std::numbers::pi);
    if (phase < 0.0) phase += 2.0 * std::numbers::pi;
    return std::polar(magnitude, phase);
}

ChannelRealization sample_channel(const ArrayGeometry& geometry, const Vec3& device_position,
                                  const FadingConfig& fading) {
    geometry.validate();
    ChannelRealization channel;
    channel.gains.reserve(geometry.size());
    Rng rng(fading.seed);
    const double k_linear = std::pow(10.0, fading.rician_k_db / 10.0);
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        const Vec3& antenna = geometry.antenna_positions[i];
        const double d = distance(antenna, device_position);
        if (d == 0.0)
            throw InvalidArgument("sample_channel: device coincides with antenna " +
                                  std::to_string(i));
        const std::complex<double> los = free_space_gain(d, geometry.carrier_frequency_hz);
        switch (fading.kind) {
            case FadingConfig::Kind::none:
                channel.gains.push_back(los);
                break;
            case FadingConfig::Kind::rayleigh: {
                // unit mean-square scatter component, E[|fade|^2] = 1
                const std::complex<double> w(rng.gaussian() / std::numbers::sqrt2,
                                             rng.gaussian() / std::numbers::sqrt2);
                channel.gains.push_back(los * w);
                break;
            }
            case FadingConfig::Kind::rician: {
                const std::complex<double> w(rng.gaussian() / std::numbers::sqrt2,
                                             rng.gaussian() / std::numbers::sqrt2);
                const double los_scale = std::sqrt(k_linear / (k_linear + 1.0));
                const double scatter_scale = std::sqrt(1.0 / (k_linear + 1.0));
                channel.gains.push_back(los * (los_scale + scatter_scale * w));
                break;
            }
        }
    }
    return channel;
}

}  // namespace wptsim
