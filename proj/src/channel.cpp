#include "vlcmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace vlcmimo {

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
constexpr int kMaxAntennas = 64;
}  // namespace

OpticalParams default_optics() { return OpticalParams{}; }

Geometry default_geometry(int n_t, int n_r) {
    Geometry g;
    g.n_t = n_t;
    g.n_r = n_r;
    return g;
}

double lambertian_order(double semi_angle) {
    if (!(semi_angle > 0.0) || !(semi_angle < kPi / 2))
        throw std::invalid_argument("semi-angle must be in (0, pi/2)");
    return -1.0 / std::log2(std::cos(semi_angle));
}

double concentrator_gain(double psi, const OpticalParams& optics) {
    if (psi > optics.fov) return 0.0;
    return optics.refractive_index * optics.refractive_index / std::sin(optics.fov);
}

double gain_radial(double r, double height, const OpticalParams& optics) {
    if (r < 0.0) throw std::invalid_argument("radial distance must be nonnegative");
    const double psi = std::atan(r / height);
    if (optics.fov_cutoff && psi > optics.fov) return 0.0;
    const double g = optics.refractive_index * optics.refractive_index / std::sin(optics.fov);
    const double c = optics.area * optics.responsivity * optics.filter_gain * g / (2.0 * kPi);
    const double m = lambertian_order(optics.semi_angle);
    return c * (m + 1.0) * std::pow(height, m + 1.0) /
           std::pow(r * r + height * height, (m + 3.0) / 2.0);
}

std::vector<Eigen::Vector2d> antenna_layout(int n, double ring_radius) {
    if (n < 1 || n > kMaxAntennas) throw std::invalid_argument("antenna count must be in [1, 64]");
    std::vector<Eigen::Vector2d> points;
    points.reserve(static_cast<std::size_t>(n));
    // n <= 4: quarter-turn spacing on the ring (subset of the 4-antenna
    // layout); n >= 5: n-1 evenly spaced plus the centre point last.
    const int on_ring = n <= 4 ? n : n - 1;
    const double step = n <= 4 ? kPi / 2 : 2.0 * kPi / on_ring;
    for (int i = 0; i < on_ring; ++i)
        points.emplace_back(ring_radius * std::cos(step * i), ring_radius * std::sin(step * i));
    if (n >= 5) points.emplace_back(0.0, 0.0);
    return points;
}

std::pair<double, double> sample_rx_reference(Rng& rng, const Geometry& geom) {
    const double r = rng.uniform(0.0, geom.cell_radius);
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    return {r, theta};
}

ChannelRealization build_channel_at(double r, double theta, const Geometry& geom,
                                    const OpticalParams& optics) {
    if (geom.n_t < 1 || geom.n_r < 1 || geom.n_t > kMaxAntennas || geom.n_r > kMaxAntennas)
        throw std::invalid_argument("antenna counts must be in [1, 64]");
    const auto tx = antenna_layout(geom.n_t, geom.tx_ring_radius);
    const Eigen::Vector2d reference(r * std::cos(theta), r * std::sin(theta));
    auto rx = antenna_layout(geom.n_r, geom.rx_offset);
    for (auto& p : rx) p += reference;

    ChannelRealization out;
    out.gains.resize(geom.n_r, geom.n_t);
    out.rx_r = r;
    out.rx_theta = theta;
    for (int j = 0; j < geom.n_r; ++j)
        for (int i = 0; i < geom.n_t; ++i)
            out.gains(j, i) = gain_radial(
                (rx[static_cast<std::size_t>(j)] - tx[static_cast<std::size_t>(i)]).norm(),
                geom.height, optics);
    return out;
}

ChannelRealization build_channel(Rng& rng, const Geometry& geom, const OpticalParams& optics) {
    const auto [r, theta] = sample_rx_reference(rng, geom);
    return build_channel_at(r, theta, geom, optics);
}

}  // namespace vlcmimo
