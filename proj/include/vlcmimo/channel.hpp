#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "vlcmimo/rng.hpp"

namespace vlcmimo {

// LED / photodetector front-end parameters. Angles in radians.
struct OpticalParams {
    double semi_angle = 1.0471975511965976;   // LED half-power angle, 60 deg
    double area = 1e-4;                       // PD detection area, m^2
    double responsivity = 0.4;                // A/W
    double filter_gain = 1.0;
    double refractive_index = 1.5;            // concentrator index
    double fov = 1.0471975511965976;          // PD field of view, 60 deg
    bool fov_cutoff = true;                   // zero the gain beyond the FOV
};

// Built-in reference parameter set (the "paper-default" CLI preset).
OpticalParams default_optics();

// Circular-cell geometry: transmitters on a ring of radius tx_ring_radius
// around the cell centre, receiver cluster offset by rx_offset around a
// uniformly drawn reference point.
struct Geometry {
    double height = 2.15;        // vertical Tx-to-Rx-plane distance, m
    double cell_radius = 3.55;   // m
    double tx_ring_radius = 1.0; // m
    double rx_offset = 0.05;     // m
    int n_t = 4;
    int n_r = 4;
};

Geometry default_geometry(int n_t, int n_r);

struct ChannelRealization {
    Eigen::MatrixXd gains;  // n_r x n_t, nonnegative
    double rx_r = 0.0;      // polar coordinates of the receiver reference
    double rx_theta = 0.0;
};

// Order of the Lambertian radiation pattern: -1/log2(cos(semi_angle)).
double lambertian_order(double semi_angle);

// Optical concentrator gain: eta^2/sin(fov) inside the field of view, else 0.
double concentrator_gain(double psi, const OpticalParams& optics);

// LOS channel gain as a function of the planar Tx-Rx distance r:
//   h = C (m+1) L^(m+1) / (r^2 + L^2)^((m+3)/2),  C = A R T g / (2 pi).
// Incidence beyond the FOV gives 0 when the cutoff is enabled.
double gain_radial(double r, double height, const OpticalParams& optics);

// Antenna layout shared by both ends: n <= 4 on the axes at the ring
// radius, n == 5 adds the centre point, larger n spreads n-1 evenly on the
// ring plus the centre.
std::vector<Eigen::Vector2d> antenna_layout(int n, double ring_radius);

// Receiver reference point: r ~ U[0, cell_radius], theta ~ U[0, 2pi).
// Uniform in the radius, not over the disk area.
std::pair<double, double> sample_rx_reference(Rng& rng, const Geometry& geom);

// One channel realization with a freshly placed receiver cluster.
ChannelRealization build_channel(Rng& rng, const Geometry& geom, const OpticalParams& optics);

// Channel realization for a fixed receiver reference point.
ChannelRealization build_channel_at(double r, double theta, const Geometry& geom,
                                    const OpticalParams& optics);

}  // namespace vlcmimo
