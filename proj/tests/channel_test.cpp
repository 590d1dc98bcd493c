#include <doctest.h>

#include <cmath>

#include "vlcmimo/channel.hpp"

using namespace vlcmimo;

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
double deg(double d) { return d * kPi / 180.0; }

// Full LOS gain expression with explicit irradiance/incidence angles; for a
// horizontal receiver plane cos(phi) = cos(psi) = L/d with d^2 = r^2 + L^2.
// Serves as the independent oracle for gain_radial.
double gain_from_angles(double r, double height, const OpticalParams& o) {
    const double d2 = r * r + height * height;
    const double d = std::sqrt(d2);
    const double cos_psi = height / d;
    const double psi = std::acos(cos_psi);
    const double m = -1.0 / std::log2(std::cos(o.semi_angle));
    const double g = psi <= o.fov ? o.refractive_index * o.refractive_index / std::sin(o.fov) : 0.0;
    return (m + 1.0) * o.area * o.responsivity / (2.0 * kPi * d2) * std::pow(cos_psi, m) *
           o.filter_gain * g * cos_psi;
}

}  // namespace

TEST_CASE("lambertian order") {
    CHECK(lambertian_order(deg(60)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambertian_order(deg(45)) == doctest::Approx(2.0).epsilon(1e-12));
    // frozen from a high-precision evaluation of -1/log2(cos(30 deg))
    CHECK(lambertian_order(deg(30)) == doctest::Approx(4.818841679306418).epsilon(1e-12));
    CHECK_THROWS_AS(lambertian_order(0.0), std::invalid_argument);
    CHECK_THROWS_AS(lambertian_order(deg(90)), std::invalid_argument);
}

TEST_CASE("concentrator gain") {
    OpticalParams o;
    CHECK(concentrator_gain(0.0, o) == doctest::Approx(2.598076211353316).epsilon(1e-12));
    CHECK(concentrator_gain(o.fov, o) == doctest::Approx(2.598076211353316).epsilon(1e-12));
    CHECK(concentrator_gain(o.fov + 1e-9, o) == 0.0);
}

TEST_CASE("radial gain") {
    const OpticalParams o = default_optics();
    const double L = 2.15;
    // frozen from a high-precision evaluation with the default parameters
    CHECK(gain_radial(0.0, L, o) == doctest::Approx(7.156243099038945e-6).epsilon(1e-12));

    // equivalence of the angle form and the radial form
    for (int i = 0; i <= 200; ++i) {
        const double r = i * (2.0 * L) / 200.0;
        const double expected = gain_from_angles(r, L, o);
        const double got = gain_radial(r, L, o);
        if (expected == 0.0) {
            CHECK(got == 0.0);
        } else {
            CHECK(std::abs(got - expected) / expected < 1e-12);
        }
    }

    // strictly decreasing within the FOV, zero past it
    double prev = gain_radial(0.0, L, o);
    for (int i = 1; i <= 100; ++i) {
        const double r = i * 3.7 / 100.0;
        const double h = gain_radial(r, L, o);
        CHECK(h < prev);
        CHECK(h >= 0.0);
        prev = h;
    }
    CHECK(gain_radial(L * std::tan(o.fov) + 1e-6, L, o) == 0.0);

    OpticalParams uncut = o;
    uncut.fov_cutoff = false;
    CHECK(gain_radial(L * std::tan(o.fov) + 1e-6, L, uncut) > 0.0);
}

TEST_CASE("antenna layout") {
    const auto four = antenna_layout(4, 1.0);
    REQUIRE(four.size() == 4);
    CHECK(four[0].isApprox(Eigen::Vector2d(1, 0), 1e-12));
    CHECK(four[1].isApprox(Eigen::Vector2d(0, 1), 1e-12));
    CHECK(four[2].isApprox(Eigen::Vector2d(-1, 0), 1e-12));
    CHECK(four[3].isApprox(Eigen::Vector2d(0, -1), 1e-12));
    const auto five = antenna_layout(5, 1.0);
    REQUIRE(five.size() == 5);
    for (int i = 0; i < 4; ++i) CHECK(five[i].isApprox(four[i], 1e-12));
    CHECK(five[4].norm() == 0.0);
    const auto one = antenna_layout(1, 0.05);
    CHECK(one[0].isApprox(Eigen::Vector2d(0.05, 0), 1e-12));
    CHECK_THROWS_AS(antenna_layout(0, 1.0), std::invalid_argument);
}

TEST_CASE("receiver reference sampling") {
    const Geometry geom = default_geometry(4, 4);

    Rng a(42), b(42);
    const auto s1 = sample_rx_reference(a, geom);
    const auto s2 = sample_rx_reference(b, geom);
    CHECK(s1.first == s2.first);
    CHECK(s1.second == s2.second);

    Rng rng(7);
    const int n = 1000000;
    double mean_r = 0.0;
    int theta_bins[20] = {0};
    for (int i = 0; i < n; ++i) {
        const auto [r, theta] = sample_rx_reference(rng, geom);
        CHECK(r >= 0.0);
        CHECK(r <= geom.cell_radius);
        CHECK(theta >= 0.0);
        CHECK(theta < 2 * kPi);
        mean_r += r;
        ++theta_bins[static_cast<int>(theta / (2 * kPi) * 20)];
    }
    mean_r /= n;
    // E[r] = r_e/2, sd of the mean = r_e/(sqrt(12 n))
    const double se = geom.cell_radius / std::sqrt(12.0 * n);
    CHECK(std::abs(mean_r - geom.cell_radius / 2) < 3 * se);
    // chi-square uniformity at the 1% level, 19 dof
    double chi2 = 0.0;
    for (int bin : theta_bins) {
        const double expect = n / 20.0;
        chi2 += (bin - expect) * (bin - expect) / expect;
    }
    CHECK(chi2 < 36.19);
}

TEST_CASE("channel realization") {
    const Geometry geom = default_geometry(4, 1);
    const OpticalParams optics = default_optics();

    // receiver cluster at the centre: all four ring transmitters equidistant
    const auto sym = build_channel_at(0.0, 0.0, geom, optics);
    REQUIRE(sym.gains.rows() == 1);
    REQUIRE(sym.gains.cols() == 4);
    // R_1 sits at (+offset, 0), so T_1 is closer than T_3 and T_2/T_4 match
    CHECK(sym.gains(0, 1) == doctest::Approx(sym.gains(0, 3)).epsilon(1e-12));
    CHECK(sym.gains(0, 0) > sym.gains(0, 2));

    // centre column for the five-antenna layout: T_0 to R_0 at distance 0
    Geometry g5 = default_geometry(5, 5);
    g5.rx_offset = 0.0;
    const auto centred = build_channel_at(0.0, 0.0, g5, optics);
    CHECK(centred.gains(4, 4) == doctest::Approx(gain_radial(0.0, g5.height, optics)).epsilon(1e-12));

    // determinism: same seed, same matrix
    Rng r1(99), r2(99);
    const auto h1 = build_channel(r1, default_geometry(5, 3), optics);
    const auto h2 = build_channel(r2, default_geometry(5, 3), optics);
    CHECK(h1.gains == h2.gains);
    CHECK(h1.rx_r == h2.rx_r);

    // all gains finite and nonnegative over many placements
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const auto h = build_channel(rng, default_geometry(4, 4), optics);
        CHECK((h.gains.array() >= 0.0).all());
        CHECK(h.gains.allFinite());
    }
}
