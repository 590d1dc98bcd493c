#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlcmimo/analysis.hpp"
#include "vlcmimo/channel.hpp"
#include "vlcmimo/codebook.hpp"
#include "vlcmimo/detection.hpp"

namespace vlcmimo {

// One SNR sweep: codebook, geometry, detectors, grid, and budgets. Results
// are fully determined by the plan (seed included), serial or parallel.
struct SweepPlan {
    CodebookSpec spec;
    Geometry geom;
    OpticalParams optics;
    std::vector<double> snr_grid_db;
    std::vector<Detector> detectors = {Detector::ML};
    long trials_per_point = 100000;
    long min_errors = 200;  // early-stop threshold; 0 runs every trial
    std::uint64_t seed = 1;
    double n0 = 1.0;
    // Channel gains are multiplied by this before any link math. <= 0
    // selects the default: 1 / gain_radial(0) of the reference optics, i.e.
    // gains expressed in units of the boresight gain.
    double gain_scale = 0.0;
    int channel_hold = 1;  // trials sharing one receiver placement
    long bound_channel_samples = 1000;
    long mi_samples = 20000;
    int threads = 0;  // 0: hardware concurrency, capped by VLCMIMO_THREADS
};

struct PointRecord {
    double snr_db = 0.0;
    std::string detector;  // "ml"/"zf"/"mmse"; empty for bound/MI rows
    long trials = 0;
    long errors = 0;
    double cer = 0.0;
    double ci_lo = 0.0;  // Wilson 95% interval
    double ci_hi = 0.0;
    long fallbacks = 0;
    std::optional<double> bound_raw;
    std::optional<double> bound_clamped;
    std::optional<double> bound_se;
    std::optional<double> mi;
    std::optional<double> mi_se;
};

struct SweepResult {
    std::vector<PointRecord> rows;
    double gain_scale = 1.0;  // resolved value actually used
    int threads = 1;
};

// Gain scale a plan resolves to (the explicit value, or the boresight
// normalization of the reference optics at the plan's height).
double resolve_gain_scale(const SweepPlan& plan);

// Per-point seed from which all trial substreams are derived.
std::uint64_t point_seed(std::uint64_t seed, std::size_t point_index);

// Wilson 95% score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long errors, long trials);

// Monte-Carlo codeword error rates for every (SNR point, detector).
SweepResult run_cer_sweep(const SweepPlan& plan);

// Union-bound values on the same channel sample streams as the simulator.
SweepResult run_bound_sweep(const SweepPlan& plan);

// Mutual-information estimates per SNR point.
SweepResult run_mi_sweep(const SweepPlan& plan);

}  // namespace vlcmimo
