#include "vlcmimo/sim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <atomic>
#include <thread>

namespace vlcmimo {

namespace {

// Trials are processed in fixed-size blocks; early stopping is decided only
// at block boundaries so the outcome does not depend on the thread count.
constexpr long kTrialBlock = 4096;

int resolve_threads(int requested) {
    int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char* cap = std::getenv("VLCMIMO_THREADS")) {
        const long parsed = std::strtol(cap, nullptr, 10);
        if (parsed >= 1) threads = std::min<long>(threads, parsed);
    }
    return threads;
}

void check_plan(const SweepPlan& plan) {
    if (plan.snr_grid_db.empty()) throw std::invalid_argument("empty SNR grid");
    if (plan.trials_per_point < 1) throw std::invalid_argument("trials_per_point must be >= 1");
    if (plan.channel_hold < 1) throw std::invalid_argument("channel_hold must be >= 1");
    if (plan.geom.n_t != plan.spec.n_t)
        throw std::invalid_argument("geometry n_t does not match the codebook");
    if (!(plan.n0 > 0.0)) throw std::invalid_argument("n0 must be positive");
    if (plan.min_errors < 0) throw std::invalid_argument("min_errors must be >= 0");
}

struct Tally {
    std::vector<long> errors;     // per detector
    std::vector<long> fallbacks;  // per detector

    explicit Tally(std::size_t n) : errors(n, 0), fallbacks(n, 0) {}

    void add(const Tally& other) {
        for (std::size_t i = 0; i < errors.size(); ++i) {
            errors[i] += other.errors[i];
            fallbacks[i] += other.fallbacks[i];
        }
    }
};

std::vector<Eigen::MatrixXd> dense_codebook(const std::vector<CodeMatrix>& book) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(book.size());
    for (const auto& cw : book) {
        Eigen::MatrixXd x(cw.size(), cw.size());
        for (int r = 0; r < cw.size(); ++r)
            for (int c = 0; c < cw.size(); ++c) x(r, c) = cw(r, c);
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace

double resolve_gain_scale(const SweepPlan& plan) {
    if (plan.gain_scale > 0.0) return plan.gain_scale;
    return 1.0 / gain_radial(0.0, plan.geom.height, default_optics());
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t point_index) {
    return mix_seed(seed, static_cast<std::uint64_t>(point_index));
}

std::pair<double, double> wilson_interval(long errors, long trials) {
    if (trials < 1) return {0.0, 0.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = p + z * z / (2.0 * n);
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    const double lo = errors == 0 ? 0.0 : std::max(0.0, (centre - spread) / denom);
    const double hi = errors == trials ? 1.0 : std::min(1.0, (centre + spread) / denom);
    return {lo, hi};
}

SweepResult run_cer_sweep(const SweepPlan& plan) {
    check_plan(plan);
    if (plan.detectors.empty()) throw std::invalid_argument("no detectors requested");
    const auto codebook = enumerate_codebook(plan.spec);
    const auto dense = dense_codebook(codebook);
    const double scale = resolve_gain_scale(plan);
    const int threads = resolve_threads(plan.threads);
    const int k = message_length(plan.spec.n_t);
    const std::uint64_t message_count = std::uint64_t{1} << k;
    const int n_t = plan.spec.n_t;
    const int n_r = plan.geom.n_r;
    const std::size_t n_det = plan.detectors.size();

    SweepResult result;
    result.gain_scale = scale;
    result.threads = threads;

    for (std::size_t p = 0; p < plan.snr_grid_db.size(); ++p) {
        const std::uint64_t pseed = point_seed(plan.seed, p);
        LinkConfig cfg;
        cfg.n0 = plan.n0;
        cfg.e_s = es_for_snr_db(plan.snr_grid_db[p], plan.spec.gamma(), n_t, plan.n0);
        cfg.gain_scale = scale;
        const double sigma = std::sqrt(cfg.sigma2());

        Tally total(n_det);
        long done = 0;
        while (done < plan.trials_per_point) {
            const long block = std::min(kTrialBlock, plan.trials_per_point - done);
            std::vector<Tally> partial(static_cast<std::size_t>(threads), Tally(n_det));
            auto worker = [&](int t) {
                const long lo = done + block * t / threads;
                const long hi = done + block * (t + 1) / threads;
                Tally& tally = partial[static_cast<std::size_t>(t)];
                Eigen::MatrixXd noise(n_r, n_t);
                for (long trial = lo; trial < hi; ++trial) {
                    const std::uint64_t channel_idx =
                        static_cast<std::uint64_t>(trial / plan.channel_hold);
                    Rng channel_rng = Rng::stream(pseed, channel_idx, kStreamChannel);
                    Rng message_rng =
                        Rng::stream(pseed, static_cast<std::uint64_t>(trial), kStreamMessage);
                    Rng noise_rng =
                        Rng::stream(pseed, static_cast<std::uint64_t>(trial), kStreamNoise);

                    const auto realization = build_channel(channel_rng, plan.geom, plan.optics);
                    const Eigen::MatrixXd h = scale * realization.gains;
                    const std::uint64_t message = message_rng.below(message_count);
                    for (int r = 0; r < n_r; ++r)
                        for (int c = 0; c < n_t; ++c) noise(r, c) = sigma * noise_rng.gaussian();
                    const Eigen::MatrixXd y = cfg.e_s * h * dense[message] + noise;

                    for (std::size_t d = 0; d < n_det; ++d) {
                        DetectionResult decoded;
                        switch (plan.detectors[d]) {
                            case Detector::ML:
                                decoded = {ml_detect(y, h, codebook, cfg), false};
                                break;
                            case Detector::ZF: {
                                Rng fb = Rng::stream(pseed, static_cast<std::uint64_t>(trial),
                                                     kStreamZfFallback);
                                decoded = zf_detect(y, h, plan.spec, cfg, fb);
                                break;
                            }
                            case Detector::MMSE: {
                                Rng fb = Rng::stream(pseed, static_cast<std::uint64_t>(trial),
                                                     kStreamMmseFallback);
                                decoded = mmse_detect(y, h, plan.spec, cfg, fb);
                                break;
                            }
                        }
                        tally.errors[d] += decoded.message != message;
                        tally.fallbacks[d] += decoded.fallback;
                    }
                }
            };
            if (threads == 1) {
                worker(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(threads));
                for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
                for (auto& th : pool) th.join();
            }
            for (const auto& part : partial) total.add(part);
            done += block;
            if (plan.min_errors > 0 &&
                *std::min_element(total.errors.begin(), total.errors.end()) >= plan.min_errors)
                break;
        }

        for (std::size_t d = 0; d < n_det; ++d) {
            PointRecord row;
            row.snr_db = plan.snr_grid_db[p];
            row.detector = detector_name(plan.detectors[d]);
            row.trials = done;
            row.errors = total.errors[d];
            row.cer = static_cast<double>(row.errors) / static_cast<double>(done);
            std::tie(row.ci_lo, row.ci_hi) = wilson_interval(row.errors, done);
            row.fallbacks = total.fallbacks[d];
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

SweepResult run_bound_sweep(const SweepPlan& plan) {
    check_plan(plan);
    if (plan.bound_channel_samples < 1)
        throw std::invalid_argument("bound_channel_samples must be >= 1");
    const double scale = resolve_gain_scale(plan);
    SweepResult result;
    result.gain_scale = scale;
    result.threads = 1;
    for (std::size_t p = 0; p < plan.snr_grid_db.size(); ++p) {
        LinkConfig cfg;
        cfg.n0 = plan.n0;
        cfg.e_s = es_for_snr_db(plan.snr_grid_db[p], plan.spec.gamma(), plan.spec.n_t, plan.n0);
        cfg.gain_scale = scale;
        BoundConfig bcfg;
        bcfg.channel_samples = plan.bound_channel_samples;
        bcfg.seed = point_seed(plan.seed, p);
        const BoundValue value = cer_union_bound(plan.spec, plan.geom, plan.optics, cfg, bcfg);
        PointRecord row;
        row.snr_db = plan.snr_grid_db[p];
        row.bound_raw = value.raw;
        row.bound_clamped = value.clamped;
        row.bound_se = value.std_error;
        result.rows.push_back(std::move(row));
    }
    return result;
}

SweepResult run_mi_sweep(const SweepPlan& plan) {
    check_plan(plan);
    if (plan.mi_samples < 2) throw std::invalid_argument("mi_samples must be >= 2");
    const double scale = resolve_gain_scale(plan);
    const int threads = resolve_threads(plan.threads);
    SweepResult result;
    result.gain_scale = scale;
    result.threads = threads;
    result.rows.resize(plan.snr_grid_db.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t p = next.fetch_add(1);
            if (p >= plan.snr_grid_db.size()) return;
            LinkConfig cfg;
            cfg.n0 = plan.n0;
            cfg.e_s =
                es_for_snr_db(plan.snr_grid_db[p], plan.spec.gamma(), plan.spec.n_t, plan.n0);
            cfg.gain_scale = scale;
            BoundConfig bcfg;
            bcfg.mi_samples = plan.mi_samples;
            bcfg.seed = point_seed(plan.seed, p);
            const MiEstimate estimate =
                mutual_information(plan.spec, plan.geom, plan.optics, cfg, bcfg);
            PointRecord row;
            row.snr_db = plan.snr_grid_db[p];
            row.mi = estimate.bits_per_slot;
            row.mi_se = estimate.std_error;
            result.rows[p] = std::move(row);
        }
    };
    if (threads == 1 || plan.snr_grid_db.size() == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int used = std::min<int>(threads, static_cast<int>(plan.snr_grid_db.size()));
        pool.reserve(static_cast<std::size_t>(used));
        for (int t = 0; t < used; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace vlcmimo
