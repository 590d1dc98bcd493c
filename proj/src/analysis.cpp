#include "vlcmimo/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vlcmimo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kLog2E = 1.4426950408889634073599246810019;

Eigen::MatrixXd to_dense(const CodeMatrix& m) {
    const int n = m.size();
    Eigen::MatrixXd x(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) x(r, c) = m(r, c);
    return x;
}

std::vector<Eigen::MatrixXd> dense_codebook(const CodebookSpec& spec) {
    std::vector<Eigen::MatrixXd> out;
    const auto book = enumerate_codebook(spec);
    out.reserve(book.size());
    for (const auto& cw : book) out.push_back(to_dense(cw));
    return out;
}

}  // namespace

double q_function(double w) { return 0.5 * std::erfc(w / std::sqrt(2.0)); }

double pep(const CodeMatrix& xa, const CodeMatrix& xb, const Eigen::MatrixXd& h,
           const LinkConfig& cfg) {
    if (xa == xb) throw std::invalid_argument("pairwise error needs two distinct codewords");
    const Eigen::MatrixXd delta = to_dense(xa) - to_dense(xb);
    const double arg = cfg.e_s * (cfg.gain_scale * h * delta).norm() / std::sqrt(2.0 * cfg.n0);
    return q_function(arg);
}

double pep(const CodeMatrix& xa, const CodeMatrix& xb, const ChannelRealization& h,
           const LinkConfig& cfg) {
    return pep(xa, xb, h.gains, cfg);
}

BoundValue cer_union_bound(const CodebookSpec& spec, const Geometry& geom,
                           const OpticalParams& optics, const LinkConfig& cfg,
                           const BoundConfig& bcfg) {
    if (bcfg.channel_samples < 1) throw std::invalid_argument("channel_samples must be positive");
    const auto book = dense_codebook(spec);
    const std::size_t count = book.size();
    const double pair_norm = std::pow(2.0, message_length(spec.n_t) - 1);

    double sum_raw = 0.0, sum_clamped = 0.0, sum_clamped_sq = 0.0;
    std::vector<Eigen::MatrixXd> images(count);
    for (long s = 0; s < bcfg.channel_samples; ++s) {
        Rng channel_rng = Rng::stream(bcfg.seed, static_cast<std::uint64_t>(s), kStreamChannel);
        const auto realization = build_channel(channel_rng, geom, optics);
        const Eigen::MatrixXd h = cfg.gain_scale * realization.gains;
        for (std::size_t a = 0; a < count; ++a) images[a] = h * book[a];
        double pair_sum = 0.0;
        for (std::size_t a = 0; a + 1 < count; ++a)
            for (std::size_t b = a + 1; b < count; ++b) {
                const double w = cfg.e_s * (images[a] - images[b]).norm() / std::sqrt(2.0 * cfg.n0);
                pair_sum += q_function(w);
            }
        const double value = pair_sum / pair_norm;
        sum_raw += value;
        const double clamped = std::min(1.0, value);
        sum_clamped += clamped;
        sum_clamped_sq += clamped * clamped;
    }
    const double n = static_cast<double>(bcfg.channel_samples);
    BoundValue out;
    out.raw = sum_raw / n;
    out.clamped = sum_clamped / n;
    const double var = std::max(0.0, sum_clamped_sq / n - out.clamped * out.clamped);
    out.std_error = std::sqrt(var / n);
    return out;
}

double noise_entropy(int n_t, int n_r, double sigma2) {
    if (n_t < 1 || n_r < 1) throw std::invalid_argument("dimensions must be positive");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("variance must be positive");
    // (1/2) log2((2 pi e)^(n_t n_r) |Sigma|^n_t) with Sigma = sigma2 I_{n_r}
    return 0.5 * n_t * n_r * std::log2(2.0 * kPi * std::exp(1.0) * sigma2);
}

MiEstimate mutual_information(const CodebookSpec& spec, const Geometry& geom,
                              const OpticalParams& optics, const LinkConfig& cfg,
                              const BoundConfig& bcfg) {
    if (bcfg.mi_samples < 2) throw std::invalid_argument("mi_samples must be at least 2");
    const auto book = dense_codebook(spec);
    const std::size_t count = book.size();
    const int k = message_length(spec.n_t);
    const int n_t = spec.n_t;
    const int n_r = geom.n_r;
    const double sigma2 = cfg.sigma2();
    const double sigma = std::sqrt(sigma2);
    const double log2_norm = k + 0.5 * n_t * n_r * std::log2(2.0 * kPi * sigma2);

    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> exponents(count);
    Eigen::MatrixXd noise(n_r, n_t);
    std::vector<Eigen::MatrixXd> means(count);
    for (long s = 0; s < bcfg.mi_samples; ++s) {
        Rng channel_rng = Rng::stream(bcfg.seed, static_cast<std::uint64_t>(s), kStreamChannel);
        Rng message_rng = Rng::stream(bcfg.seed, static_cast<std::uint64_t>(s), kStreamMessage);
        Rng noise_rng = Rng::stream(bcfg.seed, static_cast<std::uint64_t>(s), kStreamNoise);

        const auto realization = build_channel(channel_rng, geom, optics);
        const Eigen::MatrixXd h = cfg.gain_scale * realization.gains;
        const std::uint64_t message = message_rng.below(std::uint64_t{1} << k);
        for (std::size_t a = 0; a < count; ++a) means[a] = cfg.e_s * h * book[a];
        for (int r = 0; r < n_r; ++r)
            for (int c = 0; c < n_t; ++c) noise(r, c) = sigma * noise_rng.gaussian();
        const Eigen::MatrixXd y = means[message] + noise;

        // -log2 f(y|H) through a log-sum-exp over the mixture components
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < count; ++a) {
            exponents[a] = -(y - means[a]).squaredNorm() / (2.0 * sigma2);
            top = std::max(top, exponents[a]);
        }
        double lse = 0.0;
        for (std::size_t a = 0; a < count; ++a) lse += std::exp(exponents[a] - top);
        const double log2_f = (top + std::log(lse)) * kLog2E - log2_norm;
        sum += -log2_f;
        sum_sq += log2_f * log2_f;
    }
    const double n = static_cast<double>(bcfg.mi_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    MiEstimate out;
    out.bits_per_slot = (mean - noise_entropy(n_t, n_r, sigma2)) / n_t;
    out.std_error = std::sqrt(var / n) / n_t;
    return out;
}

}  // namespace vlcmimo
