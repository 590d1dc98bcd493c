#include "vlcmimo/detection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vlcmimo {

const char* detector_name(Detector d) {
    switch (d) {
        case Detector::ML: return "ml";
        case Detector::ZF: return "zf";
        case Detector::MMSE: return "mmse";
    }
    return "?";
}

double es_for_snr_db(double snr_db, double gamma, int n_t, double n0) {
    if (!(gamma > 0.0) || n_t < 1 || !(n0 > 0.0))
        throw std::invalid_argument("need gamma > 0, n_t >= 1, n0 > 0");
    return std::pow(10.0, snr_db / 10.0) * n0 / (gamma * n_t * n_t);
}

CodeMatrix quantize_rows(const Eigen::MatrixXd& x_hat, int ones_per_row) {
    const int n = static_cast<int>(x_hat.cols());
    if (x_hat.rows() != n) throw std::invalid_argument("equalized matrix must be square");
    if (ones_per_row < 1 || ones_per_row > n - 1)
        throw std::invalid_argument("ones_per_row must be in [1, n-1]");
    CodeMatrix out(n);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(x_hat(r, a)) > std::abs(x_hat(r, b));
        });
        for (int j = 0; j < ones_per_row; ++j) out.set(r, order[static_cast<std::size_t>(j)], 1);
    }
    return out;
}

std::uint64_t ml_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                        const std::vector<CodeMatrix>& codebook, const LinkConfig& cfg) {
    if (codebook.empty()) throw std::invalid_argument("empty codebook");
    const int n = codebook.front().size();
    const Eigen::MatrixXd scaled = cfg.e_s * h;
    Eigen::MatrixXd x(n, n);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_message = 0;
    for (std::size_t a = 0; a < codebook.size(); ++a) {
        const auto& cw = codebook[a];
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) x(r, c) = cw(r, c);
        const double metric = (y - scaled * x).squaredNorm();
        if (metric < best) {
            best = metric;
            best_message = a;
        }
    }
    return best_message;
}

std::uint64_t ml_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                        const CodebookSpec& spec, const LinkConfig& cfg) {
    return ml_detect(y, h, enumerate_codebook(spec), cfg);
}

namespace {

DetectionResult decide(const Eigen::MatrixXd& x_hat, const CodebookSpec& spec, Rng& fallback_rng) {
    const CodeMatrix candidate = quantize_rows(x_hat, spec.ones_per_row);
    if (validate(spec, candidate)) return {decode(spec, candidate), false};
    const int k = message_length(spec.n_t);
    return {fallback_rng.below(std::uint64_t{1} << k), true};
}

}  // namespace

DetectionResult zf_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                          const CodebookSpec& spec, const LinkConfig& cfg, Rng& fallback_rng) {
    // Moore-Penrose pseudo-inverse; equals H^-1 for square nonsingular H.
    const Eigen::MatrixXd x_hat =
        h.completeOrthogonalDecomposition().pseudoInverse() * y / cfg.e_s;
    return decide(x_hat, spec, fallback_rng);
}

DetectionResult mmse_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                            const CodebookSpec& spec, const LinkConfig& cfg, Rng& fallback_rng) {
    const int n_t = static_cast<int>(h.cols());
    const double reg = cfg.n0 / (2.0 * cfg.e_s * cfg.e_s);
    const Eigen::MatrixXd gram =
        h.transpose() * h + reg * Eigen::MatrixXd::Identity(n_t, n_t);
    const Eigen::MatrixXd x_hat = gram.ldlt().solve(h.transpose() * y) / cfg.e_s;
    return decide(x_hat, spec, fallback_rng);
}

}  // namespace vlcmimo
