#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "vlcmimo/codebook.hpp"
#include "vlcmimo/rng.hpp"

namespace vlcmimo {

enum class Detector { ML, ZF, MMSE };

const char* detector_name(Detector d);

// Link-level parameters for Y = E_s * H * X + N, with per-entry noise
// variance n0/2. gain_scale multiplies the physical channel gains before
// any link math; 1.0 means raw gains.
struct LinkConfig {
    double e_s = 1.0;
    double n0 = 1.0;
    double gain_scale = 1.0;

    double sigma2() const { return n0 / 2.0; }
};

// E_s that realizes a target SNR under the normalization
// snr = gamma * E_s * n_t^2 / N0.
double es_for_snr_db(double snr_db, double gamma, int n_t, double n0);

struct DetectionResult {
    std::uint64_t message = 0;
    bool fallback = false;
};

// Per-row hard decision: the ones_per_row largest-magnitude entries become
// 1, everything else 0. Ties go to the lower column index.
CodeMatrix quantize_rows(const Eigen::MatrixXd& x_hat, int ones_per_row);

// Exhaustive minimum-distance detection over a prebuilt codebook:
// argmin_a ||Y - E_s H X^a||_F^2, ties toward the smaller message.
std::uint64_t ml_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                        const std::vector<CodeMatrix>& codebook, const LinkConfig& cfg);

// Convenience overload that enumerates the codebook (k <= 24 guard).
std::uint64_t ml_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                        const CodebookSpec& spec, const LinkConfig& cfg);

// Zero-forcing: X_hat = pinv(H) Y / E_s, then quantize and validate. An
// invalid matrix falls back to a uniformly random message drawn from the
// caller's dedicated stream.
DetectionResult zf_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                          const CodebookSpec& spec, const LinkConfig& cfg, Rng& fallback_rng);

// Linear MMSE for the model above:
//   X_hat = (H^T H + n0/(2 E_s^2) I)^-1 H^T Y / E_s,
// then the same quantize/validate/fallback pipeline as ZF.
DetectionResult mmse_detect(const Eigen::MatrixXd& y, const Eigen::MatrixXd& h,
                            const CodebookSpec& spec, const LinkConfig& cfg, Rng& fallback_rng);

}  // namespace vlcmimo
