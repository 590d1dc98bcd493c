#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "vlcmimo/channel.hpp"
#include "vlcmimo/codebook.hpp"
#include "vlcmimo/detection.hpp"

namespace vlcmimo {

// Substream purposes shared by the simulator and the Monte-Carlo analysis
// paths. Sample i of a bound/MI estimate draws its channel from
// Rng::stream(seed, i, kStreamChannel), the same stream the simulator uses
// for trial-level channels, so bound-vs-simulation comparisons are paired
// when the seeds match.
enum StreamPurpose : std::uint64_t {
    kStreamChannel = 0,
    kStreamMessage = 1,
    kStreamNoise = 2,
    kStreamZfFallback = 3,
    kStreamMmseFallback = 4,
};

// Gaussian tail probability Q(w) = P(Z > w).
double q_function(double w);

// Pairwise error probability Q(E_s ||H (X^a - X^b)||_F / sqrt(2 N0)).
// gain_scale from cfg is applied to h before the norm.
double pep(const CodeMatrix& xa, const CodeMatrix& xb, const Eigen::MatrixXd& h,
           const LinkConfig& cfg);
double pep(const CodeMatrix& xa, const CodeMatrix& xb, const ChannelRealization& h,
           const LinkConfig& cfg);

// Monte-Carlo sample counts and base seed for the channel expectation and
// the mixture-entropy estimate.
struct BoundConfig {
    long channel_samples = 1000;
    long mi_samples = 20000;
    std::uint64_t seed = 1;
};

struct BoundValue {
    double raw = 0.0;      // E_H[(1/2^(k-1)) sum_{a<b} PEP], unclamped
    double clamped = 0.0;  // E_H[min(1, .)]
    double std_error = 0.0;  // MC standard error of the clamped average
};

// Union bound on the codeword error rate, averaged over random receiver
// placements.
BoundValue cer_union_bound(const CodebookSpec& spec, const Geometry& geom,
                           const OpticalParams& optics, const LinkConfig& cfg,
                           const BoundConfig& bcfg);

// Differential entropy, in bits, of the n_r x n_t i.i.d. Gaussian noise
// matrix with per-entry variance sigma2.
double noise_entropy(int n_t, int n_r, double sigma2);

struct MiEstimate {
    double bits_per_slot = 0.0;
    double std_error = 0.0;
};

// Monte-Carlo mutual information of the uniform code ensemble:
//   I = (1/N_t) (E[-log2 f(Y|H)] - h(N)),
// with f a 2^k-component Gaussian mixture evaluated by log-sum-exp.
MiEstimate mutual_information(const CodebookSpec& spec, const Geometry& geom,
                              const OpticalParams& optics, const LinkConfig& cfg,
                              const BoundConfig& bcfg);

}  // namespace vlcmimo
