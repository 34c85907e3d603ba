#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rdp/gaussian_rdp.hpp"
#include "rdp/probability.hpp"
#include "rdp/transport.hpp"

namespace rdp {

/// Streaming mean/variance (Welford), mergeable with Chan's pairwise update.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance; 0 for fewer than two values.
    double variance() const;
    double standard_error() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// (est - target) / se; 0 when both the error and se vanish, +-inf when only se does.
double z_score(double estimate, double target, double se);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
    double target = 0.0;
    double z = 0.0;
};

struct SimReport {
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::size_t batches = 0;
    Estimate D;
    Estimate P;
    Estimate rate;
    std::vector<std::string> warnings;
};

struct SimOptions {
    /// Contiguous sample batches; standard errors of non-linear estimators use batch means.
    std::size_t batches = 32;
    bool parallel = true;
};

/// Conditional bins with fewer samples than this trigger a warning.
inline constexpr std::size_t kMinBinSamples = 30;

/// Samples (X, U, X-hat) from the joint and re-estimates distortion, conditional
/// perception and I(X;U). Throws for n < 100.
SimReport simulate_finite(const JointDistribution& joint, const CostMatrix& cost, const DistortionMatrix& d,
                          std::size_t n, std::uint64_t seed, const SimOptions& opt = {});

/// Samples U', V, V-hat of the construction; perception is estimated per
/// coordinate by the empirical quantile coupling of V against V-hat.
SimReport simulate_gaussian(const GaussianConstruction& c, std::size_t n, std::uint64_t seed,
                            const SimOptions& opt = {});

struct EntropyEstimate {
    double h_x = 0.0;
    double se = 0.0;
};

/// -mean log f(X_i) over draws from the mixture.
EntropyEstimate mixture_entropy_mc(const GaussianMixtureSource& src, std::size_t n, std::uint64_t seed,
                                   const SimOptions& opt = {});

} // namespace rdp
