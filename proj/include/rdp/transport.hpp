#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdp/matrix.hpp"
#include "rdp/probability.hpp"

namespace rdp {

/// Per-symbol transport cost c(a, b).
class CostMatrix {
public:
    CostMatrix() = default;
    /// A proper cost is square with c(a, b) = 0 iff a = b.
    explicit CostMatrix(Matrix costs, bool proper = false);

    static CostMatrix hamming(std::size_t n);

    std::size_t rows() const noexcept { return costs_.rows(); }
    std::size_t cols() const noexcept { return costs_.cols(); }
    double operator()(std::size_t a, std::size_t b) const { return costs_(a, b); }
    const Matrix& costs() const noexcept { return costs_; }
    bool proper() const noexcept { return proper_; }
    double c_max() const { return costs_.max_entry(); }

private:
    Matrix costs_;
    bool proper_ = false;
};

/// A coupling of two pmfs; row sums give `first`, column sums give `second`.
struct TransportPlan {
    Matrix mass;
    ProbVector first;
    ProbVector second;

    /// Largest deviation of the row/column sums from the stated marginals.
    double marginal_error() const;
};

struct OtResult {
    double value = 0.0;
    TransportPlan plan;
    /// Dual potentials with f(a) + g(b) <= c(a, b) and value = <p, f> + <q, g>.
    std::vector<double> potential_first;
    std::vector<double> potential_second;
};

enum class OtMethod {
    automatic,   // enumeration up to 4 x 4 after dropping empty symbols, simplex above
    enumeration, // all basic feasible solutions; at most 4 x 4
    simplex,     // transportation simplex (MODI)
};

/// Largest alphabet the transportation simplex accepts.
inline constexpr std::size_t kMaxOtAlphabet = 64;

/// Exact optimal transport min over couplings of sum pi(a,b) c(a,b).
OtResult discrete_ot(const ProbVector& p, const ProbVector& q, const CostMatrix& cost,
                     OtMethod method = OtMethod::automatic);

/// Half the l1 distance.
double tv_distance(const ProbVector& p, const ProbVector& q);

/// W2^2 between two equal-weight empirical measures given as ascending samples.
double w2_squared_1d(std::span<const double> samples_p, std::span<const double> samples_q);

/// W2^2 between centred Gaussians with diagonal covariances.
double w2_squared_gaussian_diag(std::span<const double> gammas, std::span<const double> gamma_hats);

} // namespace rdp
