#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdp/matrix.hpp"

namespace rdp {

/// Absolute tolerance a stored pmf sums to one within.
inline constexpr double kNormalizationTol = 1e-12;
/// Inputs whose sum is off by at most this much are renormalized; worse is rejected.
inline constexpr double kRenormalizeTol = 1e-9;

/// Finite probability mass function. All logarithms in this library are natural.
class ProbVector {
public:
    ProbVector() = default;

    /// Validates and, if the sum is within kRenormalizeTol of one, renormalizes.
    /// Entries in [-tol, 0) are clamped to zero; anything more negative is rejected.
    explicit ProbVector(std::vector<double> probs, double tol = kNormalizationTol);

    static ProbVector uniform(std::size_t n);
    static ProbVector point_mass(std::size_t n, std::size_t k);
    /// (1 - p1, p1)
    static ProbVector bernoulli(double p1);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> values() const noexcept { return probs_; }
    double tol() const noexcept { return tol_; }

    auto begin() const noexcept { return probs_.begin(); }
    auto end() const noexcept { return probs_.end(); }

    /// (1 - lambda) * this + lambda * other
    ProbVector mix(const ProbVector& other, double lambda) const;

private:
    std::vector<double> probs_;
    double tol_ = kNormalizationTol;
};

/// Row-stochastic conditional distribution; row i is the law of the output given input i.
class Channel {
public:
    Channel() = default;
    explicit Channel(const Matrix& rows);
    explicit Channel(const std::vector<std::vector<double>>& rows);

    static Channel identity(std::size_t n);
    /// Binary symmetric channel with crossover probability eps.
    static Channel bsc(double eps);
    /// Every row equal to `row`.
    static Channel constant(std::size_t inputs, const ProbVector& row);

    std::size_t inputs() const noexcept { return m_.rows(); }
    std::size_t outputs() const noexcept { return m_.cols(); }
    double operator()(std::size_t in, std::size_t out) const { return m_(in, out); }
    std::span<const double> row(std::size_t in) const { return m_.row(in); }
    ProbVector row_pmf(std::size_t in) const;
    const Matrix& matrix() const noexcept { return m_; }

private:
    Matrix m_;
};

/// Cost of reproducing x as x-hat; |X| x |X-hat|.
class DistortionMatrix {
public:
    DistortionMatrix() = default;
    /// If zero_diagonal is set the matrix must be square with d(x, y) = 0 iff x = y.
    explicit DistortionMatrix(Matrix costs, bool zero_diagonal = false);

    static DistortionMatrix hamming(std::size_t n);

    std::size_t rows() const noexcept { return costs_.rows(); }
    std::size_t cols() const noexcept { return costs_.cols(); }
    double operator()(std::size_t x, std::size_t xh) const { return costs_(x, xh); }
    const Matrix& costs() const noexcept { return costs_; }
    bool zero_diagonal() const noexcept { return zero_diagonal_; }

private:
    Matrix costs_;
    bool zero_diagonal_ = false;
};

/// Joint law of (X, U, X-hat) stored as a dense |X| x |U| x |X-hat| array.
class JointDistribution {
public:
    JointDistribution() = default;
    JointDistribution(std::size_t nx, std::size_t nu, std::size_t nxh, std::vector<double> mass);

    /// p(x) p(u|x) p(x-hat|u); the result is Markov by construction.
    static JointDistribution compose(const ProbVector& p_x, const Channel& encoder, const Channel& decoder);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t nu() const noexcept { return nu_; }
    std::size_t nxh() const noexcept { return nxh_; }
    double operator()(std::size_t x, std::size_t u, std::size_t xh) const
    {
        return mass_[(x * nu_ + u) * nxh_ + xh];
    }
    std::span<const double> mass() const noexcept { return mass_; }
    bool markov() const noexcept { return markov_; }

    ProbVector marginal_x() const;
    ProbVector marginal_u() const;
    ProbVector marginal_xh() const;
    /// Largest |p(x-hat|u,x) - p(x-hat|u)| over the support.
    double markov_violation() const;

private:
    std::size_t nx_ = 0;
    std::size_t nu_ = 0;
    std::size_t nxh_ = 0;
    std::vector<double> mass_;
    bool markov_ = false;
};

/// Shannon entropy in nats, with 0 log 0 = 0.
double entropy(const ProbVector& p);
/// H_b(a) in nats; throws InputError outside [0, 1].
double binary_entropy(double a);
/// I(X;U) for X ~ p_x and U | X ~ ch.
double mutual_information(const ProbVector& p_x, const Channel& ch);
/// I(X;U) from a joint table p(x, u); the table is normalized internally.
double mutual_information(const Matrix& joint_xu);

struct Posterior {
    ProbVector p_u;
    /// back(u, x) = p(x | u); rows for unreachable u are uniform.
    Channel back;
    std::vector<bool> unused;
};

Posterior posterior(const ProbVector& p_x, const Channel& ch);

double expected_distortion(const JointDistribution& joint, const DistortionMatrix& d);

} // namespace rdp
