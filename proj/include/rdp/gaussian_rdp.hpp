#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rdp/matrix.hpp"
#include "rdp/probability.hpp"

namespace rdp {

/// Gaussian vector source; the rate depends only on the covariance eigenvalues.
class GaussianVectorSource {
public:
    explicit GaussianVectorSource(std::vector<double> eigenvalues);

    const std::vector<double>& eigenvalues() const noexcept { return lambda_; }
    std::size_t dim() const noexcept { return lambda_.size(); }
    double total_variance() const;
    /// sum over l of 1/2 log(2 pi e lambda_l)
    double differential_entropy() const;

    std::optional<std::vector<double>> mean;
    /// Orthogonal Theta with covariance Theta' Lambda Theta.
    std::optional<Matrix> rotation;

private:
    std::vector<double> lambda_;
};

/// (D + sqrt((2D - m) m)) / 2 with m = min(D, P); lies in [D/2, D].
double d_star(double D, double P);

/// ((D - sqrt((2D - P) P)) / (D - P))^2 for D > P, 0 otherwise.
double alpha_coefficient(double D, double P);

/// Solves sum min(omega, lambda_l) = target by bisection on [0, max lambda].
/// Requires 0 < target < sum lambda.
double water_level(std::span<const double> lambdas, double target);

/// Classical reverse water-filling R(D), water level found exactly by sorting.
double classical_rd_rate(std::span<const double> lambdas, double D);

struct WaterfillSolution {
    double D = 0.0;
    double P = 0.0;
    double D_star = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    std::vector<double> omega_l;
    std::vector<double> gamma_star;
    std::vector<double> gamma_hat_star;
    std::vector<double> D_l;
    std::vector<double> P_l;
    double rate = 0.0;
    /// Set when D* >= sum lambda: the per-subspace split is then one of many.
    bool non_unique = false;
};

WaterfillSolution waterfill(const GaussianVectorSource& src, double D, double P);

struct KktMultipliers {
    double nu1 = 0.0;
    double nu2 = 0.0;
    std::vector<double> tau;
    std::vector<double> tau_hat;
};

struct ChiSolution {
    /// -sum 1/2 log(2 pi e gamma_l)
    double value = 0.0;
    std::vector<double> gammas;
    std::vector<double> gamma_hats;
    double omega = 0.0;
    /// 1: P < D, D* < sum;  2: P >= D, D < sum;  3: P < D, D* >= sum;  4: P >= D, D >= sum.
    int case_index = 0;
    /// Closed-form multipliers; absent at P = 0 in case 1 where they blow up.
    std::optional<KktMultipliers> multipliers;
};

/// Closed-form optimum of  min -sum 1/2 log(2 pi e gamma_l)  subject to
/// 0 <= gamma_l <= sigma_l^2, gamma_hat_l >= 0, sum(gamma + gamma_hat) <= D,
/// sum(sqrt(gamma) - sqrt(gamma_hat))^2 <= P.
ChiSolution chi_program_solve(std::span<const double> sigmas, double D, double P);

struct KktResiduals {
    double stationarity = 0.0;
    double primal = 0.0;
    double dual = 0.0;
    double complementary = 0.0;

    double max() const;
};

/// Residuals of the KKT system at `sol` with its multipliers. Throws if the
/// solution carries no multipliers.
KktResiduals kkt_residuals(std::span<const double> sigmas, double D, double P, const ChiSolution& sol);

/// h_x - sum 1/2 log(2 pi e omega_l).
double shannon_lower_bound(double h_x, std::span<const double> sigmas, double D, double P);

class GaussianMixtureSource {
public:
    GaussianMixtureSource(ProbVector weights, std::vector<Eigen::VectorXd> means,
                          std::vector<Eigen::MatrixXd> covariances);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(means_.front().size()); }
    std::size_t modes() const noexcept { return means_.size(); }
    const ProbVector& weights() const noexcept { return weights_; }
    const std::vector<Eigen::VectorXd>& means() const noexcept { return means_; }
    const std::vector<Eigen::MatrixXd>& covariances() const noexcept { return covs_; }
    const std::vector<Eigen::MatrixXd>& cholesky_factors() const noexcept { return chol_; }

    /// min over k of the smallest eigenvalue of Sigma_k.
    double min_eigenvalue() const;
    /// Covariance of the mixture itself.
    Eigen::MatrixXd covariance() const;
    double log_density(const Eigen::VectorXd& x) const;

    /// Differential entropy h(X) in nats, if known.
    std::optional<double> h_x;

private:
    ProbVector weights_;
    std::vector<Eigen::VectorXd> means_;
    std::vector<Eigen::MatrixXd> covs_;
    std::vector<Eigen::MatrixXd> chol_;
    std::vector<double> log_norm_;
};

struct MixtureRate {
    double rate = 0.0;
    /// D*/L <= min_k lambda_min(Sigma_k); otherwise `rate` is only the Shannon lower bound
    /// (per-coordinate variances of the mixture, floored at zero).
    bool valid = false;
};

/// Throws InputError when src.h_x is unset.
MixtureRate mixture_rate(const GaussianMixtureSource& src, double D, double P);

/// h(X) by adaptive Gauss-Kronrod quadrature; dimensions 1 and 2 only.
double mixture_entropy_quadrature(const GaussianMixtureSource& src);

/// Per-coordinate variances of X = U' + V, X-hat = U' + V-hat, all independent.
struct GaussianConstruction {
    std::vector<double> u_var;
    std::vector<double> v_var;
    std::vector<double> v_hat_var;
    double D = 0.0;
    double P = 0.0;
    double rate = 0.0;

    /// E||V||^2 + E||V-hat||^2
    double expected_distortion() const;
    /// sum (sqrt(v_var) - sqrt(v_hat_var))^2
    double conditional_w2() const;
};

/// Throws InputError if some gamma*_l exceeds lambda_l.
GaussianConstruction achieving_joint(const GaussianVectorSource& src, const WaterfillSolution& sol);

} // namespace rdp
