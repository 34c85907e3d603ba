#include "rdp/gaussian_rdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rdp/errors.hpp"

namespace rdp {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

double sum_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

void require_variances(std::span<const double> v)
{
    require(!v.empty(), "variance vector must be non-empty");
    for (double x : v) {
        require(std::isfinite(x) && x > 0.0, "variances must be positive and finite");
    }
}

double capped_sum(std::span<const double> lambdas, double omega)
{
    double s = 0.0;
    for (double l : lambdas) {
        s += std::min(omega, l);
    }
    return s;
}

// omega_l per the water-filling rule, with the level itself.
std::vector<double> levels(std::span<const double> lambdas, double dstar, double& omega)
{
    std::vector<double> out(lambdas.begin(), lambdas.end());
    if (dstar < sum_of(lambdas)) {
        omega = water_level(lambdas, dstar);
        for (double& w : out) {
            w = std::min(w, omega);
        }
    } else {
        omega = *std::max_element(lambdas.begin(), lambdas.end());
    }
    return out;
}

} // namespace

GaussianVectorSource::GaussianVectorSource(std::vector<double> eigenvalues) : lambda_(std::move(eigenvalues))
{
    require(!lambda_.empty(), "a Gaussian source needs at least one eigenvalue");
    for (double l : lambda_) {
        require(std::isfinite(l) && l > 0.0, "eigenvalues must be positive and finite");
    }
}

double GaussianVectorSource::total_variance() const
{
    return sum_of(lambda_);
}

double GaussianVectorSource::differential_entropy() const
{
    double h = 0.0;
    for (double l : lambda_) {
        h += 0.5 * std::log(kTwoPiE * l);
    }
    return h;
}

double d_star(double D, double P)
{
    require(D > 0.0 && std::isfinite(D), "D must be positive");
    require(P >= 0.0, "P must be non-negative");
    const double m = std::min(D, P);
    return 0.5 * (D + std::sqrt((2.0 * D - m) * m));
}

double alpha_coefficient(double D, double P)
{
    require(D > 0.0 && P >= 0.0, "alpha needs D > 0 and P >= 0");
    if (D <= P) {
        return 0.0;
    }
    const double r = (D - std::sqrt((2.0 * D - P) * P)) / (D - P);
    return r * r;
}

double water_level(std::span<const double> lambdas, double target)
{
    require_variances(lambdas);
    require(target > 0.0 && target < sum_of(lambdas), "water level target must lie in (0, sum lambda)");
    double lo = 0.0;
    double hi = *std::max_element(lambdas.begin(), lambdas.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (capped_sum(lambdas, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(capped_sum(lambdas, lo) - target) <= std::abs(capped_sum(lambdas, hi) - target) ? lo : hi;
}

double classical_rd_rate(std::span<const double> lambdas, double D)
{
    require_variances(lambdas);
    require(D > 0.0, "D must be positive");
    std::vector<double> s(lambdas.begin(), lambdas.end());
    std::sort(s.begin(), s.end());
    const std::size_t L = s.size();
    if (D >= sum_of(s)) {
        return 0.0;
    }
    // Smallest k with level (D - sum_{i<k} s_i)/(L - k) <= s_k.
    double below = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
        const double theta = (D - below) / static_cast<double>(L - k);
        if (theta <= s[k]) {
            double rate = 0.0;
            for (std::size_t i = k; i < L; ++i) {
                rate += 0.5 * std::log(s[i] / theta);
            }
            return rate;
        }
        below += s[k];
    }
    return 0.0;
}

WaterfillSolution waterfill(const GaussianVectorSource& src, double D, double P)
{
    WaterfillSolution sol;
    sol.D = D;
    sol.P = P;
    sol.D_star = d_star(D, P);
    sol.alpha = alpha_coefficient(D, P);
    const auto& lambda = src.eigenvalues();
    sol.omega_l = levels(lambda, sol.D_star, sol.omega);
    sol.non_unique = sol.D_star >= src.total_variance();
    const double m = std::min(D, P);
    for (std::size_t l = 0; l < lambda.size(); ++l) {
        const double w = sol.omega_l[l];
        sol.gamma_star.push_back(w);
        sol.gamma_hat_star.push_back(sol.alpha * w);
        sol.D_l.push_back(D / sol.D_star * w);
        sol.P_l.push_back(m / sol.D_star * w);
        sol.rate += 0.5 * std::log(lambda[l] / w);
    }
    sol.rate = std::max(sol.rate, 0.0);
    return sol;
}

ChiSolution chi_program_solve(std::span<const double> sigmas, double D, double P)
{
    require_variances(sigmas);
    const double dstar = d_star(D, P);
    const double total = sum_of(sigmas);
    const std::size_t L = sigmas.size();
    ChiSolution sol;
    if (P < D) {
        sol.case_index = dstar < total ? 1 : 3;
    } else {
        sol.case_index = D < total ? 2 : 4;
    }
    const double alpha = alpha_coefficient(D, P);
    std::vector<double> w = levels(sigmas, dstar, sol.omega);
    sol.gammas = w;
    sol.gamma_hats.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        sol.gamma_hats[l] = alpha * w[l];
        sol.value -= 0.5 * std::log(kTwoPiE * w[l]);
    }

    KktMultipliers mu;
    mu.tau.assign(L, 0.0);
    mu.tau_hat.assign(L, 0.0);
    const double omega = sol.omega;
    switch (sol.case_index) {
    case 1: {
        if (P <= 0.0) {
            return sol;
        }
        const double s = std::sqrt((2.0 * D - P) * P);
        mu.nu1 = (P + s) / (4.0 * omega * s);
        mu.nu2 = (D - P) / (4.0 * omega * s);
        for (std::size_t l = 0; l < L; ++l) {
            mu.tau[l] = std::max(omega - sigmas[l], 0.0) / (2.0 * omega * sigmas[l]);
        }
        break;
    }
    case 2:
        mu.nu1 = 1.0 / (2.0 * omega);
        for (std::size_t l = 0; l < L; ++l) {
            mu.tau[l] = std::max(omega - sigmas[l], 0.0) / (2.0 * omega * sigmas[l]);
            mu.tau_hat[l] = 1.0 / (2.0 * omega);
        }
        break;
    default:
        for (std::size_t l = 0; l < L; ++l) {
            mu.tau[l] = 1.0 / (2.0 * sigmas[l]);
        }
        break;
    }
    sol.multipliers = mu;
    return sol;
}

double KktResiduals::max() const
{
    return std::max({stationarity, primal, dual, complementary});
}

KktResiduals kkt_residuals(std::span<const double> sigmas, double D, double P, const ChiSolution& sol)
{
    require(sol.multipliers.has_value(), "solution carries no KKT multipliers");
    require(sol.gammas.size() == sigmas.size() && sol.gamma_hats.size() == sigmas.size(),
            "solution size does not match the variances");
    const KktMultipliers& mu = *sol.multipliers;
    KktResiduals r;
    double sum_d = 0.0;
    double sum_p = 0.0;
    for (std::size_t l = 0; l < sigmas.size(); ++l) {
        const double g = sol.gammas[l];
        const double gh = sol.gamma_hats[l];
        sum_d += g + gh;
        const double diff = std::sqrt(g) - std::sqrt(gh);
        sum_p += diff * diff;

        const double sg = -1.0 / (2.0 * g) + mu.nu1 + mu.nu2 * (1.0 - std::sqrt(gh / g)) + mu.tau[l];
        double sgh = mu.nu1 - mu.tau_hat[l];
        if (mu.nu2 != 0.0) {
            sgh += gh > 0.0 ? mu.nu2 * (1.0 - std::sqrt(g / gh)) : -std::numeric_limits<double>::infinity();
        }
        r.stationarity = std::max({r.stationarity, std::abs(sg), std::abs(sgh)});

        r.primal = std::max({r.primal, -g, g - sigmas[l], -gh});
        r.dual = std::max({r.dual, -mu.tau[l], -mu.tau_hat[l]});
        r.complementary = std::max({r.complementary, std::abs(mu.tau[l] * (g - sigmas[l])), std::abs(mu.tau_hat[l] * gh)});
    }
    r.primal = std::max({r.primal, sum_d - D, sum_p - P, 0.0});
    r.dual = std::max({r.dual, -mu.nu1, -mu.nu2, 0.0});
    r.complementary = std::max({r.complementary, std::abs(mu.nu1 * (sum_d - D)), std::abs(mu.nu2 * (sum_p - P))});
    return r;
}

double shannon_lower_bound(double h_x, std::span<const double> sigmas, double D, double P)
{
    require_variances(sigmas);
    double omega = 0.0;
    const auto w = levels(sigmas, d_star(D, P), omega);
    double bound = h_x;
    for (double x : w) {
        bound -= 0.5 * std::log(kTwoPiE * x);
    }
    return bound;
}

GaussianMixtureSource::GaussianMixtureSource(ProbVector weights, std::vector<Eigen::VectorXd> means,
                                             std::vector<Eigen::MatrixXd> covariances)
    : weights_(std::move(weights)), means_(std::move(means)), covs_(std::move(covariances))
{
    const std::size_t K = weights_.size();
    require(means_.size() == K && covs_.size() == K, "mixture needs one mean and covariance per weight");
    const auto L = means_.front().size();
    require(L > 0, "mixture dimension must be positive");
    for (std::size_t k = 0; k < K; ++k) {
        require(weights_[k] > 0.0, "mixture weights must be positive");
        require(means_[k].size() == L && covs_[k].rows() == L && covs_[k].cols() == L,
                "mixture component dimensions differ");
        require((covs_[k] - covs_[k].transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, covs_[k].cwiseAbs().maxCoeff()),
                "covariances must be symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(covs_[k]);
        require(llt.info() == Eigen::Success, "covariances must be positive definite");
        chol_.push_back(llt.matrixL());
        double log_det_half = 0.0;
        for (Eigen::Index i = 0; i < L; ++i) {
            log_det_half += std::log(chol_.back()(i, i));
        }
        log_norm_.push_back(std::log(weights_[k]) - 0.5 * static_cast<double>(L) * std::log(2.0 * std::numbers::pi) -
                            log_det_half);
    }
}

double GaussianMixtureSource::min_eigenvalue() const
{
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& c : covs_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

Eigen::MatrixXd GaussianMixtureSource::covariance() const
{
    const auto L = means_.front().size();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(L);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(L, L);
    for (std::size_t k = 0; k < means_.size(); ++k) {
        mean += weights_[k] * means_[k];
        second += weights_[k] * (covs_[k] + means_[k] * means_[k].transpose());
    }
    return second - mean * mean.transpose();
}

double GaussianMixtureSource::log_density(const Eigen::VectorXd& x) const
{
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(means_.size());
    for (std::size_t k = 0; k < means_.size(); ++k) {
        const Eigen::VectorXd z = chol_[k].triangularView<Eigen::Lower>().solve(x - means_[k]);
        terms[k] = log_norm_[k] - 0.5 * z.squaredNorm();
        top = std::max(top, terms[k]);
    }
    double s = 0.0;
    for (double t : terms) {
        s += std::exp(t - top);
    }
    return top + std::log(s);
}

MixtureRate mixture_rate(const GaussianMixtureSource& src, double D, double P)
{
    require(src.h_x.has_value(), "mixture rate needs h(X); supply it or estimate it first");
    const double dstar = d_star(D, P);
    const double L = static_cast<double>(src.dim());
    MixtureRate out;
    out.valid = dstar / L <= src.min_eigenvalue();
    if (out.valid) {
        out.rate = *src.h_x - 0.5 * L * std::log(kTwoPiE * dstar / L);
    } else {
        const Eigen::VectorXd diag = src.covariance().diagonal();
        std::vector<double> sig(diag.data(), diag.data() + diag.size());
        out.rate = std::max(0.0, shannon_lower_bound(*src.h_x, sig, D, P));
    }
    return out;
}

namespace {

// Sorted breakpoints covering every mode's +-10 sd along one axis.
std::vector<double> axis_breaks(const GaussianMixtureSource& src, Eigen::Index axis)
{
    std::vector<double> b;
    for (std::size_t k = 0; k < src.modes(); ++k) {
        const double mu = src.means()[k](axis);
        const double sd = std::sqrt(src.covariances()[k](axis, axis));
        for (double t : {-10.0, -3.0, 0.0, 3.0, 10.0}) {
            b.push_back(mu + t * sd);
        }
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

template <class F>
double integrate_pieces(F&& f, const std::vector<double>& breaks, unsigned depth, double tol)
{
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        total += gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], depth, tol);
    }
    return total;
}

double neg_f_log_f(double lf)
{
    if (!std::isfinite(lf) || lf < -700.0) {
        return 0.0;
    }
    return -std::exp(lf) * lf;
}

} // namespace

double mixture_entropy_quadrature(const GaussianMixtureSource& src)
{
    const auto L = static_cast<Eigen::Index>(src.dim());
    require(L == 1 || L == 2, "quadrature entropy supports dimensions 1 and 2 only");
    const auto bx = axis_breaks(src, 0);
    if (L == 1) {
        auto f = [&](double x) {
            Eigen::VectorXd v(1);
            v << x;
            return neg_f_log_f(src.log_density(v));
        };
        return integrate_pieces(f, bx, 15, 1e-12);
    }
    const auto by = axis_breaks(src, 1);
    auto outer = [&](double x) {
        auto inner = [&](double y) {
            Eigen::VectorXd v(2);
            v << x, y;
            return neg_f_log_f(src.log_density(v));
        };
        return integrate_pieces(inner, by, 8, 1e-11);
    };
    return integrate_pieces(outer, bx, 8, 1e-10);
}

double GaussianConstruction::expected_distortion() const
{
    return sum_of(v_var) + sum_of(v_hat_var);
}

double GaussianConstruction::conditional_w2() const
{
    double s = 0.0;
    for (std::size_t l = 0; l < v_var.size(); ++l) {
        const double d = std::sqrt(v_var[l]) - std::sqrt(v_hat_var[l]);
        s += d * d;
    }
    return s;
}

GaussianConstruction achieving_joint(const GaussianVectorSource& src, const WaterfillSolution& sol)
{
    const auto& lambda = src.eigenvalues();
    require(sol.gamma_star.size() == lambda.size() && sol.gamma_hat_star.size() == lambda.size(),
            "solution does not match the source dimension");
    GaussianConstruction c;
    c.D = sol.D;
    c.P = sol.P;
    c.rate = sol.rate;
    for (std::size_t l = 0; l < lambda.size(); ++l) {
        const double g = sol.gamma_star[l];
        require(g >= 0.0 && g <= lambda[l] * (1.0 + 1e-12), "gamma* exceeds the source variance");
        c.u_var.push_back(std::max(lambda[l] - g, 0.0));
        c.v_var.push_back(g);
        c.v_hat_var.push_back(sol.gamma_hat_star[l]);
    }
    return c;
}

} // namespace rdp
