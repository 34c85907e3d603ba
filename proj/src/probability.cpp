#include "rdp/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdp/errors.hpp"

namespace rdp {

namespace {

double xlogx(double p)
{
    return p > 0.0 ? p * std::log(p) : 0.0;
}

} // namespace

ProbVector::ProbVector(std::vector<double> probs, double tol)
    : probs_(std::move(probs)), tol_(tol)
{
    require(!probs_.empty(), "pmf must have at least one entry");
    for (double& p : probs_) {
        require(std::isfinite(p), "pmf entries must be finite");
        require(p >= -tol_, "pmf entry is negative: " + std::to_string(p));
        if (p < 0.0) {
            p = 0.0;
        }
    }
    const double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    require(std::abs(sum - 1.0) <= kRenormalizeTol,
            "pmf does not sum to one (sum = " + std::to_string(sum) + ")");
    if (std::abs(sum - 1.0) > 0.0) {
        for (double& p : probs_) {
            p /= sum;
        }
    }
}

ProbVector ProbVector::uniform(std::size_t n)
{
    require(n > 0, "uniform pmf needs n > 0");
    return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t n, std::size_t k)
{
    require(k < n, "point mass index out of range");
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    return ProbVector(std::move(v));
}

ProbVector ProbVector::bernoulli(double p1)
{
    require(p1 >= 0.0 && p1 <= 1.0, "Bernoulli parameter must lie in [0, 1]");
    return ProbVector({1.0 - p1, p1});
}

ProbVector ProbVector::mix(const ProbVector& other, double lambda) const
{
    require(other.size() == size(), "pmf sizes differ");
    require(lambda >= 0.0 && lambda <= 1.0, "mixing weight must lie in [0, 1]");
    std::vector<double> v(size());
    for (std::size_t i = 0; i < size(); ++i) {
        v[i] = (1.0 - lambda) * probs_[i] + lambda * other.probs_[i];
    }
    return ProbVector(std::move(v));
}

Channel::Channel(const Matrix& rows) : m_(rows)
{
    require(m_.rows() > 0 && m_.cols() > 0, "channel must be non-empty");
    for (std::size_t i = 0; i < m_.rows(); ++i) {
        ProbVector checked(std::vector<double>(m_.row(i).begin(), m_.row(i).end()));
        std::copy(checked.begin(), checked.end(), m_.row(i).begin());
    }
}

Channel::Channel(const std::vector<std::vector<double>>& rows) : Channel(Matrix::from_rows(rows)) {}

Channel Channel::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return Channel(m);
}

Channel Channel::bsc(double eps)
{
    require(eps >= 0.0 && eps <= 1.0, "crossover probability must lie in [0, 1]");
    return Channel({{1.0 - eps, eps}, {eps, 1.0 - eps}});
}

Channel Channel::constant(std::size_t inputs, const ProbVector& row)
{
    Matrix m(inputs, row.size());
    for (std::size_t i = 0; i < inputs; ++i) {
        std::copy(row.begin(), row.end(), m.row(i).begin());
    }
    return Channel(m);
}

ProbVector Channel::row_pmf(std::size_t in) const
{
    return ProbVector(std::vector<double>(row(in).begin(), row(in).end()));
}

DistortionMatrix::DistortionMatrix(Matrix costs, bool zero_diagonal)
    : costs_(std::move(costs)), zero_diagonal_(zero_diagonal)
{
    require(!costs_.empty(), "distortion matrix must be non-empty");
    for (double c : costs_.data()) {
        require(std::isfinite(c) && c >= 0.0, "distortion entries must be finite and non-negative");
    }
    if (zero_diagonal_) {
        require(costs_.rows() == costs_.cols(), "zero-diagonal distortion must be square");
        for (std::size_t i = 0; i < costs_.rows(); ++i) {
            for (std::size_t j = 0; j < costs_.cols(); ++j) {
                require((costs_(i, j) == 0.0) == (i == j),
                        "zero-diagonal distortion requires d(x, y) = 0 iff x = y");
            }
        }
    }
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n)
{
    Matrix m(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 0.0;
    }
    return DistortionMatrix(std::move(m), true);
}

JointDistribution::JointDistribution(std::size_t nx, std::size_t nu, std::size_t nxh,
                                     std::vector<double> mass)
    : nx_(nx), nu_(nu), nxh_(nxh), mass_(std::move(mass))
{
    require(nx > 0 && nu > 0 && nxh > 0, "joint alphabets must be non-empty");
    require(mass_.size() == nx * nu * nxh, "joint mass has the wrong size");
    ProbVector checked(mass_);
    mass_.assign(checked.begin(), checked.end());
    markov_ = markov_violation() <= 1e-12;
}

JointDistribution JointDistribution::compose(const ProbVector& p_x, const Channel& encoder,
                                             const Channel& decoder)
{
    require(encoder.inputs() == p_x.size(), "encoder rows must match |X|");
    require(decoder.inputs() == encoder.outputs(), "decoder rows must match |U|");
    const std::size_t nx = p_x.size();
    const std::size_t nu = encoder.outputs();
    const std::size_t nxh = decoder.outputs();
    std::vector<double> mass(nx * nu * nxh);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t u = 0; u < nu; ++u) {
            const double pxu = p_x[x] * encoder(x, u);
            for (std::size_t xh = 0; xh < nxh; ++xh) {
                mass[(x * nu + u) * nxh + xh] = pxu * decoder(u, xh);
            }
        }
    }
    JointDistribution joint(nx, nu, nxh, std::move(mass));
    joint.markov_ = true;
    return joint;
}

ProbVector JointDistribution::marginal_x() const
{
    std::vector<double> v(nx_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x) {
        for (std::size_t u = 0; u < nu_; ++u) {
            for (std::size_t xh = 0; xh < nxh_; ++xh) {
                v[x] += (*this)(x, u, xh);
            }
        }
    }
    return ProbVector(std::move(v));
}

ProbVector JointDistribution::marginal_u() const
{
    std::vector<double> v(nu_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x) {
        for (std::size_t u = 0; u < nu_; ++u) {
            for (std::size_t xh = 0; xh < nxh_; ++xh) {
                v[u] += (*this)(x, u, xh);
            }
        }
    }
    return ProbVector(std::move(v));
}

ProbVector JointDistribution::marginal_xh() const
{
    std::vector<double> v(nxh_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x) {
        for (std::size_t u = 0; u < nu_; ++u) {
            for (std::size_t xh = 0; xh < nxh_; ++xh) {
                v[xh] += (*this)(x, u, xh);
            }
        }
    }
    return ProbVector(std::move(v));
}

double JointDistribution::markov_violation() const
{
    double worst = 0.0;
    for (std::size_t u = 0; u < nu_; ++u) {
        double pu = 0.0;
        std::vector<double> pxh_u(nxh_, 0.0);
        for (std::size_t x = 0; x < nx_; ++x) {
            for (std::size_t xh = 0; xh < nxh_; ++xh) {
                pxh_u[xh] += (*this)(x, u, xh);
                pu += (*this)(x, u, xh);
            }
        }
        if (pu <= 0.0) {
            continue;
        }
        for (std::size_t x = 0; x < nx_; ++x) {
            double pxu = 0.0;
            for (std::size_t xh = 0; xh < nxh_; ++xh) {
                pxu += (*this)(x, u, xh);
            }
            if (pxu <= 0.0) {
                continue;
            }
            for (std::size_t xh = 0; xh < nxh_; ++xh) {
                worst = std::max(worst, std::abs((*this)(x, u, xh) / pxu - pxh_u[xh] / pu));
            }
        }
    }
    return worst;
}

double entropy(const ProbVector& p)
{
    double h = 0.0;
    for (double v : p) {
        h -= xlogx(v);
    }
    return std::max(h, 0.0);
}

double binary_entropy(double a)
{
    require(a >= 0.0 && a <= 1.0, "binary entropy argument must lie in [0, 1]");
    return std::max(0.0, -xlogx(a) - xlogx(1.0 - a));
}

double mutual_information(const ProbVector& p_x, const Channel& ch)
{
    require(ch.inputs() == p_x.size(), "channel rows must match the pmf size");
    Matrix joint(p_x.size(), ch.outputs());
    for (std::size_t x = 0; x < p_x.size(); ++x) {
        for (std::size_t u = 0; u < ch.outputs(); ++u) {
            joint(x, u) = p_x[x] * ch(x, u);
        }
    }
    return mutual_information(joint);
}

double mutual_information(const Matrix& joint_xu)
{
    const double total = std::accumulate(joint_xu.data().begin(), joint_xu.data().end(), 0.0);
    require(total > 0.0, "joint table has no mass");
    std::vector<double> px(joint_xu.rows(), 0.0);
    std::vector<double> pu(joint_xu.cols(), 0.0);
    for (std::size_t x = 0; x < joint_xu.rows(); ++x) {
        for (std::size_t u = 0; u < joint_xu.cols(); ++u) {
            px[x] += joint_xu(x, u) / total;
            pu[u] += joint_xu(x, u) / total;
        }
    }
    double mi = 0.0;
    for (std::size_t x = 0; x < joint_xu.rows(); ++x) {
        for (std::size_t u = 0; u < joint_xu.cols(); ++u) {
            const double p = joint_xu(x, u) / total;
            if (p > 0.0) {
                mi += p * std::log(p / (px[x] * pu[u]));
            }
        }
    }
    return std::max(mi, 0.0);
}

Posterior posterior(const ProbVector& p_x, const Channel& ch)
{
    require(ch.inputs() == p_x.size(), "channel rows must match the pmf size");
    const std::size_t nx = p_x.size();
    const std::size_t nu = ch.outputs();
    std::vector<double> pu(nu, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t u = 0; u < nu; ++u) {
            pu[u] += p_x[x] * ch(x, u);
        }
    }
    Matrix back(nu, nx);
    std::vector<bool> unused(nu, false);
    for (std::size_t u = 0; u < nu; ++u) {
        if (pu[u] <= 0.0) {
            unused[u] = true;
            for (std::size_t x = 0; x < nx; ++x) {
                back(u, x) = 1.0 / static_cast<double>(nx);
            }
            continue;
        }
        double row_sum = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            back(u, x) = p_x[x] * ch(x, u) / pu[u];
            row_sum += back(u, x);
        }
        for (std::size_t x = 0; x < nx; ++x) {
            back(u, x) /= row_sum;
        }
    }
    return Posterior{ProbVector(std::move(pu)), Channel(back), std::move(unused)};
}

double expected_distortion(const JointDistribution& joint, const DistortionMatrix& d)
{
    require(d.rows() == joint.nx() && d.cols() == joint.nxh(),
            "distortion matrix must be |X| x |X-hat|");
    double total = 0.0;
    for (std::size_t x = 0; x < joint.nx(); ++x) {
        for (std::size_t u = 0; u < joint.nu(); ++u) {
            for (std::size_t xh = 0; xh < joint.nxh(); ++xh) {
                total += joint(x, u, xh) * d(x, xh);
            }
        }
    }
    return total;
}

} // namespace rdp
