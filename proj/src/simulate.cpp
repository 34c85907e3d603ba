#include "rdp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdp/errors.hpp"
#include "rdp/kernels.hpp"
#include "rdp/rng.hpp"

namespace rdp {

void RunningStats::add(double x)
{
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other)
{
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double RunningStats::variance() const
{
    return n_ < 2 ? 0.0 : std::max(m2_, 0.0) / static_cast<double>(n_ - 1);
}

double RunningStats::standard_error() const
{
    return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double z_score(double estimate, double target, double se)
{
    const double err = estimate - target;
    if (se > 0.0) {
        return err / se;
    }
    if (err == 0.0) {
        return 0.0;
    }
    return std::copysign(std::numeric_limits<double>::infinity(), err);
}

namespace {

void finish(Estimate& e)
{
    e.z = z_score(e.value, e.target, e.se);
}

// Standard error of a full-sample statistic from its per-batch values.
double batch_se(const std::vector<double>& values)
{
    RunningStats s;
    for (double v : values) {
        s.add(v);
    }
    return s.standard_error();
}

struct Dims {
    std::size_t nx;
    std::size_t nu;
    std::size_t nxh;
};

double perception_from_counts(const std::vector<double>& counts, const Dims& dims, const CostMatrix& cost,
                              std::vector<std::size_t>* bin_sizes = nullptr)
{
    double total = 0.0;
    for (double c : counts) {
        total += c;
    }
    double p = 0.0;
    for (std::size_t u = 0; u < dims.nu; ++u) {
        std::vector<double> px(dims.nx, 0.0);
        std::vector<double> pxh(dims.nxh, 0.0);
        double nu = 0.0;
        for (std::size_t x = 0; x < dims.nx; ++x) {
            for (std::size_t xh = 0; xh < dims.nxh; ++xh) {
                const double c = counts[(x * dims.nu + u) * dims.nxh + xh];
                px[x] += c;
                pxh[xh] += c;
                nu += c;
            }
        }
        if (bin_sizes != nullptr) {
            bin_sizes->push_back(static_cast<std::size_t>(nu));
        }
        if (nu <= 0.0) {
            continue;
        }
        for (double& v : px) {
            v /= nu;
        }
        for (double& v : pxh) {
            v /= nu;
        }
        p += nu / total * discrete_ot(ProbVector(px), ProbVector(pxh), cost).value;
    }
    return p;
}

double mi_from_counts(const std::vector<double>& counts, const Dims& dims)
{
    Matrix xu(dims.nx, dims.nu);
    for (std::size_t x = 0; x < dims.nx; ++x) {
        for (std::size_t u = 0; u < dims.nu; ++u) {
            for (std::size_t xh = 0; xh < dims.nxh; ++xh) {
                xu(x, u) += counts[(x * dims.nu + u) * dims.nxh + xh];
            }
        }
    }
    return mutual_information(xu);
}

std::vector<double> as_double(const std::vector<std::uint64_t>& c)
{
    return {c.begin(), c.end()};
}

} // namespace

SimReport simulate_finite(const JointDistribution& joint, const CostMatrix& cost, const DistortionMatrix& d,
                          std::size_t n, std::uint64_t seed, const SimOptions& opt)
{
    require(n >= 100, "simulate_finite needs at least 100 samples");
    require(opt.batches >= 2 && opt.batches <= n, "batch count must lie in [2, n]");
    require(cost.rows() == joint.nx() && cost.cols() == joint.nxh(), "cost must be |X| x |X-hat|");
    require(d.rows() == joint.nx() && d.cols() == joint.nxh(), "distortion must be |X| x |X-hat|");
    const Dims dims{joint.nx(), joint.nu(), joint.nxh()};

    const auto batch_counts = opt.parallel ? kernels::omp::categorical_counts(joint.mass(), n, seed, opt.batches)
                                           : kernels::serial::categorical_counts(joint.mass(), n, seed, opt.batches);
    std::vector<double> counts(joint.mass().size(), 0.0);
    for (const auto& b : batch_counts) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            counts[k] += static_cast<double>(b[k]);
        }
    }

    SimReport rep;
    rep.n_samples = n;
    rep.seed = seed;
    rep.batches = opt.batches;

    // Distortion: iid mean.
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t x = 0; x < dims.nx; ++x) {
        for (std::size_t u = 0; u < dims.nu; ++u) {
            for (std::size_t xh = 0; xh < dims.nxh; ++xh) {
                const double c = counts[(x * dims.nu + u) * dims.nxh + xh];
                s1 += c * d(x, xh);
                s2 += c * d(x, xh) * d(x, xh);
            }
        }
    }
    const double nn = static_cast<double>(n);
    rep.D.value = s1 / nn;
    const double var = std::max(0.0, (s2 - s1 * s1 / nn) / (nn - 1.0));
    rep.D.se = std::sqrt(var / nn);
    rep.D.target = expected_distortion(joint, d);

    // Perception and rate: plug-in estimates, batch-means errors.
    std::vector<std::size_t> bins;
    rep.P.value = perception_from_counts(counts, dims, cost, &bins);
    rep.rate.value = mi_from_counts(counts, dims);
    std::vector<double> bp(opt.batches);
    std::vector<double> br(opt.batches);
#pragma omp parallel for schedule(static) if (opt.parallel)
    for (std::size_t b = 0; b < opt.batches; ++b) {
        const auto c = as_double(batch_counts[b]);
        bp[b] = perception_from_counts(c, dims, cost);
        br[b] = mi_from_counts(c, dims);
    }
    rep.P.se = batch_se(bp);
    rep.rate.se = batch_se(br);

    // Population targets.
    const ProbVector pu = joint.marginal_u();
    for (std::size_t u = 0; u < dims.nu; ++u) {
        if (pu[u] <= 0.0) {
            continue;
        }
        std::vector<double> px(dims.nx, 0.0);
        std::vector<double> pxh(dims.nxh, 0.0);
        for (std::size_t x = 0; x < dims.nx; ++x) {
            for (std::size_t xh = 0; xh < dims.nxh; ++xh) {
                px[x] += joint(x, u, xh) / pu[u];
                pxh[xh] += joint(x, u, xh) / pu[u];
            }
        }
        rep.P.target += pu[u] * discrete_ot(ProbVector(px, 1e-9), ProbVector(pxh, 1e-9), cost).value;
    }
    {
        Matrix xu(dims.nx, dims.nu);
        for (std::size_t x = 0; x < dims.nx; ++x) {
            for (std::size_t u = 0; u < dims.nu; ++u) {
                for (std::size_t xh = 0; xh < dims.nxh; ++xh) {
                    xu(x, u) += joint(x, u, xh);
                }
            }
        }
        rep.rate.target = mutual_information(xu);
    }
    finish(rep.D);
    finish(rep.P);
    finish(rep.rate);

    for (std::size_t u = 0; u < bins.size(); ++u) {
        if (bins[u] > 0 && bins[u] < kMinBinSamples) {
            rep.warnings.push_back("conditional bin u=" + std::to_string(u) + " has only " + std::to_string(bins[u]) +
                                   " samples; perception estimate is biased upward");
        }
    }
    return rep;
}

SimReport simulate_gaussian(const GaussianConstruction& c, std::size_t n, std::uint64_t seed, const SimOptions& opt)
{
    require(n >= 2, "simulate_gaussian needs at least two samples");
    require(opt.batches >= 2 && opt.batches <= n, "batch count must lie in [2, n]");
    const std::size_t L = c.v_var.size();
    require(L > 0 && c.u_var.size() == L && c.v_hat_var.size() == L, "construction is inconsistent");
    std::vector<double> u_sd(L);
    std::vector<double> v_sd(L);
    std::vector<double> vh_sd(L);
    for (std::size_t l = 0; l < L; ++l) {
        require(c.u_var[l] >= 0.0 && c.v_var[l] >= 0.0 && c.v_hat_var[l] >= 0.0, "variances must be non-negative");
        u_sd[l] = std::sqrt(c.u_var[l]);
        v_sd[l] = std::sqrt(c.v_var[l]);
        vh_sd[l] = std::sqrt(c.v_hat_var[l]);
    }
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> v;
    std::vector<std::vector<double>> vh;
    if (opt.parallel) {
        kernels::omp::gaussian_draws(n, seed, u_sd, v_sd, vh_sd, u, v, vh);
    } else {
        kernels::serial::gaussian_draws(n, seed, u_sd, v_sd, vh_sd, u, v, vh);
    }

    SimReport rep;
    rep.n_samples = n;
    rep.seed = seed;
    rep.batches = opt.batches;

    // X - X-hat = (U' + V) - (U' + V-hat).
    RunningStats dist;
    for (std::size_t i = 0; i < n; ++i) {
        double e = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            const double diff = (u[l][i] + v[l][i]) - (u[l][i] + vh[l][i]);
            e += diff * diff;
        }
        dist.add(e);
    }
    rep.D.value = dist.mean();
    rep.D.se = dist.standard_error();
    rep.D.target = c.expected_distortion();

    const std::size_t B = opt.batches;
    std::vector<double> batch_p(B, 0.0);
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<double> per(B);
#pragma omp parallel for schedule(static) if (opt.parallel)
        for (std::size_t b = 0; b < B; ++b) {
            const std::size_t lo = b * (n / B) + std::min(b, n % B);
            const std::size_t hi = (b + 1) * (n / B) + std::min(b + 1, n % B);
            const auto first = static_cast<std::ptrdiff_t>(lo);
            const auto last = static_cast<std::ptrdiff_t>(hi);
            std::sort(v[l].begin() + first, v[l].begin() + last);
            std::sort(vh[l].begin() + first, vh[l].begin() + last);
            per[b] = w2_squared_1d(std::span<const double>(v[l]).subspan(lo, hi - lo),
                                   std::span<const double>(vh[l]).subspan(lo, hi - lo));
        }
        for (std::size_t b = 0; b < B; ++b) {
            batch_p[b] += per[b];
        }
        std::sort(v[l].begin(), v[l].end());
        std::sort(vh[l].begin(), vh[l].end());
        rep.P.value += w2_squared_1d(v[l], vh[l]);
    }
    rep.P.se = batch_se(batch_p);
    rep.P.target = c.conditional_w2();

    rep.rate.value = c.rate;
    rep.rate.target = c.rate;
    finish(rep.D);
    finish(rep.P);
    finish(rep.rate);
    return rep;
}

EntropyEstimate mixture_entropy_mc(const GaussianMixtureSource& src, std::size_t n, std::uint64_t seed,
                                   const SimOptions& opt)
{
    require(n >= 2, "entropy estimate needs at least two samples");
    require(opt.batches >= 1 && opt.batches <= n, "batch count must lie in [1, n]");
    const auto L = static_cast<Eigen::Index>(src.dim());
    std::vector<double> cum;
    double acc = 0.0;
    for (double w : src.weights()) {
        acc += w;
        cum.push_back(acc);
    }
    const CounterRng rng(seed, 1);
    const std::size_t B = opt.batches;
    std::vector<RunningStats> stats(B);
#pragma omp parallel for schedule(static) if (opt.parallel)
    for (std::size_t b = 0; b < B; ++b) {
        const std::size_t lo = b * (n / B) + std::min(b, n % B);
        const std::size_t hi = (b + 1) * (n / B) + std::min(b + 1, n % B);
        Eigen::VectorXd z(L);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t k = kernels::detail::categorical_pick(cum, rng.uniforms(i, 0).first);
            for (Eigen::Index j = 0; j < L; j += 2) {
                const auto [a, c] = rng.normals(i, static_cast<std::uint32_t>(1 + j / 2));
                z(j) = a;
                if (j + 1 < L) {
                    z(j + 1) = c;
                }
            }
            const Eigen::VectorXd x = src.means()[k] + src.cholesky_factors()[k] * z;
            stats[b].add(-src.log_density(x));
        }
    }
    RunningStats all;
    for (const auto& s : stats) {
        all.merge(s);
    }
    return {all.mean(), all.standard_error()};
}

} // namespace rdp
