#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "rdp/binary_rdp.hpp"
#include "rdp/errors.hpp"
#include "rdp/finite_rdp.hpp"
#include "rdp/simulate.hpp"
#include "support.hpp"

using namespace rdp;
using doctest::Approx;

namespace {

bool within(const Estimate& e, double sigmas = 3.0)
{
    return std::abs(e.value - e.target) <= sigmas * e.se;
}

bool same(const SimReport& a, const SimReport& b)
{
    auto eq = [](const Estimate& x, const Estimate& y) {
        return x.value == y.value && x.se == y.se && x.target == y.target && (x.z == y.z || (std::isnan(x.z) && std::isnan(y.z)));
    };
    return a.n_samples == b.n_samples && eq(a.D, b.D) && eq(a.P, b.P) && eq(a.rate, b.rate) && a.warnings == b.warnings;
}

} // namespace

TEST_SUITE("simulate")
{
    TEST_CASE("running statistics merge equals a single pass")
    {
        test::Rng rng(71);
        std::normal_distribution<double> z(1.0, 2.0);
        RunningStats all, left, right;
        for (int i = 0; i < 1000; ++i) {
            const double v = z(rng);
            all.add(v);
            (i < 377 ? left : right).add(v);
        }
        left.merge(right);
        CHECK(left.count() == all.count());
        CHECK(left.mean() == Approx(all.mean()).epsilon(1e-13));
        CHECK(left.variance() == Approx(all.variance()).epsilon(1e-12));
        CHECK(all.standard_error() == Approx(std::sqrt(all.variance() / 1000.0)));
    }

    TEST_CASE("z-score convention")
    {
        CHECK(z_score(1.5, 1.0, 0.25) == Approx(2.0));
        CHECK(z_score(1.0, 1.0, 0.0) == 0.0);
        CHECK(z_score(1.1, 1.0, 0.0) == std::numeric_limits<double>::infinity());
        CHECK(z_score(0.9, 1.0, 0.0) == -std::numeric_limits<double>::infinity());
    }

    TEST_CASE("deterministic joint gives exact zeros")
    {
        const auto src = ProbVector({0.2, 0.3, 0.5});
        const auto id = Channel::identity(3);
        const auto rep = simulate_finite(JointDistribution::compose(src, id, id), CostMatrix::hamming(3),
                                         DistortionMatrix::hamming(3), 10000, 1);
        CHECK(rep.D.value == 0.0);
        CHECK(rep.P.value == 0.0);
        CHECK(rep.rate.target == Approx(entropy(src)));
        CHECK(within(rep.rate));
    }

    TEST_CASE("sample count guard")
    {
        const auto id = Channel::identity(2);
        const auto j = JointDistribution::compose(ProbVector::uniform(2), id, id);
        CHECK_THROWS_AS(simulate_finite(j, CostMatrix::hamming(2), DistortionMatrix::hamming(2), 99, 0), InputError);
    }

    TEST_CASE("binary optimum at D = P = 0.11: estimates close on the analytic values")
    {
        static const EnvelopeModel env = build_envelope(512);
        SolverConfig cfg;
        cfg.envelope = &env;
        const auto prob = RdpProblem::binary_preset(0.11, 0.11);
        const auto sol = solve_rdp(prob, cfg);
        const auto joint = JointDistribution::compose(prob.source, sol.encoder, sol.decoder);
        const auto rep = simulate_finite(joint, prob.cost, prob.distortion, 1000000, 2024);
        CHECK(rep.D.target == Approx(sol.achieved_D).epsilon(1e-12));
        CHECK(rep.P.target == Approx(sol.achieved_P).epsilon(1e-12));
        CHECK(within(rep.D));
        CHECK(within(rep.P));
        CHECK(rep.D.se > 0.0);
        CHECK(rep.P.se > 0.0);
        CHECK(rep.D.z == Approx((rep.D.value - rep.D.target) / rep.D.se));
    }

    TEST_CASE("independent joint: plug-in information near zero")
    {
        test::Rng rng(72);
        const auto src = test::random_pmf(rng, 3);
        const auto row = test::random_pmf(rng, 4);
        const auto rep = simulate_finite(JointDistribution::compose(src, Channel::constant(3, row), test::random_channel(rng, 4, 3)),
                                         CostMatrix::hamming(3), DistortionMatrix::hamming(3), 200000, 5);
        CHECK(rep.rate.target == Approx(0.0).epsilon(1e-12));
        CHECK(within(rep.rate));
    }

    TEST_CASE("sparse conditional bins raise a warning")
    {
        const auto enc = Channel(std::vector<std::vector<double>>{{0.9995, 0.0005}, {1.0, 0.0}});
        const auto dec = Channel::identity(2);
        const auto rep = simulate_finite(JointDistribution::compose(ProbVector::uniform(2), enc, dec),
                                         CostMatrix::hamming(2), DistortionMatrix::hamming(2), 2000, 3);
        CHECK_FALSE(rep.warnings.empty());
    }

    TEST_CASE("finite reports are reproducible and independent of threading")
    {
        test::Rng rng(73);
        const auto j = JointDistribution::compose(test::random_pmf(rng, 3), test::random_channel(rng, 3, 3),
                                                  test::random_channel(rng, 3, 3));
        SimOptions serial;
        serial.parallel = false;
        const auto a = simulate_finite(j, CostMatrix::hamming(3), DistortionMatrix::hamming(3), 50000, 11);
        const auto b = simulate_finite(j, CostMatrix::hamming(3), DistortionMatrix::hamming(3), 50000, 11);
        const auto c = simulate_finite(j, CostMatrix::hamming(3), DistortionMatrix::hamming(3), 50000, 11, serial);
        const auto d = simulate_finite(j, CostMatrix::hamming(3), DistortionMatrix::hamming(3), 50000, 12);
        CHECK(same(a, b));
        CHECK(same(a, c));
        CHECK_FALSE(same(a, d));
    }

    TEST_CASE("Gaussian constructions")
    {
        const GaussianVectorSource one({1.0});
        const auto r0 = simulate_gaussian(achieving_joint(one, waterfill(one, 0.2, 0.0)), 1000000, 5);
        CHECK(r0.D.target == Approx(0.2));
        CHECK(r0.P.target == Approx(0.0));
        CHECK(within(r0.D));
        CHECK(within(r0.P));

        const auto r1 = simulate_gaussian(achieving_joint(one, waterfill(one, 0.2, 0.05)), 1000000, 6);
        CHECK(r1.P.target == Approx(0.05).epsilon(1e-12));
        CHECK(within(r1.P));
        CHECK(within(r1.D));

        const auto r2 = simulate_gaussian(achieving_joint(one, waterfill(one, 0.2, 0.4)), 1000000, 7);
        CHECK(r2.P.target == Approx(0.2));
        CHECK(within(r2.P));
        CHECK(r2.rate.value == Approx(0.5 * std::log(5.0)));
        CHECK(r2.rate.se == 0.0);

        const GaussianVectorSource three({1.0, 0.4, 0.05});
        const auto r3 = simulate_gaussian(achieving_joint(three, waterfill(three, 0.6, 0.1)), 400000, 8);
        CHECK(within(r3.D));
        CHECK(within(r3.P));
    }

    TEST_CASE("Gaussian reports are reproducible; serial equals parallel")
    {
        const GaussianVectorSource src({1.0, 0.3});
        const auto c = achieving_joint(src, waterfill(src, 0.5, 0.1));
        SimOptions serial;
        serial.parallel = false;
        CHECK(same(simulate_gaussian(c, 100000, 3), simulate_gaussian(c, 100000, 3)));
        CHECK(same(simulate_gaussian(c, 100000, 3), simulate_gaussian(c, 100000, 3, serial)));
    }

    TEST_CASE("standard error shrinks like one over root n")
    {
        const GaussianVectorSource one({1.0});
        const auto c = achieving_joint(one, waterfill(one, 0.2, 0.05));
        double ratio = 0.0;
        const int seeds = 8;
        for (int s = 0; s < seeds; ++s) {
            ratio += simulate_gaussian(c, 50000, 100 + s).D.se / simulate_gaussian(c, 100000, 200 + s).D.se;
        }
        ratio /= seeds;
        CHECK(ratio == Approx(std::sqrt(2.0)).epsilon(0.1));
    }

    TEST_CASE("mixture entropy by Monte Carlo")
    {
        constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;
        GaussianMixtureSource iso(ProbVector({1.0}), {Eigen::VectorXd::Zero(2)}, {Eigen::MatrixXd::Identity(2, 2)});
        const auto a = mixture_entropy_mc(iso, 200000, 1);
        CHECK(std::abs(a.h_x - std::log(kTwoPiE)) <= 3 * a.se);
        CHECK(std::log(kTwoPiE) == Approx(2.837877).epsilon(1e-6));

        GaussianMixtureSource twin(ProbVector({0.5, 0.5}), {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)},
                                   {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)});
        const auto b = mixture_entropy_mc(twin, 200000, 1);
        CHECK(std::abs(b.h_x - std::log(kTwoPiE)) <= 3 * b.se);

        std::vector<Eigen::VectorXd> m{Eigen::VectorXd::Constant(1, -5.0), Eigen::VectorXd::Constant(1, 5.0)};
        std::vector<Eigen::MatrixXd> v{Eigen::MatrixXd::Constant(1, 1, 0.25), Eigen::MatrixXd::Constant(1, 1, 0.25)};
        GaussianMixtureSource far(ProbVector({0.5, 0.5}), m, v);
        const auto c = mixture_entropy_mc(far, 200000, 2);
        CHECK(std::abs(c.h_x - mixture_entropy_quadrature(far)) <= 3 * c.se);
        CHECK(std::abs(c.h_x - (0.5 * std::log(kTwoPiE * 0.25) + std::log(2.0))) <= 3 * c.se);
    }
}
