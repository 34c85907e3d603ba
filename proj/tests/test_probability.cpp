#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rdp/errors.hpp"
#include "rdp/probability.hpp"
#include "support.hpp"

using namespace rdp;
using doctest::Approx;

TEST_SUITE("probability")
{
    TEST_CASE("pmf validation")
    {
        CHECK_THROWS_AS(ProbVector({0.5, 0.6}), InputError);
        CHECK_THROWS_AS(ProbVector({1.1, -0.1}), InputError);
        CHECK_THROWS_AS(ProbVector(std::vector<double>{}), InputError);
        // Off by less than the renormalization tolerance: accepted and rescaled.
        const ProbVector p({0.5 + 4e-10, 0.5});
        CHECK(p[0] + p[1] == Approx(1.0).epsilon(1e-15));
        // Tiny negative round-off is clamped to zero.
        const ProbVector q({1.0 + 1e-13, -1e-13});
        CHECK(q[1] == 0.0);
    }

    TEST_CASE("channel rows must be pmfs of equal length")
    {
        CHECK_THROWS_AS(Channel(std::vector<std::vector<double>>{{0.5, 0.5}, {1.0}}), InputError);
        CHECK_THROWS_AS(Channel(std::vector<std::vector<double>>{{0.5, 0.6}, {0.5, 0.5}}), InputError);
        const Channel c = Channel::bsc(0.1);
        CHECK(c(0, 1) == Approx(0.1));
        CHECK(c(1, 1) == Approx(0.9));
    }

    TEST_CASE("distortion matrix zero-diagonal flag is checked")
    {
        CHECK_NOTHROW(DistortionMatrix(Matrix::from_rows({{0, 1}, {1, 0}}), true));
        CHECK_THROWS_AS(DistortionMatrix(Matrix::from_rows({{0, 0}, {1, 0}}), true), InputError);
        CHECK_THROWS_AS(DistortionMatrix(Matrix::from_rows({{0, -1}, {1, 0}})), InputError);
    }

    TEST_CASE("entropy examples")
    {
        CHECK(entropy(ProbVector({0.5, 0.5})) == Approx(std::numbers::ln2).epsilon(1e-15));
        CHECK(entropy(ProbVector({1.0, 0.0})) == 0.0);
        CHECK(entropy(ProbVector({0.25, 0.75})) == Approx(0.562335).epsilon(1e-6));
    }

    TEST_CASE("binary entropy examples")
    {
        CHECK(binary_entropy(0.5) == Approx(std::numbers::ln2).epsilon(1e-15));
        CHECK(binary_entropy(0.0) == 0.0);
        CHECK(binary_entropy(1.0) == 0.0);
        CHECK(binary_entropy(0.11) == Approx(0.346515).epsilon(1e-6));
        CHECK(binary_entropy(0.11) == Approx(entropy(ProbVector({0.11, 0.89}))).epsilon(1e-15));
        CHECK(binary_entropy(0.3) == Approx(binary_entropy(0.7)).epsilon(1e-15));
        CHECK_THROWS_AS(binary_entropy(-0.01), InputError);
        CHECK_THROWS_AS(binary_entropy(1.01), InputError);
    }

    TEST_CASE("mutual information examples")
    {
        const auto half = ProbVector::uniform(2);
        CHECK(mutual_information(half, Channel::identity(2)) == Approx(std::numbers::ln2).epsilon(1e-15));
        CHECK(mutual_information(half, Channel::constant(2, half)) == Approx(0.0));
        CHECK(mutual_information(half, Channel::bsc(0.11)) == Approx(0.346632).epsilon(1e-6));
        CHECK_THROWS_AS(mutual_information(ProbVector::uniform(3), Channel::identity(2)), InputError);
    }

    TEST_CASE("posterior examples")
    {
        const auto half = ProbVector::uniform(2);
        const Posterior a = posterior(half, Channel::identity(2));
        CHECK(a.p_u[0] == Approx(0.5));
        CHECK(a.back(0, 0) == Approx(1.0));
        CHECK(a.back(1, 1) == Approx(1.0));

        const Posterior b = posterior(ProbVector({1.0, 0.0}), Channel::bsc(0.2));
        for (std::size_t u = 0; u < 2; ++u) {
            CHECK(b.back(u, 0) == Approx(1.0));
        }

        const Posterior c = posterior(half, Channel::bsc(0.1));
        CHECK(c.back(0, 1) == Approx(0.1).epsilon(1e-14));
        CHECK(c.back(1, 0) == Approx(0.1).epsilon(1e-14));

        // Unreachable output gets a uniform row and the unused flag.
        const Posterior d = posterior(half, Channel(std::vector<std::vector<double>>{{1, 0, 0}, {0, 1, 0}}));
        CHECK(d.unused[2]);
        CHECK(d.back(2, 0) == Approx(0.5));
        CHECK_FALSE(d.unused[0]);
    }

    TEST_CASE("expected distortion examples")
    {
        const auto half = ProbVector::uniform(2);
        const auto hamming = DistortionMatrix::hamming(2);
        const auto id = Channel::identity(2);
        CHECK(expected_distortion(JointDistribution::compose(half, id, id), hamming) == 0.0);
        const auto indep = Channel::constant(2, half);
        CHECK(expected_distortion(JointDistribution::compose(half, indep, indep), hamming) == Approx(0.5));
        CHECK(expected_distortion(JointDistribution::compose(half, id, Channel::bsc(0.11)), hamming) ==
              Approx(0.11).epsilon(1e-14));
    }

    TEST_CASE("compose is Markov; marginals agree")
    {
        test::Rng rng(11);
        for (int t = 0; t < 20; ++t) {
            const auto p = test::random_pmf(rng, 3);
            const auto j = JointDistribution::compose(p, test::random_channel(rng, 3, 4), test::random_channel(rng, 4, 2));
            CHECK(j.markov());
            CHECK(j.markov_violation() <= 1e-12);
            for (std::size_t x = 0; x < 3; ++x) {
                CHECK(j.marginal_x()[x] == Approx(p[x]).epsilon(1e-12));
            }
        }
        // A joint where X-hat copies X but U is constant is not Markov.
        const JointDistribution nm(2, 1, 2, {0.5, 0.0, 0.0, 0.5});
        CHECK_FALSE(nm.markov());
        CHECK(nm.markov_violation() == Approx(0.5));
    }

    TEST_CASE("property: entropy is concave")
    {
        test::Rng rng(1);
        std::uniform_real_distribution<double> lam(0.0, 1.0);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 2 + t % 5;
            const auto p = test::random_pmf(rng, n, true);
            const auto q = test::random_pmf(rng, n, true);
            const double l = lam(rng);
            CHECK(entropy(p.mix(q, l)) >= (1 - l) * entropy(p) + l * entropy(q) - 1e-12);
            CHECK(entropy(p) <= std::log(static_cast<double>(n)) + 1e-12);
        }
    }

    TEST_CASE("property: mutual information bounded by both entropies")
    {
        test::Rng rng(2);
        for (int t = 0; t < 200; ++t) {
            const auto p = test::random_pmf(rng, 4, true);
            const auto ch = test::random_channel(rng, 4, 3);
            const double I = mutual_information(p, ch);
            const Posterior post = posterior(p, ch);
            CHECK(I >= 0.0);
            CHECK(I <= std::min(entropy(p), entropy(post.p_u)) + 1e-12);
        }
    }

    TEST_CASE("property: posterior re-mixes to the source")
    {
        test::Rng rng(3);
        for (int t = 0; t < 200; ++t) {
            const auto p = test::random_pmf(rng, 4, true);
            const auto ch = test::random_channel(rng, 4, 5);
            const Posterior post = posterior(p, ch);
            for (std::size_t x = 0; x < 4; ++x) {
                double s = 0.0;
                for (std::size_t u = 0; u < 5; ++u) {
                    s += post.p_u[u] * post.back(u, x);
                }
                CHECK(s == Approx(p[x]).epsilon(1e-10));
            }
        }
    }

    TEST_CASE("property: expected distortion is linear in the joint")
    {
        test::Rng rng(4);
        std::uniform_real_distribution<double> lam(0.0, 1.0);
        const DistortionMatrix d(test::random_costs(rng, 3, 3, true), true);
        for (int t = 0; t < 100; ++t) {
            const auto a = JointDistribution::compose(test::random_pmf(rng, 3), test::random_channel(rng, 3, 2),
                                                      test::random_channel(rng, 2, 3));
            const auto b = JointDistribution::compose(test::random_pmf(rng, 3), test::random_channel(rng, 3, 2),
                                                      test::random_channel(rng, 2, 3));
            const double l = lam(rng);
            std::vector<double> m(a.mass().size());
            for (std::size_t i = 0; i < m.size(); ++i) {
                m[i] = (1 - l) * a.mass()[i] + l * b.mass()[i];
            }
            const JointDistribution mix(3, 2, 3, m);
            CHECK(expected_distortion(mix, d) ==
                  Approx((1 - l) * expected_distortion(a, d) + l * expected_distortion(b, d)).epsilon(1e-12));
        }
    }

    TEST_CASE("mutual information from a joint table matches the channel form")
    {
        test::Rng rng(5);
        const auto p = test::random_pmf(rng, 3);
        const auto ch = test::random_channel(rng, 3, 4);
        Matrix joint(3, 4);
        for (std::size_t x = 0; x < 3; ++x) {
            for (std::size_t u = 0; u < 4; ++u) {
                joint(x, u) = 2.0 * p[x] * ch(x, u);
            }
        }
        CHECK(mutual_information(joint) == Approx(mutual_information(p, ch)).epsilon(1e-12));
    }
}
