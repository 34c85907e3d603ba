#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rdp/matrix.hpp"
#include "rdp/probability.hpp"

namespace rdp::test {

using Rng = std::mt19937_64;

// Dirichlet(1, ..., 1), with an occasional exact zero to exercise support handling.
inline ProbVector random_pmf(Rng& rng, std::size_t n, bool allow_zeros = false)
{
    std::exponential_distribution<double> e(1.0);
    std::bernoulli_distribution drop(0.15);
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& v : w) {
        v = (allow_zeros && drop(rng)) ? 0.0 : e(rng);
        s += v;
    }
    if (s == 0.0) {
        w[0] = s = 1.0;
    }
    for (auto& v : w) {
        v /= s;
    }
    return ProbVector(w);
}

inline Channel random_channel(Rng& rng, std::size_t in, std::size_t out)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < in; ++i) {
        auto p = random_pmf(rng, out);
        rows.emplace_back(p.begin(), p.end());
    }
    return Channel(rows);
}

inline Matrix random_costs(Rng& rng, std::size_t a, std::size_t b, bool proper)
{
    std::uniform_real_distribution<double> u(0.1, 2.0);
    Matrix m(a, b);
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            m(i, j) = (proper && i == j) ? 0.0 : u(rng);
        }
    }
    return m;
}

} // namespace rdp::test
