#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "rdp/binary_rdp.hpp"
#include "rdp/kernels.hpp"
#include "rdp/rng.hpp"

namespace rdp::kernels::detail {

inline double grid_coord(std::size_t i, std::size_t n, double d_max)
{
    return d_max * static_cast<double>(i) / static_cast<double>(n);
}

inline std::vector<double> cumulative(std::span<const double> mass)
{
    std::vector<double> c(mass.size());
    double s = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        s += mass[k];
        c[k] = s;
    }
    return c;
}

inline std::size_t batch_begin(std::size_t b, std::size_t n, std::size_t batches)
{
    return b * (n / batches) + std::min(b, n % batches);
}

inline void count_batch(const std::vector<double>& cum, std::size_t begin, std::size_t end, const CounterRng& rng,
                        std::vector<std::uint64_t>& counts)
{
    counts.assign(cum.size(), 0);
    for (std::size_t i = begin; i < end; ++i) {
        ++counts[categorical_pick(cum, rng.uniforms(i, 0).first)];
    }
}

inline void gaussian_sample(std::size_t i, const CounterRng& rng, std::span<const double> u_sd,
                            std::span<const double> v_sd, std::span<const double> v_hat_sd,
                            std::vector<std::vector<double>>& u, std::vector<std::vector<double>>& v,
                            std::vector<std::vector<double>>& v_hat)
{
    for (std::size_t l = 0; l < v_sd.size(); ++l) {
        const auto c = static_cast<std::uint32_t>(2 * l);
        const auto [a, b] = rng.normals(i, c);
        v[l][i] = v_sd[l] * a;
        v_hat[l][i] = v_hat_sd[l] * b;
        u[l][i] = u_sd[l] * rng.normals(i, c + 1).first;
    }
}

inline void size_draws(std::size_t n, std::size_t L, std::vector<std::vector<double>>& u,
                       std::vector<std::vector<double>>& v, std::vector<std::vector<double>>& v_hat)
{
    u.assign(L, std::vector<double>(n));
    v.assign(L, std::vector<double>(n));
    v_hat.assign(L, std::vector<double>(n));
}

} // namespace rdp::kernels::detail
