#include "common.hpp"
#include "rdp/errors.hpp"

namespace rdp::kernels::omp {

std::vector<double> hbar_grid(std::size_t n, double d_max)
{
    const std::size_t m = n + 1;
    std::vector<double> z(m * m);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            z[i * m + j] = hbar(detail::grid_coord(i, n, d_max), detail::grid_coord(j, n, d_max));
        }
    }
    return z;
}

std::vector<std::uint8_t> hull_candidate_mask(std::size_t n, std::span<const double> z)
{
    require(z.size() == (n + 1) * (n + 1), "grid values have the wrong size");
    std::vector<std::uint8_t> mask(z.size(), 1);
    const auto lines = detail::grid_lines(n);
    // grid_lines interleaves two directions per block; each direction is swept
    // on its own so concurrent lines never touch the same node.
    const std::size_t m = n + 1;
    for (std::size_t dir = 0; dir < 4; ++dir) {
        const std::size_t begin = dir < 2 ? 0 : 2 * m;
        const std::size_t end = dir < 2 ? 2 * m : lines.size();
        const std::size_t parity = dir % 2;
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t k = begin + parity; k < end; k += 2) {
            detail::line_hull_filter(lines[k], z, mask);
        }
    }
    return mask;
}

void envelope_batch(const EnvelopeModel& env, std::span<const double> D, std::span<const double> P,
                    std::span<double> out)
{
    require(D.size() == P.size() && D.size() == out.size(), "batch sizes differ");
    const std::size_t count = D.size();
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = env.value(D[k], P[k]);
    }
}

std::vector<std::vector<std::uint64_t>> categorical_counts(std::span<const double> mass, std::size_t n,
                                                           std::uint64_t seed, std::size_t batches)
{
    require(!mass.empty() && batches > 0, "categorical sampling needs outcomes and batches");
    const auto cum = detail::cumulative(mass);
    const CounterRng rng(seed);
    std::vector<std::vector<std::uint64_t>> counts(batches);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < batches; ++b) {
        detail::count_batch(cum, detail::batch_begin(b, n, batches), detail::batch_begin(b + 1, n, batches), rng,
                            counts[b]);
    }
    return counts;
}

void gaussian_draws(std::size_t n, std::uint64_t seed, std::span<const double> u_sd, std::span<const double> v_sd,
                    std::span<const double> v_hat_sd, std::vector<std::vector<double>>& u,
                    std::vector<std::vector<double>>& v, std::vector<std::vector<double>>& v_hat)
{
    require(u_sd.size() == v_sd.size() && v_sd.size() == v_hat_sd.size(), "noise scale vectors differ in length");
    detail::size_draws(n, v_sd.size(), u, v, v_hat);
    const CounterRng rng(seed);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        detail::gaussian_sample(i, rng, u_sd, v_sd, v_hat_sd, u, v, v_hat);
    }
}

} // namespace rdp::kernels::omp
