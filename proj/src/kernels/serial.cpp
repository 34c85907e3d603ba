#include <algorithm>

#include "common.hpp"
#include "rdp/errors.hpp"

namespace rdp::kernels {

namespace detail {

void line_hull_filter(std::span<const std::size_t> idx, std::span<const double> z,
                      std::span<std::uint8_t> mask)
{
    const std::size_t len = idx.size();
    if (len < 3) {
        return;
    }
    // Andrew's monotone chain on (k, z[idx[k]]), upper part only.
    std::vector<std::size_t> hull;
    hull.reserve(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double zk = z[idx[k]];
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull.back();
            const double za = z[idx[a]];
            const double zb = z[idx[b]];
            // b is not above the chord a -> k
            const double lhs = (zb - za) * static_cast<double>(k - a);
            const double rhs = (zk - za) * static_cast<double>(b - a);
            if (lhs <= rhs) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(k);
    }
    std::size_t seg = 0;
    for (std::size_t k = 0; k < len; ++k) {
        while (seg + 1 < hull.size() && hull[seg + 1] < k) {
            ++seg;
        }
        if (seg + 1 >= hull.size()) {
            break;
        }
        const std::size_t a = hull[seg];
        const std::size_t b = hull[seg + 1];
        const double t = static_cast<double>(k - a) / static_cast<double>(b - a);
        const double top = (1.0 - t) * z[idx[a]] + t * z[idx[b]];
        if (z[idx[k]] < top - kCandidateTol) {
            mask[idx[k]] = 0;
        }
    }
}

std::size_t categorical_pick(std::span<const double> cumulative, double u)
{
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
    const auto k = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(k, cumulative.size() - 1);
}

std::vector<std::vector<std::size_t>> grid_lines(std::size_t n)
{
    const std::size_t m = n + 1;
    std::vector<std::vector<std::size_t>> lines;
    lines.reserve(2 * m + 2 * (2 * m - 1));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> row;
        std::vector<std::size_t> col;
        for (std::size_t j = 0; j < m; ++j) {
            row.push_back(i * m + j);
            col.push_back(j * m + i);
        }
        lines.push_back(std::move(row));
        lines.push_back(std::move(col));
    }
    // Diagonals i - j = const and anti-diagonals i + j = const.
    for (std::size_t s = 0; s < 2 * m - 1; ++s) {
        std::vector<std::size_t> diag;
        std::vector<std::size_t> anti;
        for (std::size_t i = 0; i < m; ++i) {
            if (s + i >= m - 1 && s + i - (m - 1) < m) {
                diag.push_back(i * m + (s + i - (m - 1)));
            }
            if (s >= i && s - i < m) {
                anti.push_back(i * m + (s - i));
            }
        }
        lines.push_back(std::move(diag));
        lines.push_back(std::move(anti));
    }
    return lines;
}

} // namespace detail

namespace serial {

std::vector<double> hbar_grid(std::size_t n, double d_max)
{
    const std::size_t m = n + 1;
    std::vector<double> z(m * m);
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
    for (const auto& line : detail::grid_lines(n)) {
        detail::line_hull_filter(line, z, mask);
    }
    return mask;
}

void envelope_batch(const EnvelopeModel& env, std::span<const double> D, std::span<const double> P,
                    std::span<double> out)
{
    require(D.size() == P.size() && D.size() == out.size(), "batch sizes differ");
    for (std::size_t k = 0; k < D.size(); ++k) {
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
    for (std::size_t i = 0; i < n; ++i) {
        detail::gaussian_sample(i, rng, u_sd, v_sd, v_hat_sd, u, v, v_hat);
    }
}

} // namespace serial

} // namespace rdp::kernels
