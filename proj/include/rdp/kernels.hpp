#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdp {
class EnvelopeModel;
}

// Data-parallel kernels. `serial` is the reference; `omp` must produce
// identical results and is what the library calls by default.
namespace rdp::kernels {

/// Tolerance for keeping a node that sits on a 1-D upper hull.
inline constexpr double kCandidateTol = 1e-12;

namespace serial {

/// hbar at nodes (d_max * i / n, d_max * j / n); entry i * (n + 1) + j.
std::vector<double> hbar_grid(std::size_t n, double d_max);

/// Marks nodes lying on the 1-D upper hull of every row, column and diagonal.
/// Nodes that fail any of the four tests cannot be vertices of the 2-D envelope.
std::vector<std::uint8_t> hull_candidate_mask(std::size_t n, std::span<const double> z);

void envelope_batch(const EnvelopeModel& env, std::span<const double> D, std::span<const double> P,
                    std::span<double> out);

/// Draw counts of `n` categorical samples from the flat pmf `mass`, split into
/// `batches` contiguous index ranges; result[b][k] counts outcome k in batch b.
std::vector<std::vector<std::uint64_t>> categorical_counts(std::span<const double> mass, std::size_t n,
                                                           std::uint64_t seed, std::size_t batches);

/// Noise pairs for the Gaussian construction: v[l][i] ~ N(0, v_sd[l]^2) and
/// v_hat[l][i] ~ N(0, v_hat_sd[l]^2), plus u[l][i] ~ N(0, u_sd[l]^2).
void gaussian_draws(std::size_t n, std::uint64_t seed, std::span<const double> u_sd, std::span<const double> v_sd,
                    std::span<const double> v_hat_sd, std::vector<std::vector<double>>& u,
                    std::vector<std::vector<double>>& v, std::vector<std::vector<double>>& v_hat);

} // namespace serial

namespace omp {

std::vector<double> hbar_grid(std::size_t n, double d_max);
std::vector<std::uint8_t> hull_candidate_mask(std::size_t n, std::span<const double> z);
void envelope_batch(const EnvelopeModel& env, std::span<const double> D, std::span<const double> P,
                    std::span<double> out);
std::vector<std::vector<std::uint64_t>> categorical_counts(std::span<const double> mass, std::size_t n,
                                                           std::uint64_t seed, std::size_t batches);
void gaussian_draws(std::size_t n, std::uint64_t seed, std::span<const double> u_sd, std::span<const double> v_sd,
                    std::span<const double> v_hat_sd, std::vector<std::vector<double>>& u,
                    std::vector<std::vector<double>>& v, std::vector<std::vector<double>>& v_hat);

} // namespace omp

namespace detail {

/// Clears mask entries of the line's points (flat indices `idx`) that lie
/// strictly below the line's upper hull.
void line_hull_filter(std::span<const std::size_t> idx, std::span<const double> z,
                      std::span<std::uint8_t> mask);

/// Index of the outcome whose cumulative interval contains u.
std::size_t categorical_pick(std::span<const double> cumulative, double u);

/// Flat indices of every row, column, diagonal and anti-diagonal of the grid.
std::vector<std::vector<std::size_t>> grid_lines(std::size_t n);

} // namespace detail

} // namespace rdp::kernels
