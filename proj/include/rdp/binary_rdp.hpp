#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rdp/hull.hpp"
#include "rdp/probability.hpp"

namespace rdp {

/// max H_b(a) over the single-u feasible set: Hamming distortion <= D and
/// |a - a_hat| <= P. Equals log 2 for D >= 1/2.
double hbar(double D, double P);

struct LemmaOptimum {
    double value = 0.0;
    double a = 0.0;     // p(X = 1 | u)
    double a_hat = 0.0; // p(X-hat = 1 | u)
};

/// Maximizer of H_b(a) s.t. (1-a) a_hat + a (1-a_hat) <= D, |a - a_hat| <= P.
/// When P >= D the maximizer is not unique; a_hat = 0 is returned.
LemmaOptimum envelope_lemma_opt(double D, double P);

/// Second partials of hbar, [[d2/dD2, d2/dDdP], [d2/dPdD, d2/dP2]], on 0 < P < D < 1/2.
std::array<std::array<double, 2>, 2> hbar_hessian(double D, double P);

/// A point of the envelope written as a mixture of three graph points of hbar.
struct EnvelopeDecomposition {
    double value = 0.0;
    std::array<Point3, 3> points{}; // (D_k, P_k, hbar(D_k, P_k))
    std::array<double, 3> weights{};
};

/// Upper concave envelope of hbar on [0, d_max]^2, extended constantly beyond.
/// Immutable after construction; evaluation is thread-safe.
class EnvelopeModel {
public:
    EnvelopeModel() = default;
    EnvelopeModel(std::size_t grid_n, double d_max, std::vector<Point3> vertices,
                  std::vector<std::array<std::size_t, 3>> facets, std::size_t candidates);

    double value(double D, double P) const;
    EnvelopeDecomposition decompose(double D, double P) const;

    std::size_t grid_n() const noexcept { return grid_n_; }
    double d_max() const noexcept { return d_max_; }
    double spacing() const noexcept { return d_max_ / static_cast<double>(grid_n_); }
    /// Envelope values at grid nodes dominate hbar to within this.
    static constexpr double node_tolerance() { return 1e-9; }
    /// Grid nodes that survived the 1-D pre-filter and entered the 3-D hull.
    std::size_t candidate_count() const noexcept { return candidates_; }
    const std::vector<Point3>& vertices() const noexcept { return vertices_; }
    const std::vector<std::array<std::size_t, 3>>& facets() const noexcept { return facets_; }

private:
    // Index of the facet containing the clamped query and its barycentric weights.
    std::size_t locate(double D, double P, std::array<double, 3>& bary) const;

    std::size_t grid_n_ = 0;
    double d_max_ = 0.0;
    std::vector<Point3> vertices_;
    std::vector<std::array<std::size_t, 3>> facets_;
    std::size_t candidates_ = 0;
    std::size_t buckets_ = 1;
    std::vector<std::vector<std::size_t>> bucket_facets_;
};

/// Builds the envelope from the (grid_n + 1)^2 node cloud. Throws for
/// grid_n < 16 or d_max < 1/2.
EnvelopeModel build_envelope(std::size_t grid_n = 512, double d_max = 0.6, bool parallel = true);

/// log 2 minus the envelope.
double rate_binary(double D, double P, const EnvelopeModel& env);

/// Six-state scheme for Ber(1/2) reaching rate log 2 - envelope(D, P):
/// three mixture components, each mirrored under x -> 1 - x.
struct SymmetricConstruction {
    ProbVector p_u;
    Channel encoder;  // p(u | x), 2 x 6
    Channel decoder;  // p(x-hat | u), 6 x 2
    Channel backward; // p(x | u), 6 x 2
    double rate = 0.0;
    double distortion = 0.0;
    double perception = 0.0;
};

SymmetricConstruction symmetric_construction(const EnvelopeModel& env, double D, double P);

} // namespace rdp
