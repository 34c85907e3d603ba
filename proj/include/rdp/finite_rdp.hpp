#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdp/binary_rdp.hpp"
#include "rdp/probability.hpp"
#include "rdp/transport.hpp"

namespace rdp {

enum class Provenance { closed_form, envelope, solver, lower_bound };

const char* to_string(Provenance p);

struct RdpPoint {
    double D = 0.0;
    double P = 0.0;
    double rate = 0.0;
    Provenance provenance = Provenance::solver;
    /// False when the solver did not reach a feasible point or a monotonicity check failed.
    bool ok = true;
};

struct RdpProblem {
    ProbVector source;
    DistortionMatrix distortion;
    CostMatrix cost;
    double D = 0.0;
    double P = 0.0;
    std::size_t u_card = 0;

    /// u_card defaults to |X| + 2.
    static RdpProblem make(ProbVector source, DistortionMatrix distortion, CostMatrix cost, double D, double P,
                           std::size_t u_card = 0);
    /// X ~ Ber(1/2), Hamming distortion and cost, |U| = 6.
    static RdpProblem binary_preset(double D, double P);

    void validate() const;
    bool is_binary_preset() const;
};

struct SolverConfig {
    std::size_t restarts = 32;
    std::uint64_t seed = 0;
    std::size_t max_outer = 30;
    std::size_t max_inner = 150;
    /// Budgets count as met within this absolute slack.
    double constraint_tol = 1e-6;
    /// The distortion target handed to the optimizer is D - margin.
    double margin = 1e-8;
    /// Seed some restarts with Blahut-Arimoto, identity-like and (binary preset) six-state encoders.
    bool structured_starts = true;
    /// Envelope for the six-state start; built on demand when null.
    const EnvelopeModel* envelope = nullptr;
    bool parallel = true;
};

struct RdpSolution {
    double rate = 0.0;
    Channel encoder; // p(u | x)
    Channel decoder; // p(x-hat | u)
    double achieved_D = 0.0;
    double achieved_P = 0.0;
    bool converged = false;
    std::size_t restarts_used = 0;
    /// max(0, achieved_D - D) + max(0, achieved_P - P) of the returned pair.
    double feasibility_gap = 0.0;
    /// Price of perception in units of distortion at the returned encoder.
    double perception_price = 0.0;
};

/// Least-distortion decoder for a fixed encoder subject to E[phi] <= P.
struct DecoderResponse {
    Channel decoder;
    double distortion = 0.0;
    /// Perception bound from the couplings used (>= the exact E[phi]).
    double perception = 0.0;
    /// Lagrange multiplier of the perception budget.
    double mu = 0.0;
    /// False when no decoder meets the perception budget.
    bool feasible = true;
    /// Row prices m_u(x) = min over x-hat of delta_u(x-hat) + mu c(x, x-hat), |U| x |X|.
    Matrix row_price;
};

DecoderResponse best_decoder(const RdpProblem& prob, const Channel& encoder);

/// Exact E[phi(p(.|u), p(x-hat|u))] and E[Delta] for an encoder/decoder pair.
double expected_perception(const ProbVector& source, const Channel& encoder, const Channel& decoder,
                           const CostMatrix& cost);
double expected_distortion(const ProbVector& source, const Channel& encoder, const Channel& decoder,
                           const DistortionMatrix& d);

RdpSolution solve_rdp(const RdpProblem& prob, const SolverConfig& config = {});

/// Binary instances only: LP over posterior pairs (a, a_hat) on a (grid_k + 1)^2
/// lattice. Feasible lattice mixtures are achievable, so the result is an upper
/// bound on R(D, P) that converges as grid_k grows. Returns +inf if infeasible.
double oracle_rdp(const RdpProblem& prob, std::size_t grid_k);

struct ClassicalRd {
    double rate = 0.0;
    double distortion = 0.0;
    Channel test_channel; // p(x-hat | x)
};

/// Classical R(D) by Blahut-Arimoto with bisection on the slope.
ClassicalRd blahut_arimoto(const ProbVector& source, const DistortionMatrix& d, double D);

/// P budget given either absolutely or as a multiple of D.
struct PSpec {
    double value = 0.0;
    bool relative = false;

    double resolve(double D) const { return relative ? value * D : value; }
};

struct CurveResult {
    std::vector<RdpPoint> points; // D major, P minor
    bool monotone = true;
    std::vector<std::string> violations;
};

/// Solves every (D, P) pair of the grid; flags points that break monotonicity.
CurveResult rdp_curve(const RdpProblem& tmpl, std::span<const double> Ds, std::span<const PSpec> Ps,
                      const SolverConfig& config = {});

} // namespace rdp
