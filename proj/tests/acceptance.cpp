// End-to-end acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rdp/binary_rdp.hpp"
#include "rdp/finite_rdp.hpp"
#include "rdp/gaussian_rdp.hpp"
#include "rdp/simulate.hpp"
#include "rdp/transport.hpp"

using namespace rdp;

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || secs < budget_s;
    const bool ok = o.pass && in_time;
    failures += ok ? 0 : 1;
    std::printf("[%s] %s %s: %s; %.2fs%s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
                in_time ? "" : " (over time budget)");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::vector<double> spectrum(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> len(1, 6);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    std::vector<double> v(len(rng));
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

ProbVector random_pmf(std::mt19937_64& rng, std::size_t n)
{
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& v : w) {
        s += v = e(rng);
    }
    for (auto& v : w) {
        v /= s;
    }
    return ProbVector(w);
}

CostMatrix random_cost(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(0.1, 2.0);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = i == j ? 0.0 : u(rng);
    return CostMatrix(m, true);
}

// Fourth-order Richardson combination of central second differences.
std::array<double, 3> numeric_hessian(double D, double P, double h)
{
    auto central = [&](double s) {
        const double dd = (hbar(D + s, P) - 2 * hbar(D, P) + hbar(D - s, P)) / (s * s);
        const double pp = (hbar(D, P + s) - 2 * hbar(D, P) + hbar(D, P - s)) / (s * s);
        const double dp = (hbar(D + s, P + s) - hbar(D + s, P - s) - hbar(D - s, P + s) + hbar(D - s, P - s)) / (4 * s * s);
        return std::array<double, 3>{dd, pp, dp};
    };
    const auto a = central(h);
    const auto b = central(2 * h);
    return {(4 * a[0] - b[0]) / 3, (4 * a[1] - b[1]) / 3, (4 * a[2] - b[2]) / 3};
}

} // namespace

int main()
{
    criterion("AC1", "binary P=D column equals log 2 - H_b(D)", 5.0, [] {
        const EnvelopeModel env = build_envelope(512);
        double worst = 0.0;
        for (int i = 1; i <= 9; ++i) {
            const double D = 0.05 * i;
            worst = std::max(worst, std::abs(rate_binary(D, D, env) - (kLn2 - binary_entropy(D))));
        }
        return Outcome{worst <= 1e-3, fmt("max |error| = %.3g nats over 9 points (tol 1e-3)", worst)};
    });

    criterion("AC2", "binary P=0 column equals its closed form where the hull touches hbar", 0.0, [] {
        const EnvelopeModel env = build_envelope(512);
        double worst = 0.0;
        int confirmed = 0;
        for (int i = 1; i <= 9; ++i) {
            const double D = 0.05 * i;
            const double closed = kLn2 - binary_entropy((1 - std::sqrt(1 - 2 * D)) / 2);
            // Confirmation: hbar(D, 0) sits on the hull, and the independent oracle agrees with the closed form.
            const bool on_hull = env.value(D, 0.0) - hbar(D, 0.0) <= 1e-4;
            const double oracle = oracle_rdp(RdpProblem::binary_preset(D, 0.0), 64);
            if (!on_hull || std::abs(oracle - closed) > 1e-3) {
                continue;
            }
            ++confirmed;
            worst = std::max(worst, std::abs(rate_binary(D, 0.0, env) - closed));
        }
        return Outcome{confirmed >= 5 && worst <= 1e-3,
                       fmt("%.0f of 9 points confirmed; max |error| = %.3g (tol 1e-3)", confirmed, worst)};
    });

    criterion("AC3", "hbar Hessian at (0.499, 0.001) is indefinite and matches finite differences", 1.0, [] {
        const auto H = hbar_hessian(0.499, 0.001);
        const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
        const auto N = numeric_hessian(0.499, 0.001, 1e-5);
        const double rel = std::max({std::abs(H[0][0] - N[0]) / std::abs(N[0]), std::abs(H[1][1] - N[1]) / std::abs(N[1]),
                                     std::abs(H[0][1] - N[2]) / std::abs(N[2])});
        return Outcome{det < 0.0 && rel <= 1e-5, fmt("det = %.4g, max relative FD mismatch = %.3g (tol 1e-5)", det, rel)};
    });

    criterion("AC4", "finite solver sandwiched between oracle - 5e-3 and closed form + 2e-3 at 12 points", 60.0, [] {
        const EnvelopeModel env = build_envelope(512);
        SolverConfig cfg;
        cfg.restarts = 32;
        cfg.envelope = &env;
        int inside = 0;
        double worst_low = 1e9, worst_high = -1e9;
        for (double D : {0.05, 0.1, 0.2, 0.3}) {
            for (double f : {0.0, 0.5, 1.0}) {
                const auto prob = RdpProblem::binary_preset(D, f * D);
                const auto sol = solve_rdp(prob, cfg);
                const double oracle = oracle_rdp(prob, 64);
                const double closed = rate_binary(D, f * D, env);
                worst_low = std::min(worst_low, sol.rate - (oracle - 5e-3));
                worst_high = std::max(worst_high, sol.rate - (closed + 2e-3));
                inside += (sol.converged && sol.rate >= oracle - 5e-3 && sol.rate <= closed + 2e-3) ? 1 : 0;
            }
        }
        return Outcome{inside == 12, fmt("%.0f/12 inside; tightest margins %.3g", inside, std::min(worst_low, -worst_high))};
    });

    criterion("AC5", "Gaussian 3-dB law on 20 random spectra", 1.0, [] {
        std::mt19937_64 rng(5);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const auto l = spectrum(rng);
            const double total = std::accumulate(l.begin(), l.end(), 0.0);
            const double D = std::uniform_real_distribution<double>(0.01, 1.5 * total)(rng);
            worst = std::max(worst, std::abs(waterfill(GaussianVectorSource(l), D, 0.0).rate - classical_rd_rate(l, D / 2)));
        }
        return Outcome{worst <= 1e-12, fmt("max |error| = %.3g (tol 1e-12)", worst)};
    });

    criterion("AC6", "Gaussian rate equals the classical rate at D* on 100 random triples", 0.0, [] {
        std::mt19937_64 rng(6);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const auto l = spectrum(rng);
            const double total = std::accumulate(l.begin(), l.end(), 0.0);
            const double D = std::uniform_real_distribution<double>(0.01, 1.5 * total)(rng);
            const double P = std::uniform_real_distribution<double>(0.0, 1.5 * D)(rng);
            worst = std::max(worst, std::abs(waterfill(GaussianVectorSource(l), D, P).rate - classical_rd_rate(l, d_star(D, P))));
        }
        return Outcome{worst <= 1e-12, fmt("max |error| = %.3g (tol 1e-12)", worst)};
    });

    criterion("AC7", "KKT certificates for all four cases", 1.0, [] {
        struct Inst {
            std::vector<double> s;
            double D, P;
        };
        const std::vector<Inst> cases{{{1.0, 0.3, 0.05}, 0.4, 0.1}, {{1.0, 0.3, 0.05}, 0.5, 0.6}, {{0.1, 0.1}, 1.0, 0.1},
                                      {{0.1, 0.1}, 5.0, 5.0}};
        double worst = 0.0;
        bool ok = true;
        for (std::size_t k = 0; k < cases.size(); ++k) {
            const auto& c = cases[k];
            const auto sol = chi_program_solve(c.s, c.D, c.P);
            ok = ok && sol.case_index == static_cast<int>(k) + 1 && sol.multipliers.has_value();
            if (!sol.multipliers) {
                continue;
            }
            const auto& m = *sol.multipliers;
            ok = ok && m.nu1 >= 0.0 && m.nu2 >= 0.0;
            for (double v : m.tau) ok = ok && v >= 0.0;
            for (double v : m.tau_hat) ok = ok && v >= 0.0;
            worst = std::max(worst, kkt_residuals(c.s, c.D, c.P, sol).max());
        }
        return Outcome{ok && worst <= 1e-8, fmt("cases 1-4 hit, max residual = %.3g (tol 1e-8)", worst)};
    });

    criterion("AC8", "Monte Carlo closure of the Gaussian construction at D=0.2, P=0.05", 10.0, [] {
        const GaussianVectorSource src({1.0});
        const auto rep = simulate_gaussian(achieving_joint(src, waterfill(src, 0.2, 0.05)), 1000000, 20240501);
        const bool ok = std::abs(rep.D.value - 0.2) <= 3 * rep.D.se && std::abs(rep.P.value - 0.05) <= 3 * rep.P.se;
        return Outcome{ok, fmt("z_D = %.3f, z_P = %.3f (limit 3)", (rep.D.value - 0.2) / rep.D.se) +
                               fmt(" [P z=%.3f]", (rep.P.value - 0.05) / rep.P.se)};
    });

    criterion("AC9", "optimal-transport tensorization, convexity and continuity", 10.0, [] {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> lam(0.0, 1.0);
        int bad = 0;
        for (int t = 0; t < 50; ++t) {
            const std::size_t n1 = 2 + t % 2, n2 = 2 + (t / 2) % 2;
            const auto c1 = random_cost(rng, n1), c2 = random_cost(rng, n2);
            const auto p1 = random_pmf(rng, n1), q1 = random_pmf(rng, n1);
            const auto p2 = random_pmf(rng, n2), q2 = random_pmf(rng, n2);
            Matrix m(n1 * n2, n1 * n2);
            std::vector<double> p, q;
            for (std::size_t a = 0; a < n1; ++a)
                for (std::size_t b = 0; b < n2; ++b) {
                    p.push_back(p1[a] * p2[b]);
                    q.push_back(q1[a] * q2[b]);
                    for (std::size_t c = 0; c < n1; ++c)
                        for (std::size_t d = 0; d < n2; ++d)
                            m(a * n2 + b, c * n2 + d) = c1(a, c) + c2(b, d);
                }
            const double joint = discrete_ot(ProbVector(p), ProbVector(q), CostMatrix(m)).value;
            bad += std::abs(joint - discrete_ot(p1, q1, c1).value - discrete_ot(p2, q2, c2).value) > 1e-9;
        }
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 2 + t % 3;
            const auto c = random_cost(rng, n);
            const auto p = random_pmf(rng, n), pp = random_pmf(rng, n), q = random_pmf(rng, n), qq = random_pmf(rng, n);
            const double l = lam(rng);
            const double f = discrete_ot(p, q, c).value, g = discrete_ot(pp, qq, c).value;
            bad += discrete_ot(p.mix(pp, l), q.mix(qq, l), c).value > (1 - l) * f + l * g + 1e-9;
            bad += std::abs(f - g) > c.c_max() * (tv_distance(p, pp) + tv_distance(q, qq)) + 1e-9;
        }
        return Outcome{bad == 0, fmt("%.0f violations in 450 checks", bad)};
    });

    criterion("AC10", "mixture rate: one-mode reduction and the validity boundary", 0.0, [] {
        Eigen::Matrix2d cov;
        cov << 1.0, 0.0, 0.0, 0.5;
        GaussianMixtureSource one(ProbVector({1.0}), {Eigen::Vector2d::Zero()}, {cov});
        const double h_true = 0.5 * std::log(kTwoPiE * 1.0) + 0.5 * std::log(kTwoPiE * 0.5);
        const auto mc = mixture_entropy_mc(one, 400000, 10);
        const bool mc_ok = std::abs(mc.h_x - h_true) <= 3 * mc.se;
        one.h_x = mc_ok ? h_true : mc.h_x;
        const double D = 0.4, P = 0.1;
        const MixtureRate r = mixture_rate(one, D, P);
        const double diff = std::abs(r.rate - waterfill(GaussianVectorSource({1.0, 0.5}), D, P).rate);

        // Sweep D across the boundary D*/L = min eigenvalue (P = 0, so D* = D/2).
        Eigen::Matrix2d c1, c2;
        c1 << 0.5, 0.1, 0.1, 0.3;
        c2 << 0.4, 0.0, 0.0, 0.6;
        GaussianMixtureSource two(ProbVector({0.3, 0.7}), {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(-1.0, 0.5)}, {c1, c2});
        two.h_x = mixture_entropy_quadrature(two);
        const double lmin = two.min_eigenvalue();
        const double Dc = 4.0 * lmin;
        bool flips = mixture_rate(two, Dc, 0.0).valid && !mixture_rate(two, std::nextafter(Dc, 1.0) * (1 + 1e-12), 0.0).valid;
        for (int k = -50; k <= 50; ++k) {
            const double Dk = Dc * (1.0 + k * 1e-4);
            flips = flips && mixture_rate(two, Dk, 0.0).valid == (d_star(Dk, 0.0) / 2.0 <= lmin);
        }
        return Outcome{mc_ok && r.valid && diff <= 1e-9 && flips,
                       fmt("MC h(X) within 3 se: %.0f; |rate - waterfill| = %.3g", mc_ok, diff) +
                           (flips ? "; flag flips at the boundary" : "; flag does NOT flip at the boundary")};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
