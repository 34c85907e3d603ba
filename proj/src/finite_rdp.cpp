#include "rdp/finite_rdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>

#include "rdp/errors.hpp"
#include "rdp/linprog.hpp"
#include "rdp/rng.hpp"

namespace rdp {

const char* to_string(Provenance p)
{
    switch (p) {
    case Provenance::closed_form:
        return "closed-form";
    case Provenance::envelope:
        return "envelope";
    case Provenance::solver:
        return "solver";
    case Provenance::lower_bound:
        return "lower-bound";
    }
    return "unknown";
}

RdpProblem RdpProblem::make(ProbVector source, DistortionMatrix distortion, CostMatrix cost, double D, double P,
                            std::size_t u_card)
{
    RdpProblem prob;
    prob.u_card = u_card == 0 ? source.size() + 2 : u_card;
    prob.source = std::move(source);
    prob.distortion = std::move(distortion);
    prob.cost = std::move(cost);
    prob.D = D;
    prob.P = P;
    prob.validate();
    return prob;
}

RdpProblem RdpProblem::binary_preset(double D, double P)
{
    return make(ProbVector::uniform(2), DistortionMatrix::hamming(2), CostMatrix::hamming(2), D, P, 6);
}

void RdpProblem::validate() const
{
    require(source.size() >= 1, "source pmf is empty");
    require(distortion.rows() == source.size(), "distortion rows must match |X|");
    require(cost.rows() == source.size() && cost.cols() == distortion.cols(),
            "perception cost must be |X| x |X-hat|");
    require(std::isfinite(D) && D >= 0.0, "D must be finite and non-negative");
    require(std::isfinite(P) && P >= 0.0, "P must be finite and non-negative");
    require(u_card >= 1 && u_card <= 64, "u_card must lie in [1, 64]");
}

bool RdpProblem::is_binary_preset() const
{
    if (source.size() != 2 || distortion.cols() != 2 || std::abs(source[0] - 0.5) > 1e-12) {
        return false;
    }
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
            const double h = x == y ? 0.0 : 1.0;
            if (distortion(x, y) != h || cost(x, y) != h) {
                return false;
            }
        }
    }
    return true;
}

namespace {

constexpr double kEncoderFloor = 1e-15;

struct Instance {
    std::size_t nx = 0;
    std::size_t nu = 0;
    std::size_t nxh = 0;
    std::vector<double> px;
    Matrix dist;
    Matrix cost;
    double P = 0.0;
};

Instance make_instance(const RdpProblem& prob)
{
    Instance in;
    in.nx = prob.source.size();
    in.nu = prob.u_card;
    in.nxh = prob.distortion.cols();
    in.px.assign(prob.source.begin(), prob.source.end());
    in.dist = prob.distortion.costs();
    in.cost = prob.cost.costs();
    in.P = prob.P;
    return in;
}

struct Response {
    Matrix dec;   // nu x nxh
    Matrix price; // nu x nx
    Matrix delta; // nu x nxh
    std::vector<double> pu;
    double distortion = 0.0;
    double perception = 0.0;
    double mu = 0.0;
    bool feasible = true;
};

// Greedy per-(u, x) reproduction choice at multiplier mu.
double choose(const Instance& in, const Matrix& A, const Matrix& delta, double mu, bool prefer_low_cost,
              std::vector<std::size_t>& pick)
{
    pick.assign(in.nu * in.nx, 0);
    double perception = 0.0;
    for (std::size_t u = 0; u < in.nu; ++u) {
        for (std::size_t x = 0; x < in.nx; ++x) {
            std::size_t best = 0;
            double best_v = std::numeric_limits<double>::infinity();
            for (std::size_t xh = 0; xh < in.nxh; ++xh) {
                const double v = delta(u, xh) + mu * in.cost(x, xh);
                const double tol = 1e-11 * (1.0 + std::abs(v));
                const bool tie = std::abs(v - best_v) <= tol;
                const bool better_tie = tie && (prefer_low_cost ? in.cost(x, xh) < in.cost(x, best)
                                                                : in.cost(x, xh) > in.cost(x, best));
                if ((!tie && v < best_v) || better_tie) {
                    best = xh;
                    best_v = std::min(best_v, v);
                    if (!tie) {
                        best_v = v;
                    }
                }
            }
            pick[u * in.nx + x] = best;
            perception += A(u, x) * in.cost(x, best);
        }
    }
    return perception;
}

Response respond(const Instance& in, const Matrix& enc)
{
    Response r;
    Matrix A(in.nu, in.nx);
    r.pu.assign(in.nu, 0.0);
    for (std::size_t u = 0; u < in.nu; ++u) {
        for (std::size_t x = 0; x < in.nx; ++x) {
            A(u, x) = in.px[x] * enc(x, u);
            r.pu[u] += A(u, x);
        }
    }
    r.delta = Matrix(in.nu, in.nxh);
    for (std::size_t u = 0; u < in.nu; ++u) {
        for (std::size_t xh = 0; xh < in.nxh; ++xh) {
            double s = 0.0;
            for (std::size_t x = 0; x < in.nx; ++x) {
                const double back = r.pu[u] > 0.0 ? A(u, x) / r.pu[u] : 1.0 / static_cast<double>(in.nx);
                s += back * in.dist(x, xh);
            }
            r.delta(u, xh) = s;
        }
    }

    std::vector<std::size_t> lo_pick;
    std::vector<std::size_t> hi_pick;
    double c_lo = choose(in, A, r.delta, 0.0, true, lo_pick);
    double c_hi = c_lo;
    hi_pick = lo_pick;
    double theta = 0.0;
    if (c_lo > in.P) {
        std::vector<double> breaks;
        for (std::size_t u = 0; u < in.nu; ++u) {
            for (std::size_t x = 0; x < in.nx; ++x) {
                if (A(u, x) <= 0.0) {
                    continue;
                }
                for (std::size_t a = 0; a < in.nxh; ++a) {
                    for (std::size_t b = 0; b < in.nxh; ++b) {
                        const double dc = in.cost(x, a) - in.cost(x, b);
                        const double dd = r.delta(u, b) - r.delta(u, a);
                        if (dc > 0.0 && dd > 0.0) {
                            breaks.push_back(dd / dc);
                        }
                    }
                }
            }
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        std::size_t lo = 0;
        std::size_t hi = breaks.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            std::vector<std::size_t> tmp;
            if (choose(in, A, r.delta, breaks[mid], true, tmp) <= in.P) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if (lo == breaks.size()) {
            r.feasible = false;
            r.mu = breaks.empty() ? 0.0 : 2.0 * breaks.back() + 1.0;
            c_lo = choose(in, A, r.delta, r.mu, true, lo_pick);
            hi_pick = lo_pick;
            c_hi = c_lo;
        } else {
            r.mu = breaks[lo];
            c_lo = choose(in, A, r.delta, r.mu, true, lo_pick);
            c_hi = choose(in, A, r.delta, r.mu, false, hi_pick);
            if (c_hi > c_lo) {
                theta = std::clamp((in.P - c_lo) / (c_hi - c_lo), 0.0, 1.0);
            }
        }
    }

    r.dec = Matrix(in.nu, in.nxh);
    for (std::size_t u = 0; u < in.nu; ++u) {
        for (std::size_t x = 0; x < in.nx; ++x) {
            const std::size_t k = u * in.nx + x;
            const double a = A(u, x);
            r.dec(u, lo_pick[k]) += (1.0 - theta) * a;
            r.dec(u, hi_pick[k]) += theta * a;
            r.distortion += (1.0 - theta) * a * r.delta(u, lo_pick[k]) + theta * a * r.delta(u, hi_pick[k]);
            r.perception += (1.0 - theta) * a * in.cost(x, lo_pick[k]) + theta * a * in.cost(x, hi_pick[k]);
        }
        for (std::size_t xh = 0; xh < in.nxh; ++xh) {
            r.dec(u, xh) = r.pu[u] > 0.0 ? r.dec(u, xh) / r.pu[u] : 1.0 / static_cast<double>(in.nxh);
        }
    }
    r.price = Matrix(in.nu, in.nx);
    for (std::size_t u = 0; u < in.nu; ++u) {
        for (std::size_t x = 0; x < in.nx; ++x) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t xh = 0; xh < in.nxh; ++xh) {
                m = std::min(m, r.delta(u, xh) + r.mu * in.cost(x, xh));
            }
            r.price(u, x) = m;
        }
    }
    return r;
}

double rate_of(const Instance& in, const Matrix& enc, const std::vector<double>& pu)
{
    double I = 0.0;
    for (std::size_t x = 0; x < in.nx; ++x) {
        for (std::size_t u = 0; u < in.nu; ++u) {
            const double e = enc(x, u);
            if (in.px[x] > 0.0 && e > 0.0 && pu[u] > 0.0) {
                I += in.px[x] * e * std::log(e / pu[u]);
            }
        }
    }
    return std::max(I, 0.0);
}

struct Eval {
    Response resp;
    double rate = 0.0;
    double h = 0.0;
    double objective = 0.0;
};

Eval evaluate(const Instance& in, const Matrix& enc, double target, double lambda, double rho)
{
    Eval e;
    e.resp = respond(in, enc);
    e.rate = rate_of(in, enc, e.resp.pu);
    e.h = e.resp.distortion - target;
    const double t = std::max(0.0, lambda + rho * e.h);
    e.objective = e.rate + (t * t - lambda * lambda) / (2.0 * rho);
    return e;
}

void normalize_rows(Matrix& enc)
{
    for (std::size_t x = 0; x < enc.rows(); ++x) {
        double s = 0.0;
        for (double& v : enc.row(x)) {
            v = std::max(v, kEncoderFloor);
            s += v;
        }
        for (double& v : enc.row(x)) {
            v /= s;
        }
    }
}

Matrix mirror_step(const Instance& in, const Matrix& enc, const Eval& ev, double lambda, double rho, double eta)
{
    const double weight = std::max(0.0, lambda + rho * ev.h);
    const Response& r = ev.resp;
    Matrix next(in.nx, in.nu);
    for (std::size_t x = 0; x < in.nx; ++x) {
        std::vector<double> g(in.nu);
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < in.nu; ++u) {
            double ga = r.price(u, x);
            for (std::size_t xh = 0; xh < in.nxh; ++xh) {
                ga += r.dec(u, xh) * (in.dist(x, xh) - r.delta(u, xh));
            }
            const double e = enc(x, u);
            const double info = r.pu[u] > 0.0 ? std::log(e / r.pu[u]) : 0.0;
            g[u] = info + weight * ga;
            gmin = std::min(gmin, g[u]);
        }
        for (std::size_t u = 0; u < in.nu; ++u) {
            next(x, u) = enc(x, u) * std::exp(-eta * (g[u] - gmin));
        }
    }
    normalize_rows(next);
    return next;
}

struct RestartResult {
    bool feasible = false;
    double rate = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    Matrix enc;
};

void consider(RestartResult& best, const Instance& in, const Matrix& enc, const Eval& ev, double D, double tol)
{
    const double over = std::max(0.0, ev.resp.distortion - D) + (ev.resp.feasible ? 0.0 : 1.0);
    const bool feasible = over <= tol;
    if (feasible) {
        if (!best.feasible || ev.rate < best.rate) {
            best = {true, ev.rate, over, enc};
        }
    } else if (!best.feasible && over < best.gap) {
        best = {false, ev.rate, over, enc};
    }
    (void)in;
}

RestartResult run_restart(const Instance& in, Matrix enc, double D, const SolverConfig& cfg)
{
    const double target = D > cfg.margin ? D - cfg.margin : D;
    double lambda = 0.0;
    double rho = 50.0;
    double eta = 1.0;
    RestartResult best;
    normalize_rows(enc);
    Eval cur = evaluate(in, enc, target, lambda, rho);
    consider(best, in, enc, cur, D, 0.01 * cfg.constraint_tol);
    double prev_h = std::numeric_limits<double>::infinity();
    for (std::size_t outer = 0; outer < cfg.max_outer; ++outer) {
        cur = evaluate(in, enc, target, lambda, rho);
        std::size_t quiet = 0;
        for (std::size_t inner = 0; inner < cfg.max_inner && quiet < 3; ++inner) {
            bool accepted = false;
            for (int tries = 0; tries < 40; ++tries) {
                Matrix cand = mirror_step(in, enc, cur, lambda, rho, eta);
                Eval ev = evaluate(in, cand, target, lambda, rho);
                if (ev.objective <= cur.objective) {
                    const double drop = cur.objective - ev.objective;
                    quiet = drop < 1e-13 ? quiet + 1 : 0;
                    enc = std::move(cand);
                    cur = std::move(ev);
                    consider(best, in, enc, cur, D, 0.01 * cfg.constraint_tol);
                    eta = std::min(eta * 1.25, 100.0);
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) {
                break;
            }
        }
        const double h = cur.h;
        const double next_lambda = std::max(0.0, lambda + rho * h);
        const bool settled = std::abs(h) <= 0.1 * cfg.constraint_tol && std::abs(next_lambda - lambda) <= 1e-9;
        lambda = next_lambda;
        if (h > 0.1 * cfg.constraint_tol && h > 0.25 * prev_h) {
            rho = std::min(rho * 4.0, 1e9);
        }
        prev_h = std::max(h, 0.0);
        if (settled || (lambda == 0.0 && h <= 0.0 && outer > 0)) {
            break;
        }
    }
    return best;
}

Matrix random_encoder(std::size_t nx, std::size_t nu, std::uint64_t seed, std::uint32_t stream)
{
    const CounterRng rng(seed, stream);
    Matrix enc(nx, nu);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t u = 0; u < nu; ++u) {
            enc(x, u) = -std::log(rng.uniforms(x * nu + u, 7).first);
        }
    }
    return enc;
}

// Test channel of a classical solution laid out on the first |X-hat| symbols of U.
std::optional<Matrix> padded(const Matrix& test, std::size_t nu)
{
    if (test.cols() > nu) {
        return std::nullopt;
    }
    Matrix enc(test.rows(), nu);
    for (std::size_t x = 0; x < test.rows(); ++x) {
        for (std::size_t k = 0; k < test.cols(); ++k) {
            enc(x, k) = test(x, k);
        }
    }
    return enc;
}

std::vector<Matrix> structured_starts(const RdpProblem& prob, const Instance& in, const SolverConfig& cfg)
{
    std::vector<Matrix> starts;
    // Everything on one symbol: rate zero.
    {
        Matrix enc(in.nx, in.nu);
        for (std::size_t x = 0; x < in.nx; ++x) {
            enc(x, 0) = 1.0;
        }
        starts.push_back(enc);
    }
    // Identity-like.
    {
        Matrix enc(in.nx, in.nu, 0.02 / static_cast<double>(in.nu));
        for (std::size_t x = 0; x < in.nx; ++x) {
            enc(x, x % in.nu) += 0.98;
        }
        starts.push_back(enc);
    }
    for (double scale : {1.0, 0.5}) {
        try {
            const ClassicalRd rd = blahut_arimoto(prob.source, prob.distortion, prob.D * scale);
            if (auto enc = padded(rd.test_channel.matrix(), in.nu)) {
                starts.push_back(*enc);
            }
        } catch (const InputError&) {
            // D below the classical minimum; nothing to seed from.
        }
    }
    if (prob.is_binary_preset() && in.nu >= 6) {
        std::unique_ptr<EnvelopeModel> owned;
        const EnvelopeModel* env = cfg.envelope;
        if (env == nullptr) {
            owned = std::make_unique<EnvelopeModel>(build_envelope(512, 0.6, cfg.parallel));
            env = owned.get();
        }
        const SymmetricConstruction sc = symmetric_construction(*env, prob.D, prob.P);
        Matrix enc(in.nx, in.nu);
        for (std::size_t x = 0; x < 2; ++x) {
            for (std::size_t u = 0; u < 6; ++u) {
                enc(x, u) = sc.encoder(x, u);
            }
        }
        starts.push_back(enc);
    }
    return starts;
}

Matrix channel_rows(const Matrix& m)
{
    Matrix out(m);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double s = 0.0;
        for (double v : out.row(i)) {
            s += v;
        }
        for (double& v : out.row(i)) {
            v /= s;
        }
    }
    return out;
}

RdpSolution lossless(const RdpProblem& prob)
{
    const std::size_t nx = prob.source.size();
    std::vector<std::size_t> support;
    for (std::size_t x = 0; x < nx; ++x) {
        if (prob.source[x] > 0.0) {
            support.push_back(x);
        }
    }
    Matrix enc(nx, prob.u_card);
    Matrix dec(prob.u_card, prob.distortion.cols(), 1.0 / static_cast<double>(prob.distortion.cols()));
    for (std::size_t x = 0; x < nx; ++x) {
        const auto it = std::find(support.begin(), support.end(), x);
        const std::size_t u = it == support.end() ? 0 : static_cast<std::size_t>(it - support.begin());
        enc(x, u) = 1.0;
    }
    for (std::size_t k = 0; k < support.size(); ++k) {
        std::fill(dec.row(k).begin(), dec.row(k).end(), 0.0);
        dec(k, support[k]) = 1.0;
    }
    RdpSolution sol;
    sol.encoder = Channel(enc);
    sol.decoder = Channel(dec);
    sol.rate = mutual_information(prob.source, sol.encoder);
    sol.achieved_D = expected_distortion(prob.source, sol.encoder, sol.decoder, prob.distortion);
    sol.achieved_P = expected_perception(prob.source, sol.encoder, sol.decoder, prob.cost);
    sol.converged = true;
    return sol;
}

bool lossless_applies(const RdpProblem& prob)
{
    if (!prob.distortion.zero_diagonal()) {
        return false;
    }
    std::size_t support = 0;
    for (double p : prob.source) {
        support += p > 0.0 ? 1 : 0;
    }
    return support <= prob.u_card && prob.cost.rows() == prob.cost.cols();
}

} // namespace

DecoderResponse best_decoder(const RdpProblem& prob, const Channel& encoder)
{
    prob.validate();
    require(encoder.inputs() == prob.source.size() && encoder.outputs() == prob.u_card,
            "encoder must be |X| x u_card");
    const Instance in = make_instance(prob);
    const Response r = respond(in, encoder.matrix());
    DecoderResponse out;
    out.decoder = Channel(channel_rows(r.dec));
    out.distortion = r.distortion;
    out.perception = r.perception;
    out.mu = r.mu;
    out.feasible = r.feasible;
    out.row_price = r.price;
    return out;
}

double expected_perception(const ProbVector& source, const Channel& encoder, const Channel& decoder,
                           const CostMatrix& cost)
{
    require(encoder.inputs() == source.size() && decoder.inputs() == encoder.outputs(), "channel shapes differ");
    const Posterior post = posterior(source, encoder);
    double total = 0.0;
    for (std::size_t u = 0; u < encoder.outputs(); ++u) {
        if (post.unused[u]) {
            continue;
        }
        total += post.p_u[u] * discrete_ot(post.back.row_pmf(u), decoder.row_pmf(u), cost).value;
    }
    return total;
}

double expected_distortion(const ProbVector& source, const Channel& encoder, const Channel& decoder,
                           const DistortionMatrix& d)
{
    return expected_distortion(JointDistribution::compose(source, encoder, decoder), d);
}

RdpSolution solve_rdp(const RdpProblem& prob, const SolverConfig& config)
{
    prob.validate();
    require(config.restarts >= 1, "at least one restart is needed");
    if (prob.D == 0.0 && lossless_applies(prob)) {
        return lossless(prob);
    }
    const Instance in = make_instance(prob);

    std::vector<Matrix> starts;
    if (config.structured_starts) {
        starts = structured_starts(prob, in, config);
    }
    if (starts.size() > config.restarts) {
        starts.resize(config.restarts);
    }
    for (std::size_t k = starts.size(); k < config.restarts; ++k) {
        starts.push_back(random_encoder(in.nx, in.nu, config.seed, static_cast<std::uint32_t>(k)));
    }

    std::vector<RestartResult> results(starts.size());
#pragma omp parallel for schedule(dynamic, 1) if (config.parallel)
    for (std::size_t k = 0; k < starts.size(); ++k) {
        results[k] = run_restart(in, starts[k], prob.D, config);
    }

    // Lowest feasible rate; otherwise smallest gap. Ties go to the lower index.
    std::size_t pick = 0;
    for (std::size_t k = 1; k < results.size(); ++k) {
        const RestartResult& a = results[k];
        const RestartResult& b = results[pick];
        const bool better = a.feasible ? (!b.feasible || a.rate < b.rate) : (!b.feasible && a.gap < b.gap);
        if (better) {
            pick = k;
        }
    }

    const Matrix& enc = results[pick].enc;
    const Response r = respond(in, enc);
    RdpSolution sol;
    sol.encoder = Channel(channel_rows(enc));
    sol.decoder = Channel(channel_rows(r.dec));
    sol.rate = mutual_information(prob.source, sol.encoder);
    sol.achieved_D = expected_distortion(prob.source, sol.encoder, sol.decoder, prob.distortion);
    sol.achieved_P = expected_perception(prob.source, sol.encoder, sol.decoder, prob.cost);
    sol.restarts_used = starts.size();
    sol.perception_price = r.mu;
    sol.feasibility_gap = std::max(0.0, sol.achieved_D - prob.D) + std::max(0.0, sol.achieved_P - prob.P);
    sol.converged = results[pick].feasible && sol.feasibility_gap <= config.constraint_tol;
    return sol;
}

double oracle_rdp(const RdpProblem& prob, std::size_t grid_k)
{
    prob.validate();
    require(prob.source.size() == 2 && prob.distortion.cols() == 2, "the oracle handles binary X and X-hat only");
    require(grid_k >= 1 && grid_k <= 64, "oracle grid must lie in [1, 64]");
    const std::size_t side = grid_k + 1;
    const std::size_t n = side * side;
    std::vector<double> c(n);
    Matrix a_eq(2, n);
    Matrix a_ub(2, n);
    for (std::size_t i = 0; i < side; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(grid_k);
        const ProbVector back({1.0 - a, a});
        for (std::size_t j = 0; j < side; ++j) {
            const double ah = static_cast<double>(j) / static_cast<double>(grid_k);
            const ProbVector dec({1.0 - ah, ah});
            const std::size_t col = i * side + j;
            c[col] = -binary_entropy(a);
            a_eq(0, col) = 1.0;
            a_eq(1, col) = a;
            double dist = 0.0;
            for (std::size_t x = 0; x < 2; ++x) {
                for (std::size_t y = 0; y < 2; ++y) {
                    dist += back[x] * dec[y] * prob.distortion(x, y);
                }
            }
            a_ub(0, col) = dist;
            a_ub(1, col) = discrete_ot(back, dec, prob.cost).value;
        }
    }
    const LpResult lp = linprog_min(c, a_ub, {prob.D, prob.P}, a_eq, {1.0, prob.source[1]});
    if (lp.status != LpStatus::optimal) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(0.0, entropy(prob.source) + lp.value);
}

ClassicalRd blahut_arimoto(const ProbVector& source, const DistortionMatrix& d, double D)
{
    require(d.rows() == source.size(), "distortion rows must match |X|");
    require(D >= 0.0, "D must be non-negative");
    const std::size_t nx = source.size();
    const std::size_t ny = d.cols();

    double d_min = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < ny; ++y) {
            m = std::min(m, d(x, y));
        }
        d_min += source[x] * m;
    }
    require(D >= d_min - 1e-15, "D is below the smallest achievable distortion");

    std::size_t y0 = 0;
    double d_zero = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y) {
        double s = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            s += source[x] * d(x, y);
        }
        if (s < d_zero) {
            d_zero = s;
            y0 = y;
        }
    }
    if (D >= d_zero) {
        Matrix q(nx, ny);
        for (std::size_t x = 0; x < nx; ++x) {
            q(x, y0) = 1.0;
        }
        return {0.0, d_zero, Channel(q)};
    }

    auto run = [&](double s) {
        std::vector<double> out(ny, 1.0 / static_cast<double>(ny));
        Matrix q(nx, ny);
        for (int it = 0; it < 3000; ++it) {
            for (std::size_t x = 0; x < nx; ++x) {
                double z = 0.0;
                for (std::size_t y = 0; y < ny; ++y) {
                    q(x, y) = out[y] * std::exp(-s * d(x, y));
                    z += q(x, y);
                }
                for (std::size_t y = 0; y < ny; ++y) {
                    q(x, y) /= z;
                }
            }
            double change = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                double v = 0.0;
                for (std::size_t x = 0; x < nx; ++x) {
                    v += source[x] * q(x, y);
                }
                change = std::max(change, std::abs(v - out[y]));
                out[y] = v;
            }
            if (change < 1e-14) {
                break;
            }
        }
        double dist = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t y = 0; y < ny; ++y) {
                dist += source[x] * q(x, y) * d(x, y);
            }
        }
        return std::make_pair(dist, q);
    };

    double lo = 0.0;
    double hi = 1.0;
    auto at_hi = run(hi);
    while (at_hi.first > D && hi < 1e4) {
        lo = hi;
        hi *= 2.0;
        at_hi = run(hi);
    }
    for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto r = run(mid);
        if (r.first > D) {
            lo = mid;
        } else {
            hi = mid;
            at_hi = std::move(r);
        }
    }
    const Channel test(channel_rows(at_hi.second));
    return {mutual_information(source, test), at_hi.first, test};
}

CurveResult rdp_curve(const RdpProblem& tmpl, std::span<const double> Ds, std::span<const PSpec> Ps,
                      const SolverConfig& config)
{
    CurveResult out;
    const std::size_t nd = Ds.size();
    const std::size_t np = Ps.size();
    for (double D : Ds) {
        for (const PSpec& ps : Ps) {
            RdpProblem prob = tmpl;
            prob.D = D;
            prob.P = ps.resolve(D);
            const RdpSolution sol = solve_rdp(prob, config);
            out.points.push_back({D, prob.P, sol.rate, Provenance::solver, sol.converged});
            if (!sol.converged) {
                out.violations.push_back("no feasible solution at D=" + std::to_string(D) +
                                         " P=" + std::to_string(prob.P));
            }
        }
    }
    constexpr double kSlack = 1e-6;
    auto flag = [&](std::size_t a, std::size_t b) {
        // Point b has both budgets at least as large as point a.
        RdpPoint& pa = out.points[a];
        RdpPoint& pb = out.points[b];
        if (pb.D >= pa.D && pb.P >= pa.P && pb.rate > pa.rate + kSlack) {
            pb.ok = false;
            out.violations.push_back("rate increases from (" + std::to_string(pa.D) + ", " + std::to_string(pa.P) +
                                     ") to (" + std::to_string(pb.D) + ", " + std::to_string(pb.P) + ")");
        }
    };
    for (std::size_t i = 0; i < nd; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            for (std::size_t i2 = 0; i2 < nd; ++i2) {
                for (std::size_t j2 = 0; j2 < np; ++j2) {
                    if (i2 == i && j2 == j) {
                        continue;
                    }
                    if ((i2 == i || j2 == j)) {
                        flag(i * np + j, i2 * np + j2);
                    }
                }
            }
        }
    }
    out.monotone = std::all_of(out.points.begin(), out.points.end(), [](const RdpPoint& p) { return p.ok; });
    return out;
}

} // namespace rdp
