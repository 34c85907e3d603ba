// Command-line front end. Exit codes: 0 success, 2 input error, 3 solver non-convergence.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rdp/binary_rdp.hpp"
#include "rdp/errors.hpp"
#include "rdp/finite_rdp.hpp"
#include "rdp/gaussian_rdp.hpp"
#include "rdp/io.hpp"
#include "rdp/simulate.hpp"

namespace {

using rdp::io::format12;
using rdp::io::json;
using rdp::io::number;

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNotConverged = 3;

struct Range {
    double min = 0.05;
    double max = 0.5;
    double step = 0.05;
    std::vector<double> values;

    std::vector<double> resolve() const
    {
        if (!values.empty()) {
            return values;
        }
        rdp::require(step > 0.0 && max >= min, "D range needs step > 0 and max >= min");
        const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
        std::vector<double> out;
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(min + static_cast<double>(i) * step);
        }
        return out;
    }
};

void add_range(CLI::App* cmd, Range& r)
{
    cmd->add_option("--d-min", r.min, "first D of the sweep")->capture_default_str();
    cmd->add_option("--d-max", r.max, "last D of the sweep")->capture_default_str();
    cmd->add_option("--d-step", r.step, "D increment")->capture_default_str();
    cmd->add_option("--D", r.values, "explicit D values (overrides the range)")->delimiter(',');
}

// "0.1" is absolute; "D" and "0.5D" scale with the distortion budget.
rdp::PSpec parse_p_token(const std::string& tok)
{
    rdp::require(!tok.empty(), "empty P value");
    if (tok.back() == 'D' || tok.back() == 'd') {
        const std::string head = tok.substr(0, tok.size() - 1);
        double factor = 1.0;
        if (!head.empty() && head != "*") {
            std::string h = head;
            if (h.back() == '*') {
                h.pop_back();
            }
            std::size_t used = 0;
            try {
                factor = std::stod(h, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            rdp::require(used == h.size() && !h.empty(), "cannot parse P value '" + tok + "'");
        }
        rdp::require(factor >= 0.0, "P factor must be non-negative");
        return {factor, true};
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    rdp::require(used == tok.size(), "cannot parse P value '" + tok + "'");
    rdp::require(v >= 0.0, "P must be non-negative");
    return {v, false};
}

std::vector<rdp::PSpec> parse_p_tokens(const std::vector<std::string>& toks)
{
    std::vector<rdp::PSpec> out;
    for (const auto& t : toks) {
        out.push_back(parse_p_token(t));
    }
    return out;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path);
            rdp::require(file_.good(), "cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const std::string& out, const json& j)
{
    Output o(out);
    o.stream() << j.dump(2) << '\n';
}

double bits(double nats) { return nats / std::numbers::ln2; }

// ---- binary-curve ----

struct BinaryCurveArgs {
    Range D;
    std::vector<std::string> P{"0", "D"};
    std::size_t grid = 512;
    std::string out;
};

int run_binary_curve(const BinaryCurveArgs& a)
{
    const auto Ds = a.D.resolve();
    const auto Ps = parse_p_tokens(a.P);
    for (double D : Ds) {
        rdp::require(D >= 0.0 && D <= 1.0, "D values must lie in [0, 1]");
    }
    const rdp::EnvelopeModel env = rdp::build_envelope(a.grid);
    Output o(a.out);
    auto& os = o.stream();
    os << "D,P,hbar,envelope,rate_nats,rate_bits\n";
    for (double D : Ds) {
        for (const auto& ps : Ps) {
            const double P = ps.resolve(D);
            rdp::require(P <= 1.0, "P values must lie in [0, 1]");
            const double r = rdp::rate_binary(D, P, env);
            os << format12(D) << ',' << format12(P) << ',' << format12(rdp::hbar(D, P)) << ','
               << format12(env.value(D, P)) << ',' << format12(r) << ',' << format12(bits(r)) << '\n';
        }
    }
    return kOk;
}

// ---- gaussian-waterfill ----

struct GaussianArgs {
    std::vector<double> eigenvalues;
    std::string spec;
    double D = -1.0;
    double P = -1.0;
    bool curve = false;
    Range range;
    std::string out;
};

void load_gaussian_spec(GaussianArgs& a)
{
    if (a.spec.empty()) {
        return;
    }
    const json j = rdp::io::load_json(a.spec);
    try {
        if (j.contains("eigenvalues")) {
            a.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
        }
        if (j.contains("D")) {
            a.D = j.at("D").get<double>();
        }
        if (j.contains("P")) {
            a.P = j.at("P").get<double>();
        }
    } catch (const json::exception& e) {
        throw rdp::InputError(std::string("bad gaussian spec: ") + e.what());
    }
}

std::string csv_array(const std::vector<double>& v)
{
    std::string s = "\"[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + format12(v[i]);
    }
    return s + "]\"";
}

int run_gaussian(GaussianArgs a)
{
    load_gaussian_spec(a);
    rdp::require(!a.eigenvalues.empty(), "eigenvalues are required (--eigenvalues or --spec)");
    const rdp::GaussianVectorSource src(a.eigenvalues);
    rdp::require(a.P >= 0.0, "P is required and must be non-negative");
    if (!a.curve) {
        rdp::require(a.D >= 0.0, "D is required and must be non-negative");
        emit_json(a.out, rdp::io::to_json(rdp::waterfill(src, a.D, a.P)));
        return kOk;
    }
    Output o(a.out);
    auto& os = o.stream();
    os << "D,P,D_star,omega,rate_nats,rate_bits,method,omega_l,gamma,gamma_hat,D_l,P_l\n";
    for (double D : a.range.resolve()) {
        const auto w = rdp::waterfill(src, D, a.P);
        os << format12(D) << ',' << format12(a.P) << ',' << format12(w.D_star) << ',' << format12(w.omega) << ','
           << format12(w.rate) << ',' << format12(bits(w.rate)) << ",closed-form," << csv_array(w.omega_l) << ','
           << csv_array(w.gamma_star) << ',' << csv_array(w.gamma_hat_star) << ',' << csv_array(w.D_l) << ','
           << csv_array(w.P_l) << '\n';
    }
    return kOk;
}

// ---- finite-solve / finite-curve ----

struct SolverArgs {
    std::size_t restarts = 32;
    std::uint64_t seed = 0;
};

void add_solver_flags(CLI::App* cmd, SolverArgs& s)
{
    cmd->add_option("--restarts", s.restarts, "solver restarts")->capture_default_str();
    cmd->add_option("--seed", s.seed, "seed for random restarts")->capture_default_str();
}

rdp::SolverConfig config_of(const SolverArgs& s)
{
    rdp::SolverConfig cfg;
    cfg.restarts = s.restarts;
    cfg.seed = s.seed;
    return cfg;
}

struct FiniteSolveArgs {
    std::string problem;
    SolverArgs solver;
    std::string out;
};

int run_finite_solve(const FiniteSolveArgs& a)
{
    const rdp::RdpProblem prob = rdp::io::parse_problem(rdp::io::load_json(a.problem));
    const rdp::RdpSolution sol = rdp::solve_rdp(prob, config_of(a.solver));
    emit_json(a.out, rdp::io::to_json(sol, prob));
    return sol.converged ? kOk : kNotConverged;
}

struct FiniteCurveArgs {
    std::string problem;
    Range D;
    std::vector<std::string> P{"0", "0.5D", "D"};
    SolverArgs solver;
    std::string out;
};

int run_finite_curve(const FiniteCurveArgs& a)
{
    json j = rdp::io::load_json(a.problem);
    // The template's own budgets are placeholders; the sweep supplies them.
    j["D"] = j.value("D", 0.0);
    j["P"] = j.value("P", 0.0);
    const rdp::RdpProblem tmpl = rdp::io::parse_problem(j);
    const auto Ds = a.D.resolve();
    const auto Ps = parse_p_tokens(a.P);
    const rdp::CurveResult res = rdp::rdp_curve(tmpl, Ds, Ps, config_of(a.solver));
    Output o(a.out);
    auto& os = o.stream();
    os << "D,P,rate_nats,rate_bits,method,ok\n";
    for (const auto& p : res.points) {
        os << format12(p.D) << ',' << format12(p.P) << ',' << format12(p.rate) << ',' << format12(bits(p.rate)) << ','
           << rdp::to_string(p.provenance) << ',' << (p.ok ? 1 : 0) << '\n';
    }
    for (const auto& v : res.violations) {
        std::cerr << "warning: " << v << '\n';
    }
    return res.monotone ? kOk : kNotConverged;
}

// ---- simulate ----

struct SimulateArgs {
    std::string construction;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate(const SimulateArgs& a)
{
    const json j = rdp::io::load_json(a.construction);
    rdp::require(j.is_object() && j.contains("type") && j.at("type").is_string(),
                 "construction needs a string 'type' field (gaussian or finite)");
    const std::string type = j.at("type").get<std::string>();
    if (type == "gaussian") {
        std::vector<double> eig;
        double D = 0.0;
        double P = 0.0;
        try {
            eig = j.at("eigenvalues").get<std::vector<double>>();
            D = j.at("D").get<double>();
            P = j.at("P").get<double>();
        } catch (const json::exception& e) {
            throw rdp::InputError(std::string("gaussian construction needs eigenvalues, D and P: ") + e.what());
        }
        const rdp::GaussianVectorSource src(eig);
        const auto c = rdp::achieving_joint(src, rdp::waterfill(src, D, P));
        emit_json(a.out, rdp::io::to_json(rdp::simulate_gaussian(c, a.samples, a.seed)));
        return kOk;
    }
    rdp::require(type == "finite", "construction type must be gaussian or finite");
    const rdp::ProbVector source = rdp::io::parse_prob_vector(j.at("source"));
    const rdp::DistortionMatrix d = rdp::io::parse_distortion(j.value("distortion", json("hamming")), source.size());
    const rdp::CostMatrix cost = rdp::io::parse_cost(j.value("cost", json("hamming")), d.cols());
    rdp::Channel enc;
    rdp::Channel dec;
    if (j.contains("encoder")) {
        rdp::require(j.contains("decoder"), "finite construction with an encoder also needs a decoder");
        enc = rdp::io::parse_channel(j.at("encoder"));
        dec = rdp::io::parse_channel(j.at("decoder"));
    } else {
        // No channels given: simulate the solver's answer for the stated budgets.
        const rdp::RdpSolution sol = rdp::solve_rdp(rdp::io::parse_problem(j), rdp::SolverConfig{});
        enc = sol.encoder;
        dec = sol.decoder;
    }
    const auto joint = rdp::JointDistribution::compose(source, enc, dec);
    emit_json(a.out, rdp::io::to_json(rdp::simulate_finite(joint, cost, d, a.samples, a.seed)));
    return kOk;
}

// ---- compare ----

struct CompareArgs {
    std::string problem;
    std::vector<double> eigenvalues;
    std::vector<double> D;
    std::vector<std::string> P{"D"};
    std::size_t grid = 512;
    std::size_t oracle_k = 64;
    SolverArgs solver;
    std::string out;
};

int run_compare(const CompareArgs& a)
{
    rdp::require(!a.D.empty(), "--D is required");
    const auto Ps = parse_p_tokens(a.P);
    json points = json::array();
    double max_gap = 0.0;
    bool converged = true;

    if (!a.eigenvalues.empty()) {
        const rdp::GaussianVectorSource src(a.eigenvalues);
        for (double D : a.D) {
            for (const auto& ps : Ps) {
                const double P = ps.resolve(D);
                const double closed = rdp::waterfill(src, D, P).rate;
                const double lower = rdp::shannon_lower_bound(src.differential_entropy(), src.eigenvalues(), D, P);
                const double gap = std::abs(closed - lower);
                max_gap = std::max(max_gap, gap);
                points.push_back({{"D", number(D)},
                                  {"P", number(P)},
                                  {"closed_form", number(closed)},
                                  {"lower_bound", number(lower)},
                                  {"gap", number(gap)}});
            }
        }
        emit_json(a.out, {{"source", "gaussian"}, {"points", points}, {"max_gap", number(max_gap)}});
        return kOk;
    }

    json tmpl = a.problem.empty() ? json{{"source", {{"probs", {0.5, 0.5}}}}, {"u_card", 6}}
                                  : rdp::io::load_json(a.problem);
    tmpl["D"] = 0.0;
    tmpl["P"] = 0.0;
    const rdp::RdpProblem base = rdp::io::parse_problem(tmpl);
    const bool binary = base.is_binary_preset();
    const bool oracle_ok = base.source.size() == 2 && base.distortion.cols() == 2;
    std::optional<rdp::EnvelopeModel> env;
    rdp::SolverConfig cfg = config_of(a.solver);
    if (binary) {
        env = rdp::build_envelope(a.grid);
        cfg.envelope = &*env;
    }
    for (double D : a.D) {
        for (const auto& ps : Ps) {
            rdp::RdpProblem prob = base;
            prob.D = D;
            prob.P = ps.resolve(D);
            prob.validate();
            const rdp::RdpSolution sol = rdp::solve_rdp(prob, cfg);
            converged = converged && sol.converged;
            json pt = {{"D", number(D)}, {"P", number(prob.P)}, {"solver", number(sol.rate)},
                       {"converged", sol.converged}};
            if (binary) {
                const double closed = rdp::rate_binary(D, prob.P, *env);
                const double gap = std::abs(sol.rate - closed);
                max_gap = std::max(max_gap, gap);
                pt["closed_form"] = number(closed);
                pt["gap"] = number(gap);
            }
            if (oracle_ok) {
                pt["oracle"] = number(rdp::oracle_rdp(prob, a.oracle_k));
            }
            points.push_back(pt);
        }
    }
    json report = {{"source", binary ? "binary" : "finite"}, {"points", points}};
    if (binary) {
        report["max_gap"] = number(max_gap);
    }
    emit_json(a.out, report);
    return converged ? kOk : kNotConverged;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rate-distortion-perception calculator (all rates in nats; bits as a convenience column)"};
    app.require_subcommand(1);

    BinaryCurveArgs bc;
    auto* cmd_bc = app.add_subcommand("binary-curve", "Ber(1/2) source under Hamming costs: CSV of the closed form");
    add_range(cmd_bc, bc.D);
    cmd_bc->add_option("--P", bc.P, "P values: numbers, D or a multiple such as 0.5D")->delimiter(',');
    cmd_bc->add_option("--grid", bc.grid, "envelope grid resolution")->capture_default_str();
    cmd_bc->add_option("--out", bc.out, "output file (default stdout)");

    GaussianArgs ga;
    auto* cmd_ga = app.add_subcommand("gaussian-waterfill", "Gaussian vector source: water-filling solution");
    cmd_ga->add_option("--eigenvalues", ga.eigenvalues, "source covariance spectrum")->delimiter(',');
    cmd_ga->add_option("--spec", ga.spec, "JSON file or inline object {eigenvalues, D, P}");
    cmd_ga->add_option("--D", ga.D, "distortion budget");
    cmd_ga->add_option("--P", ga.P, "perception budget");
    cmd_ga->add_flag("--curve", ga.curve, "sweep D at fixed P and emit CSV");
    cmd_ga->add_option("--d-min", ga.range.min, "first D of the sweep")->capture_default_str();
    cmd_ga->add_option("--d-max", ga.range.max, "last D of the sweep")->capture_default_str();
    cmd_ga->add_option("--d-step", ga.range.step, "D increment")->capture_default_str();
    cmd_ga->add_option("--out", ga.out, "output file (default stdout)");

    FiniteSolveArgs fs;
    auto* cmd_fs = app.add_subcommand("finite-solve", "Solve one finite-alphabet problem; JSON out");
    cmd_fs->add_option("--problem", fs.problem, "problem JSON file or inline object")->required();
    add_solver_flags(cmd_fs, fs.solver);
    cmd_fs->add_option("--out", fs.out, "output file (default stdout)");

    FiniteCurveArgs fc;
    auto* cmd_fc = app.add_subcommand("finite-curve", "Sweep budgets of a finite problem; CSV out");
    cmd_fc->add_option("--problem", fc.problem, "problem template JSON (D and P optional)")->required();
    add_range(cmd_fc, fc.D);
    cmd_fc->add_option("--P", fc.P, "P values: numbers, D or a multiple such as 0.5D")->delimiter(',');
    add_solver_flags(cmd_fc, fc.solver);
    cmd_fc->add_option("--out", fc.out, "output file (default stdout)");

    SimulateArgs sm;
    auto* cmd_sm = app.add_subcommand("simulate", "Monte Carlo check of a construction; JSON out");
    cmd_sm->add_option("--construction", sm.construction,
                       "JSON file or inline object; {type: gaussian, eigenvalues, D, P} or "
                       "{type: finite, source, encoder, decoder, distortion?, cost?}")
        ->required();
    cmd_sm->add_option("--samples", sm.samples, "sample count")->capture_default_str();
    cmd_sm->add_option("--seed", sm.seed, "64-bit seed")->capture_default_str();
    cmd_sm->add_option("--out", sm.out, "output file (default stdout)");

    CompareArgs cp;
    auto* cmd_cp = app.add_subcommand("compare", "Solver vs closed form (binary) or lower bound vs closed form (Gaussian)");
    cmd_cp->add_option("--problem", cp.problem, "finite problem template (default: binary preset)");
    cmd_cp->add_option("--eigenvalues", cp.eigenvalues, "compare the Gaussian closed form instead")->delimiter(',');
    cmd_cp->add_option("--D", cp.D, "D values")->delimiter(',')->required();
    cmd_cp->add_option("--P", cp.P, "P values: numbers, D or a multiple such as 0.5D")->delimiter(',');
    cmd_cp->add_option("--grid", cp.grid, "envelope grid resolution")->capture_default_str();
    cmd_cp->add_option("--oracle-grid", cp.oracle_k, "oracle lattice resolution")->capture_default_str();
    add_solver_flags(cmd_cp, cp.solver);
    cmd_cp->add_option("--out", cp.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*cmd_bc) {
            return run_binary_curve(bc);
        }
        if (*cmd_ga) {
            return run_gaussian(ga);
        }
        if (*cmd_fs) {
            return run_finite_solve(fs);
        }
        if (*cmd_fc) {
            return run_finite_curve(fc);
        }
        if (*cmd_sm) {
            return run_simulate(sm);
        }
        if (*cmd_cp) {
            return run_compare(cp);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
