#include "rdp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rdp/errors.hpp"

namespace rdp::io {

std::string format12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json number(double v)
{
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return std::strtod(format12(v).c_str(), nullptr);
}

namespace {

json numbers(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) {
        out.push_back(number(x));
    }
    return out;
}

std::vector<double> to_doubles(const json& j, const char* what)
{
    require(j.is_array(), std::string(what) + " must be an array of numbers");
    std::vector<double> out;
    for (const json& v : j) {
        require(v.is_number(), std::string(what) + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> to_rows(const json& j, const char* what)
{
    require(j.is_array() && !j.empty(), std::string(what) + " must be a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    for (const json& r : j) {
        rows.push_back(to_doubles(r, what));
    }
    return rows;
}

bool is_proper(const Matrix& m)
{
    if (m.rows() != m.cols()) {
        return false;
    }
    for (std::size_t a = 0; a < m.rows(); ++a) {
        for (std::size_t b = 0; b < m.cols(); ++b) {
            if ((a == b) != (m(a, b) == 0.0)) {
                return false;
            }
        }
    }
    return true;
}

double finite_number(const json& j, const char* key)
{
    require(j.contains(key) && j.at(key).is_number(), std::string("problem field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace

ProbVector parse_prob_vector(const json& j)
{
    if (j.is_object()) {
        require(j.contains("probs"), "pmf object needs a 'probs' field");
        return ProbVector(to_doubles(j.at("probs"), "probs"));
    }
    return ProbVector(to_doubles(j, "probs"));
}

Channel parse_channel(const json& j)
{
    if (j.is_object()) {
        require(j.contains("rows"), "channel object needs a 'rows' field");
        return Channel(to_rows(j.at("rows"), "rows"));
    }
    return Channel(to_rows(j, "rows"));
}

Matrix parse_matrix(const json& j)
{
    if (j.is_object()) {
        for (const char* key : {"rows", "costs"}) {
            if (j.contains(key)) {
                return Matrix::from_rows(to_rows(j.at(key), key));
            }
        }
        throw InputError("matrix object needs a 'rows' or 'costs' field");
    }
    return Matrix::from_rows(to_rows(j, "matrix"));
}

DistortionMatrix parse_distortion(const json& j, std::size_t n)
{
    if (j.is_string()) {
        require(j.get<std::string>() == "hamming", "unknown distortion shorthand '" + j.get<std::string>() + "'");
        return DistortionMatrix::hamming(n);
    }
    Matrix m = parse_matrix(j);
    const bool zero_diagonal = is_proper(m);
    return DistortionMatrix(std::move(m), zero_diagonal);
}

CostMatrix parse_cost(const json& j, std::size_t n)
{
    if (j.is_string()) {
        require(j.get<std::string>() == "hamming", "unknown cost shorthand '" + j.get<std::string>() + "'");
        return CostMatrix::hamming(n);
    }
    Matrix m = parse_matrix(j);
    const bool proper = is_proper(m);
    return CostMatrix(std::move(m), proper);
}

RdpProblem parse_problem(const json& j)
{
    require(j.is_object(), "problem must be a JSON object");
    require(j.contains("source"), "problem needs a 'source' pmf");
    ProbVector source = parse_prob_vector(j.at("source"));
    const std::size_t n = source.size();
    DistortionMatrix d = parse_distortion(j.value("distortion", json("hamming")), n);
    CostMatrix c = parse_cost(j.value("cost", json("hamming")), d.cols());
    std::size_t u_card = 0;
    if (j.contains("u_card")) {
        const json& k = j.at("u_card");
        require(k.is_number_integer() && k.get<long long>() >= 1, "u_card must be a positive integer");
        u_card = k.get<std::size_t>();
    }
    return RdpProblem::make(std::move(source), std::move(d), std::move(c), finite_number(j, "D"),
                            finite_number(j, "P"), u_card);
}

json load_json(const std::string& path_or_inline)
{
    try {
        if (!path_or_inline.empty() && path_or_inline.front() == '{') {
            return json::parse(path_or_inline);
        }
        std::ifstream in(path_or_inline);
        require(in.good(), "cannot open '" + path_or_inline + "'");
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

json to_json(const Channel& ch)
{
    json rows = json::array();
    for (const auto& r : ch.matrix().to_rows()) {
        rows.push_back(numbers(r));
    }
    return {{"rows", rows}};
}

json to_json(const RdpSolution& sol, const RdpProblem& prob)
{
    return {
        {"D", number(prob.D)},
        {"P", number(prob.P)},
        {"u_card", prob.u_card},
        {"rate_nats", number(sol.rate)},
        {"rate_bits", number(sol.rate / std::numbers::ln2)},
        {"achieved_D", number(sol.achieved_D)},
        {"achieved_P", number(sol.achieved_P)},
        {"converged", sol.converged},
        {"restarts_used", sol.restarts_used},
        {"feasibility_gap", number(sol.feasibility_gap)},
        {"perception_price", number(sol.perception_price)},
        {"encoder", to_json(sol.encoder)},
        {"decoder", to_json(sol.decoder)},
    };
}

json to_json(const WaterfillSolution& sol)
{
    return {
        {"D", number(sol.D)},
        {"P", number(sol.P)},
        {"D_star", number(sol.D_star)},
        {"omega", number(sol.omega)},
        {"alpha", number(sol.alpha)},
        {"omega_l", numbers(sol.omega_l)},
        {"gamma", numbers(sol.gamma_star)},
        {"gamma_hat", numbers(sol.gamma_hat_star)},
        {"D_l", numbers(sol.D_l)},
        {"P_l", numbers(sol.P_l)},
        {"rate_nats", number(sol.rate)},
        {"rate_bits", number(sol.rate / std::numbers::ln2)},
        {"non_unique", sol.non_unique},
    };
}

namespace {

json to_json(const Estimate& e)
{
    return {{"value", number(e.value)}, {"se", number(e.se)}, {"target", number(e.target)}, {"z", number(e.z)}};
}

} // namespace

json to_json(const SimReport& rep)
{
    return {
        {"n_samples", rep.n_samples},
        {"seed", rep.seed},
        {"batches", rep.batches},
        {"est_D", to_json(rep.D)},
        {"est_P", to_json(rep.P)},
        {"est_rate", to_json(rep.rate)},
        {"warnings", rep.warnings},
    };
}

} // namespace rdp::io
