#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "rdp/finite_rdp.hpp"
#include "rdp/gaussian_rdp.hpp"
#include "rdp/simulate.hpp"

namespace rdp::io {

using nlohmann::json;

/// "%.12g"
std::string format12(double v);
/// Value rounded to 12 significant digits; non-finite values become null.
json number(double v);

/// {"probs": [...]} or a bare array.
ProbVector parse_prob_vector(const json& j);
/// {"rows": [[...], ...]} or a bare 2-D array.
Channel parse_channel(const json& j);
/// Bare 2-D array, {"rows": ...} or {"costs": ...}.
Matrix parse_matrix(const json& j);
/// "hamming" or a matrix; n is |X| for the hamming shorthand.
DistortionMatrix parse_distortion(const json& j, std::size_t n);
CostMatrix parse_cost(const json& j, std::size_t n);
/// {source, distortion, cost, D, P, u_card?}; distortion and cost default to hamming.
RdpProblem parse_problem(const json& j);

/// Reads a file, or parses the argument itself when it starts with '{'.
json load_json(const std::string& path_or_inline);

json to_json(const Channel& ch);
json to_json(const RdpSolution& sol, const RdpProblem& prob);
json to_json(const WaterfillSolution& sol);
json to_json(const SimReport& rep);

} // namespace rdp::io
