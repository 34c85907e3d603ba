#pragma once

#include <vector>

#include "rdp/matrix.hpp"

namespace rdp {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> x;
};

/// min c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
/// Dense two-phase tableau simplex with Bland's rule; meant for few rows.
/// Either constraint block may be empty (0 rows).
LpResult linprog_min(const std::vector<double>& c, const Matrix& a_ub, const std::vector<double>& b_ub,
                     const Matrix& a_eq, const std::vector<double>& b_eq);

} // namespace rdp
