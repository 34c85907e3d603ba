#include "rdp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rdp/errors.hpp"

namespace rdp {

namespace {

struct Cell {
    std::size_t i;
    std::size_t j;
    double flow;
};

// Reduced problem after removing zero-mass symbols.
struct Reduced {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::vector<double> supply;
    std::vector<double> demand;
    Matrix cost;
};

Reduced reduce(const ProbVector& p, const ProbVector& q, const CostMatrix& c)
{
    Reduced r;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            r.rows.push_back(i);
            r.supply.push_back(p[i]);
        }
    }
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] > 0.0) {
            r.cols.push_back(j);
            r.demand.push_back(q[j]);
        }
    }
    r.cost = Matrix(r.rows.size(), r.cols.size());
    for (std::size_t a = 0; a < r.rows.size(); ++a) {
        for (std::size_t b = 0; b < r.cols.size(); ++b) {
            r.cost(a, b) = c(r.rows[a], r.cols[b]);
        }
    }
    return r;
}

// Node ids: rows 0..m-1, columns m..m+n-1.
std::vector<std::vector<std::size_t>> adjacency(const std::vector<Cell>& basis, std::size_t m,
                                                std::size_t n)
{
    std::vector<std::vector<std::size_t>> adj(m + n);
    for (std::size_t e = 0; e < basis.size(); ++e) {
        adj[basis[e].i].push_back(e);
        adj[m + basis[e].j].push_back(e);
    }
    return adj;
}

// Potentials with u_i + v_j = c_ij on the tree, u_0 = 0.
void tree_potentials(const std::vector<Cell>& basis, const Matrix& cost, std::vector<double>& u,
                     std::vector<double>& v)
{
    const std::size_t m = cost.rows();
    const std::size_t n = cost.cols();
    const auto adj = adjacency(basis, m, n);
    std::vector<double> pot(m + n, 0.0);
    std::vector<bool> seen(m + n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        for (std::size_t e : adj[node]) {
            const std::size_t other = node < m ? m + basis[e].j : basis[e].i;
            if (seen[other]) {
                continue;
            }
            seen[other] = true;
            pot[other] = cost(basis[e].i, basis[e].j) - pot[node];
            stack.push_back(other);
        }
    }
    u.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(m));
    v.assign(pot.begin() + static_cast<std::ptrdiff_t>(m), pot.end());
}

// Flows of the unique basic solution on a spanning tree, by leaf peeling.
std::vector<double> tree_flows(const std::vector<Cell>& basis, const std::vector<double>& supply,
                               const std::vector<double>& demand)
{
    const std::size_t m = supply.size();
    const std::size_t n = demand.size();
    std::vector<double> residual(supply);
    residual.insert(residual.end(), demand.begin(), demand.end());
    std::vector<std::size_t> degree(m + n, 0);
    for (const Cell& c : basis) {
        ++degree[c.i];
        ++degree[m + c.j];
    }
    std::vector<double> flow(basis.size(), 0.0);
    std::vector<bool> done(basis.size(), false);
    for (std::size_t step = 0; step < basis.size(); ++step) {
        for (std::size_t e = 0; e < basis.size(); ++e) {
            if (done[e]) {
                continue;
            }
            const std::size_t a = basis[e].i;
            const std::size_t b = m + basis[e].j;
            std::size_t leaf = 0;
            std::size_t other = 0;
            if (degree[a] == 1) {
                leaf = a;
                other = b;
            } else if (degree[b] == 1) {
                leaf = b;
                other = a;
            } else {
                continue;
            }
            flow[e] = residual[leaf];
            residual[other] -= flow[e];
            residual[leaf] = 0.0;
            --degree[a];
            --degree[b];
            done[e] = true;
            break;
        }
    }
    return flow;
}

double min_reduced_cost(const Matrix& cost, const std::vector<double>& u, const std::vector<double>& v)
{
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        for (std::size_t j = 0; j < cost.cols(); ++j) {
            worst = std::min(worst, cost(i, j) - u[i] - v[j]);
        }
    }
    return worst;
}

struct ReducedSolution {
    std::vector<Cell> basis;
    std::vector<double> u;
    std::vector<double> v;
};

ReducedSolution solve_enumeration(const Reduced& r)
{
    const std::size_t m = r.supply.size();
    const std::size_t n = r.demand.size();
    const std::size_t cells = m * n;
    const std::size_t k = m + n - 1;
    const double tol = 1e-12 * std::max(1.0, r.cost.max_entry());

    ReducedSolution best;
    double best_value = std::numeric_limits<double>::infinity();
    bool best_dual = false;

    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        // Spanning-tree check by union-find.
        std::vector<std::size_t> parent(m + n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        bool tree = true;
        std::vector<Cell> basis;
        basis.reserve(k);
        for (std::size_t idx : pick) {
            const std::size_t i = idx / n;
            const std::size_t j = idx % n;
            const std::size_t a = find(i);
            const std::size_t b = find(m + j);
            if (a == b) {
                tree = false;
                break;
            }
            parent[a] = b;
            basis.push_back({i, j, 0.0});
        }
        if (tree) {
            const auto flow = tree_flows(basis, r.supply, r.demand);
            bool feasible = true;
            double value = 0.0;
            for (std::size_t e = 0; e < k; ++e) {
                if (flow[e] < -1e-12) {
                    feasible = false;
                    break;
                }
                basis[e].flow = std::max(flow[e], 0.0);
                value += basis[e].flow * r.cost(basis[e].i, basis[e].j);
            }
            if (feasible) {
                std::vector<double> u;
                std::vector<double> v;
                tree_potentials(basis, r.cost, u, v);
                const bool dual = min_reduced_cost(r.cost, u, v) >= -tol;
                const bool better = value < best_value - tol ||
                                    (value <= best_value + tol && dual && !best_dual);
                if (better) {
                    best_value = value;
                    best_dual = dual;
                    best = {basis, u, v};
                }
            }
        }
        // Next k-combination of cell indices.
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == cells - k + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++pick[pos - 1];
        for (std::size_t t = pos; t < k; ++t) {
            pick[t] = pick[t - 1] + 1;
        }
    }
    return best;
}

ReducedSolution solve_simplex(const Reduced& r)
{
    const std::size_t m = r.supply.size();
    const std::size_t n = r.demand.size();
    const double tol = 1e-12 * std::max(1.0, r.cost.max_entry());

    // Northwest-corner start; ties advance the row only so the basis stays a tree.
    std::vector<Cell> basis;
    {
        std::vector<double> s(r.supply);
        std::vector<double> d(r.demand);
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < m && j < n) {
            const double f = std::min(s[i], d[j]);
            basis.push_back({i, j, f});
            s[i] -= f;
            d[j] -= f;
            if (i + 1 < m && (s[i] <= d[j] || j + 1 == n)) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    std::vector<double> u;
    std::vector<double> v;
    const std::size_t max_iter = 1000 + 50 * m * n;
    std::size_t degenerate_run = 0;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_iter) {
            throw std::runtime_error("transportation simplex did not terminate");
        }
        tree_potentials(basis, r.cost, u, v);

        // Entering cell: Dantzig rule, Bland rule after a run of degenerate pivots.
        const bool bland = degenerate_run > m + n;
        std::size_t ei = m;
        std::size_t ej = n;
        double most = -tol;
        for (std::size_t i = 0; i < m && !(bland && ei < m); ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double rc = r.cost(i, j) - u[i] - v[j];
                if (rc < most) {
                    ei = i;
                    ej = j;
                    most = rc;
                    if (bland) {
                        break;
                    }
                }
            }
        }
        if (ei == m) {
            break;
        }

        // Tree path from column ej back to row ei.
        const auto adj = adjacency(basis, m, n);
        std::vector<std::size_t> via(m + n, basis.size());
        std::vector<bool> seen(m + n, false);
        std::vector<std::size_t> stack{ei};
        seen[ei] = true;
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            stack.pop_back();
            for (std::size_t e : adj[node]) {
                const std::size_t other = node < m ? m + basis[e].j : basis[e].i;
                if (!seen[other]) {
                    seen[other] = true;
                    via[other] = e;
                    stack.push_back(other);
                }
            }
        }
        std::vector<std::size_t> path;
        for (std::size_t node = m + ej; node != ei;) {
            const std::size_t e = via[node];
            path.push_back(e);
            node = node < m ? m + basis[e].j : basis[e].i;
        }

        double theta = std::numeric_limits<double>::infinity();
        std::size_t leave = basis.size();
        for (std::size_t t = 0; t < path.size(); t += 2) {
            const Cell& c = basis[path[t]];
            const bool smaller = c.flow < theta;
            const bool tie = c.flow == theta && leave < basis.size() &&
                             c.i * n + c.j < basis[leave].i * n + basis[leave].j;
            if (smaller || tie) {
                theta = c.flow;
                leave = path[t];
            }
        }
        for (std::size_t t = 0; t < path.size(); ++t) {
            basis[path[t]].flow += (t % 2 == 0 ? -theta : theta);
        }
        basis[leave] = {ei, ej, theta};
        degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
    }
    for (Cell& c : basis) {
        c.flow = std::max(c.flow, 0.0);
    }
    return {basis, u, v};
}

} // namespace

CostMatrix::CostMatrix(Matrix costs, bool proper) : costs_(std::move(costs)), proper_(proper)
{
    require(!costs_.empty(), "cost matrix must be non-empty");
    for (double c : costs_.data()) {
        require(std::isfinite(c) && c >= 0.0, "cost entries must be finite and non-negative");
    }
    if (proper_) {
        require(costs_.rows() == costs_.cols(), "a proper cost must be square");
        for (std::size_t a = 0; a < costs_.rows(); ++a) {
            for (std::size_t b = 0; b < costs_.cols(); ++b) {
                require((costs_(a, b) == 0.0) == (a == b), "a proper cost has c(a, b) = 0 iff a = b");
            }
        }
    }
}

CostMatrix CostMatrix::hamming(std::size_t n)
{
    Matrix m(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 0.0;
    }
    return CostMatrix(std::move(m), true);
}

double TransportPlan::marginal_error() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < mass.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < mass.cols(); ++j) {
            s += mass(i, j);
        }
        worst = std::max(worst, std::abs(s - first[i]));
    }
    for (std::size_t j = 0; j < mass.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mass.rows(); ++i) {
            s += mass(i, j);
        }
        worst = std::max(worst, std::abs(s - second[j]));
    }
    return worst;
}

OtResult discrete_ot(const ProbVector& p, const ProbVector& q, const CostMatrix& cost, OtMethod method)
{
    require(p.size() == cost.rows() && q.size() == cost.cols(),
            "marginal sizes must match the cost matrix");
    const Reduced r = reduce(p, q, cost);
    const std::size_t m = r.rows.size();
    const std::size_t n = r.cols.size();
    if (method == OtMethod::automatic) {
        method = (m <= 4 && n <= 4) ? OtMethod::enumeration : OtMethod::simplex;
    }
    if (method == OtMethod::enumeration) {
        require(m <= 4 && n <= 4, "basis enumeration supports at most 4 x 4 supports");
    } else {
        require(m <= kMaxOtAlphabet && n <= kMaxOtAlphabet,
                "transportation simplex supports at most 64 x 64 supports");
    }
    const ReducedSolution sol =
        method == OtMethod::enumeration ? solve_enumeration(r) : solve_simplex(r);

    OtResult out;
    out.plan.mass = Matrix(p.size(), q.size());
    out.plan.first = p;
    out.plan.second = q;
    for (const Cell& c : sol.basis) {
        out.plan.mass(r.rows[c.i], r.cols[c.j]) += c.flow;
        out.value += c.flow * r.cost(c.i, c.j);
    }

    // Re-embed potentials; empty symbols get the largest dual-feasible value.
    constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    out.potential_first.assign(p.size(), kUnset);
    out.potential_second.assign(q.size(), kUnset);
    for (std::size_t a = 0; a < m; ++a) {
        out.potential_first[r.rows[a]] = sol.u[a];
    }
    for (std::size_t b = 0; b < n; ++b) {
        out.potential_second[r.cols[b]] = sol.v[b];
    }
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (!std::isnan(out.potential_second[j])) {
            continue;
        }
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m; ++a) {
            g = std::min(g, cost(r.rows[a], j) - sol.u[a]);
        }
        out.potential_second[j] = g;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isnan(out.potential_first[i])) {
            continue;
        }
        double f = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < q.size(); ++j) {
            f = std::min(f, cost(i, j) - out.potential_second[j]);
        }
        out.potential_first[i] = f;
    }
    return out;
}

double tv_distance(const ProbVector& p, const ProbVector& q)
{
    require(p.size() == q.size(), "pmfs must have the same size");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::abs(p[i] - q[i]);
    }
    return 0.5 * s;
}

double w2_squared_1d(std::span<const double> samples_p, std::span<const double> samples_q)
{
    require(samples_p.size() == samples_q.size(), "sample sets must have equal length");
    require(!samples_p.empty(), "sample sets must be non-empty");
    require(std::is_sorted(samples_p.begin(), samples_p.end()) &&
                std::is_sorted(samples_q.begin(), samples_q.end()),
            "samples must be sorted ascending");
    double s = 0.0;
    for (std::size_t i = 0; i < samples_p.size(); ++i) {
        const double d = samples_p[i] - samples_q[i];
        s += d * d;
    }
    return s / static_cast<double>(samples_p.size());
}

double w2_squared_gaussian_diag(std::span<const double> gammas, std::span<const double> gamma_hats)
{
    require(gammas.size() == gamma_hats.size(), "variance vectors must have equal length");
    double s = 0.0;
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        require(gammas[l] >= 0.0 && gamma_hats[l] >= 0.0, "variances must be non-negative");
        const double d = std::sqrt(gammas[l]) - std::sqrt(gamma_hats[l]);
        s += d * d;
    }
    return s;
}

} // namespace rdp
