#include "rdp/linprog.hpp"

#include <cmath>
#include <limits>

#include "rdp/errors.hpp"

namespace rdp {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : t_(rows + 1, cols + 1), basis_(rows) {}

    double& at(std::size_t i, std::size_t j) { return t_(i, j); }
    double rhs(std::size_t i) const { return t_(i, t_.cols() - 1); }
    std::size_t rows() const { return t_.rows() - 1; }
    std::size_t cols() const { return t_.cols() - 1; }
    std::vector<std::size_t>& basis() { return basis_; }

    // Objective row is the last row; it holds reduced costs and -value.
    double& obj(std::size_t j) { return t_(rows(), j); }

    void pivot(std::size_t r, std::size_t c)
    {
        const double piv = t_(r, c);
        for (std::size_t j = 0; j < t_.cols(); ++j) {
            t_(r, j) /= piv;
        }
        for (std::size_t i = 0; i < t_.rows(); ++i) {
            if (i == r) {
                continue;
            }
            const double f = t_(i, c);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < t_.cols(); ++j) {
                t_(i, j) -= f * t_(r, j);
            }
            t_(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    // Bland's rule over columns [0, limit). Returns false if unbounded.
    bool optimize(std::size_t limit)
    {
        while (true) {
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                if (obj(j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == limit) {
                return true;
            }
            std::size_t leave = rows();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows(); ++i) {
                const double a = t_(i, enter);
                if (a <= kPivotTol) {
                    continue;
                }
                const double ratio = rhs(i) / a;
                if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave < rows() && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == rows()) {
                return false;
            }
            pivot(leave, enter);
        }
    }

    void drop_row(std::size_t r)
    {
        Matrix next(t_.rows() - 1, t_.cols());
        for (std::size_t i = 0, k = 0; i < t_.rows(); ++i) {
            if (i == r) {
                continue;
            }
            for (std::size_t j = 0; j < t_.cols(); ++j) {
                next(k, j) = t_(i, j);
            }
            ++k;
        }
        t_ = std::move(next);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    Matrix t_;
    std::vector<std::size_t> basis_;
};

} // namespace

LpResult linprog_min(const std::vector<double>& c, const Matrix& a_ub, const std::vector<double>& b_ub,
                     const Matrix& a_eq, const std::vector<double>& b_eq)
{
    const std::size_t n = c.size();
    const std::size_t mu = b_ub.size();
    const std::size_t me = b_eq.size();
    require(a_ub.rows() == mu && (mu == 0 || a_ub.cols() == n), "A_ub has the wrong shape");
    require(a_eq.rows() == me && (me == 0 || a_eq.cols() == n), "A_eq has the wrong shape");

    // Columns: x (n), slacks (mu), artificials (one per row).
    const std::size_t m = mu + me;
    const std::size_t n_art0 = n + mu;
    Tableau tab(m, n + mu + m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool ub = i < mu;
        double b = ub ? b_ub[i] : b_eq[i - mu];
        const double sign = b < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            tab.at(i, j) = sign * (ub ? a_ub(i, j) : a_eq(i - mu, j));
        }
        if (ub) {
            tab.at(i, n + i) = sign;
        }
        tab.at(i, n_art0 + i) = 1.0;
        tab.at(i, tab.cols()) = sign * b;
        tab.basis()[i] = n_art0 + i;
    }

    // Phase 1: minimize the sum of artificials.
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= tab.cols(); ++j) {
            if (j < n_art0 || j == tab.cols()) {
                tab.obj(j) -= tab.at(i, j);
            }
        }
    }
    tab.optimize(n_art0);
    LpResult out;
    out.x.assign(n, 0.0);
    if (-tab.obj(tab.cols()) > 1e-9) {
        out.status = LpStatus::infeasible;
        return out;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.rows();) {
        if (tab.basis()[i] < n_art0) {
            ++i;
            continue;
        }
        std::size_t col = n_art0;
        for (std::size_t j = 0; j < n_art0; ++j) {
            if (std::abs(tab.at(i, j)) > kPivotTol) {
                col = j;
                break;
            }
        }
        if (col == n_art0) {
            tab.drop_row(i);
        } else {
            tab.pivot(i, col);
            ++i;
        }
    }

    // Phase 2 objective row.
    for (std::size_t j = 0; j <= tab.cols(); ++j) {
        tab.obj(j) = j < n ? c[j] : 0.0;
    }
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        const std::size_t b = tab.basis()[i];
        const double cb = b < n ? c[b] : 0.0;
        if (cb == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j <= tab.cols(); ++j) {
            tab.obj(j) -= cb * tab.at(i, j);
        }
    }
    if (!tab.optimize(n_art0)) {
        out.status = LpStatus::unbounded;
        return out;
    }
    out.status = LpStatus::optimal;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        if (tab.basis()[i] < n) {
            out.x[tab.basis()[i]] = tab.rhs(i);
        }
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.value += c[j] * out.x[j];
    }
    return out;
}

} // namespace rdp
