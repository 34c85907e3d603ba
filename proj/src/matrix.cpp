#include "rdp/matrix.hpp"

#include <algorithm>

#include "rdp/errors.hpp"

namespace rdp {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    require(!rows.empty(), "matrix must have at least one row");
    const std::size_t cols = rows.front().size();
    require(cols > 0, "matrix must have at least one column");
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == cols, "matrix rows have inconsistent lengths");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const
{
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i].assign(row(i).begin(), row(i).end());
    }
    return out;
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double Matrix::max_entry() const
{
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

double Matrix::min_entry() const
{
    return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

} // namespace rdp
