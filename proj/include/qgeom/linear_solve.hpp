#pragma once

#include "qgeom/scalar.hpp"

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace qgeom {

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

inline const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Unique: return "unique";
    case SolveStatus::Inconsistent: return "inconsistent";
    case SolveStatus::Underdetermined: return "underdetermined";
    }
    return "?";
}

/// Row-major dense matrix over any scalar field.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Field<T>::zero()) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
struct LinearSolution {
    SolveStatus status = SolveStatus::Inconsistent;
    std::vector<T> x;
};

/// Solves A x = b by Gauss-Jordan elimination. Float kinds use partial
/// pivoting and treat |pivot| <= eps as zero. Inconsistency is checked before
/// rank deficiency, so a system that is both reports Inconsistent.
template <class T>
LinearSolution<T> solve_linear(DenseMatrix<T> a, std::vector<T> b, double eps = kDefaultEps) {
    using F = Field<T>;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t best = m;
        double best_mag = 0.0;
        for (std::size_t r = row; r < m; ++r) {
            if (F::is_zero(a(r, col), eps)) continue;
            const double mag = F::magnitude(a(r, col));
            if (best == m || (!F::exact && mag > best_mag)) {
                best = r;
                best_mag = mag;
                if (F::exact) break;
            }
        }
        if (best == m) continue;
        if (best != row) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(best, c), a(row, c));
            std::swap(b[best], b[row]);
        }
        const T inv = F::one() / a(row, col);
        for (std::size_t c = col; c < n; ++c) a(row, c) = a(row, c) * inv;
        b[row] = b[row] * inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || F::is_zero(a(r, col), 0.0)) continue;
            const T factor = a(r, col);
            for (std::size_t c = col; c < n; ++c) a(r, c) = a(r, c) - factor * a(row, c);
            b[r] = b[r] - factor * b[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    LinearSolution<T> out;
    for (std::size_t r = row; r < m; ++r) {
        if (!F::is_zero(b[r], eps)) {
            out.status = SolveStatus::Inconsistent;
            return out;
        }
    }
    if (row < n) {
        out.status = SolveStatus::Underdetermined;
        return out;
    }
    out.status = SolveStatus::Unique;
    out.x.assign(n, F::zero());
    for (std::size_t r = 0; r < row; ++r) out.x[pivot_col[r]] = b[r];
    return out;
}

}  // namespace qgeom
