#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace peaklab {

using rvec = std::vector<double>;
using rmat = std::vector<rvec>;

inline double dot(const rvec& a, const rvec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const rvec& a) { return std::sqrt(dot(a, a)); }

inline rvec axpy(double t, const rvec& x, const rvec& y) {
    rvec r(y);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += t * x[i];
    return r;
}

inline rvec scale(double t, const rvec& x) {
    rvec r(x);
    for (double& v : r) v *= t;
    return r;
}

inline rvec sub(const rvec& a, const rvec& b) {
    rvec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline rvec add(const rvec& a, const rvec& b) {
    rvec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

// Rank of a small dense matrix by row echelon with partial pivoting.
inline int matrix_rank(rmat m, double tol = 1e-9) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        for (std::size_t r = row + 1; r < rows; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (std::fabs(m[piv][col]) <= tol) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row) continue;
            double f = m[r][col] / m[row][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

// Solve a square system by Gaussian elimination; returns false if singular.
inline bool solve_square(rmat a, rvec b, rvec& out, double tol = 1e-12) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) <= tol) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
    return true;
}

// Orthonormal basis of the null space of a (rows x cols) matrix, via the
// echelon form. Good enough for the tiny systems used here.
inline std::vector<rvec> null_space(rmat m, double tol = 1e-9) {
    if (m.empty()) return {};
    const std::size_t rows = m.size(), cols = m[0].size();
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        for (std::size_t r = row + 1; r < rows; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (std::fabs(m[piv][col]) <= tol) continue;
        std::swap(m[piv], m[row]);
        double d = m[row][col];
        for (std::size_t c = 0; c < cols; ++c) m[row][c] /= d;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row) continue;
            double f = m[r][col];
            for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<rvec> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        rvec v(cols, 0.0);
        v[free_col] = 1.0;
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            v[static_cast<std::size_t>(pivot_col[r])] = -m[r][free_col];
        double nv = norm2(v);
        if (nv > tol) basis.push_back(scale(1.0 / nv, v));
    }
    return basis;
}

} // namespace peaklab
