#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace designwalk {

/// Dense row-major matrix of doubles. Small-n workhorse for the spectral and
/// feasibility machinery; no view semantics, copies are cheap at this scale.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    std::span<double> row(int i) { return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int i) const { return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)}; }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

inline std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
    if (static_cast<int>(x.size()) != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) y[i] = dot(m.row(i), x);
    return y;
}

inline double max_abs(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

/// One vector of the right null space of `a`, found by Gauss-Jordan reduction
/// with partial pivoting. Pivots of magnitude <= `tol` are treated as zero.
/// Returns an empty vector when every column is a pivot column.
inline std::vector<double> nullspace_vector(Matrix a, double tol) {
    const int m = a.rows;
    const int n = a.cols;
    std::vector<int> pivot_row_of_col(n, -1);
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int p = r;
        for (int i = r + 1; i < m; ++i)
            if (std::abs(a(i, c)) > std::abs(a(p, c))) p = i;
        if (std::abs(a(p, c)) <= tol) continue;
        if (p != r)
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(r, j));
        const double inv = 1.0 / a(r, c);
        for (int j = 0; j < n; ++j) a(r, j) *= inv;
        a(r, c) = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == r || a(i, c) == 0.0) continue;
            const double f = a(i, c);
            for (int j = 0; j < n; ++j) a(i, j) -= f * a(r, j);
            a(i, c) = 0.0;
        }
        pivot_row_of_col[c] = r;
        ++r;
    }
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (pivot_row_of_col[c] < 0) { free_col = c; break; }
    if (free_col < 0) return {};
    std::vector<double> z(n, 0.0);
    z[free_col] = 1.0;
    for (int c = 0; c < n; ++c)
        if (pivot_row_of_col[c] >= 0) z[c] = -a(pivot_row_of_col[c], free_col);
    return z;
}

/// Least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_slope: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace designwalk
