#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "designwalk/linalg.hpp"

namespace designwalk {

/// Two-phase tableau simplex for min c'x s.t. Ax = b, x >= 0, with Bland's
/// rule throughout, so it cannot cycle. Returns the optimal basic feasible
/// solution (at most m nonzero entries). On infeasibility the `farkas` field
/// holds y with y'A >= 0 and y'b < 0, extracted from the phase-1 multipliers.
struct SimplexResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::optimal;
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> farkas;
    int pivots = 0;
};

namespace detail {

constexpr double kSimplexTol = 1e-10;

inline void simplex_pivot(Matrix& t, std::vector<int>& basis, int row, int col) {
    const int cols = t.cols;
    const double inv = 1.0 / t(row, col);
    for (int j = 0; j < cols; ++j) t(row, j) *= inv;
    t(row, col) = 1.0;
    for (int i = 0; i < t.rows; ++i) {
        if (i == row || t(i, col) == 0.0) continue;
        const double f = t(i, col);
        for (int j = 0; j < cols; ++j) t(i, j) -= f * t(row, j);
        t(i, col) = 0.0;
    }
    basis[row] = col;
}

/// Bland: entering column = lowest admissible index with negative reduced
/// cost; leaving row = min ratio, ties to the lowest basis index.
/// The cost row is t.rows-1; returns false once optimal.
inline bool simplex_step(Matrix& t, std::vector<int>& basis, int usable_cols) {
    const int m = t.rows - 1;
    const int rhs = t.cols - 1;
    int col = -1;
    for (int j = 0; j < usable_cols; ++j) {
        if (t(m, j) < -kSimplexTol) {
            col = j;
            break;
        }
    }
    if (col < 0) return false;
    int row = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
        if (t(i, col) <= kSimplexTol) continue;
        const double ratio = t(i, rhs) / t(i, col);
        if (row < 0 || ratio < best - kSimplexTol || (std::abs(ratio - best) <= kSimplexTol && basis[i] < basis[row])) {
            row = i;
            best = ratio;
        }
    }
    if (row < 0) throw std::runtime_error("simplex: unbounded");
    simplex_pivot(t, basis, row, col);
    return true;
}

}  // namespace detail

inline SimplexResult simplex_solve(const Matrix& a, std::vector<double> b, const std::vector<double>& c) {
    const int m = a.rows;
    const int n = a.cols;
    if (static_cast<int>(b.size()) != m || static_cast<int>(c.size()) != n)
        throw std::invalid_argument("simplex_solve: dimension mismatch");

    // Tableau: n structural columns, m artificials, rhs; last row is cost.
    Matrix t(m + 1, n + m + 1);
    std::vector<double> row_sign(m, 1.0);
    for (int i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        row_sign[i] = sign;
        for (int j = 0; j < n; ++j) t(i, j) = sign * a(i, j);
        t(i, n + i) = 1.0;
        t(i, n + m) = sign * b[i];
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Phase 1: minimize the sum of artificials.
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += t(i, j);
        t(m, j) = -s;
    }
    double rhs_sum = 0.0;
    for (int i = 0; i < m; ++i) rhs_sum += t(i, n + m);
    t(m, n + m) = -rhs_sum;

    SimplexResult result;
    while (detail::simplex_step(t, basis, n + m)) ++result.pivots;

    const double phase1 = -t(m, n + m);
    if (phase1 > 1e-9) {
        result.status = SimplexResult::Status::infeasible;
        result.objective = phase1;
        // Multipliers pi_i = 1 - (reduced cost of artificial i); y = -pi,
        // then undo the row sign flips applied to normalize b.
        result.farkas.resize(m);
        for (int i = 0; i < m; ++i) {
            const double pi = 1.0 - t(m, n + i);
            result.farkas[i] = -pi * row_sign[i];
        }
        return result;
    }

    // Drive any lingering artificial out of the basis.
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (std::abs(t(i, j)) > detail::kSimplexTol) {
                col = j;
                break;
            }
        if (col < 0)
            throw std::runtime_error("simplex: redundant row " + std::to_string(i) + " (matrix not full row rank)");
        detail::simplex_pivot(t, basis, i, col);
        ++result.pivots;
    }

    // Phase 2 cost row over structural columns only.
    for (int j = 0; j <= n + m; ++j) t(m, j) = 0.0;
    for (int j = 0; j < n; ++j) t(m, j) = c[j];
    for (int i = 0; i < m; ++i) {
        const double cb = c[basis[i]];
        if (cb == 0.0) continue;
        for (int j = 0; j <= n + m; ++j) t(m, j) -= cb * t(i, j);
    }
    try {
        while (detail::simplex_step(t, basis, n)) ++result.pivots;
    } catch (const std::runtime_error&) {
        result.status = SimplexResult::Status::unbounded;
        return result;
    }

    result.status = SimplexResult::Status::optimal;
    result.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) result.x[basis[i]] = t(i, n + m);
    result.objective = dot(result.x, c);
    return result;
}

}  // namespace designwalk
