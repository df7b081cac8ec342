#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "designwalk/linalg.hpp"
#include "designwalk/simplex.hpp"
#include "designwalk/spectral.hpp"

namespace designwalk {

constexpr double kDefaultVerifyTol = 1e-9;

/// Nonnegative probability measure on at most `ell` vertices, orthogonal to
/// basis vectors 2..ell. Weights are aligned with `support` and sum to 1.
struct DesignMeasure {
    int ell = 1;
    std::vector<int> support;
    std::vector<double> weights;
    double orthogonality_residual = 0.0;  // max_{2<=j<=ell} |<phi_j, w>|
    double l2_norm_sq = 0.0;
    int effective_depth = 1;  // largest L with <phi_j, w> ~ 0 for all 2<=j<=L

    std::vector<double> dense(int n) const {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < support.size(); ++i) w[support[i]] = weights[i];
        return w;
    }
};

/// Outcome of the feasibility system Mw = e1, w >= 0. The infeasible arm
/// carries a Farkas vector y with y'M >= 0 and y_1 < 0; for an orthonormal
/// moment system that is mathematically impossible, so observing it means
/// the solver broke down numerically.
struct FeasibilityCertificate {
    bool feasible = true;
    std::vector<double> farkas;
};

class feasibility_breakdown : public std::runtime_error {
public:
    feasibility_breakdown(FeasibilityCertificate cert, const std::string& what)
        : std::runtime_error(what), certificate(std::move(cert)) {}
    FeasibilityCertificate certificate;
};

struct MomentSystem {
    Matrix m;                 // ell x n, rows are basis vectors 1..ell
    std::vector<double> rhs;  // e1
};

inline MomentSystem build_moment_system(const SpectralBasis& basis, int ell) {
    if (ell < 1 || ell > basis.n - 1)
        throw std::invalid_argument("ell must satisfy 1 <= ell <= n-1, got " + std::to_string(ell));
    MomentSystem sys;
    sys.m = Matrix(ell, basis.n);
    for (int i = 0; i < ell; ++i)
        for (int j = 0; j < basis.n; ++j) sys.m(i, j) = basis.eigenvectors[i][j];
    sys.rhs.assign(ell, 0.0);
    sys.rhs[0] = 1.0;
    return sys;
}

/// Per-iteration record of a Caratheodory reduction, for auditing.
struct ReduceTrace {
    std::vector<int> support_sizes;   // after each iteration
    std::vector<double> residuals;    // max |Mw - e1| after each iteration
    int iterations = 0;
};

namespace detail {

constexpr double kRankTol = 1e-11;
constexpr double kZeroClampRel = 1e-11;

inline double moment_residual(const Matrix& m, const std::vector<double>& rhs, const std::vector<double>& w) {
    const auto mw = matvec(m, w);
    double r = 0.0;
    for (std::size_t i = 0; i < mw.size(); ++i) r = std::max(r, std::abs(mw[i] - rhs[i]));
    return r;
}

inline void zero_clamp(std::vector<double>& w) {
    const double cutoff = kZeroClampRel * max_abs(w);
    for (double& x : w)
        if (x < cutoff) x = 0.0;
}

}  // namespace detail

/// Shrinks the support of a nonnegative solution of Mw = e1 to at most
/// rank(M) = ell coordinates. Each round finds a null-space direction z of M
/// restricted to the current support and steps w -> w - t z with the largest
/// t keeping w >= 0, which zeroes every coordinate attaining the ratio
/// minimum while Mw stays fixed.
inline std::vector<double> caratheodory_reduce(const Matrix& m, std::vector<double> w, ReduceTrace* trace = nullptr) {
    const int ell = m.rows;
    const int n = m.cols;
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("caratheodory_reduce: dimension mismatch");
    std::vector<double> rhs(ell, 0.0);
    rhs[0] = 1.0;
    if (detail::moment_residual(m, rhs, w) > 1e-10)
        throw std::invalid_argument("caratheodory_reduce: input does not satisfy Mw = e1");
    for (double x : w)
        if (x < -1e-12) throw std::invalid_argument("caratheodory_reduce: input has a negative entry");
    for (double& x : w)
        if (x < 0.0) x = 0.0;
    detail::zero_clamp(w);

    for (int iteration = 0; iteration < n; ++iteration) {
        std::vector<int> support;
        for (int i = 0; i < n; ++i)
            if (w[i] > 0.0) support.push_back(i);
        const int s = static_cast<int>(support.size());
        if (s <= ell) break;

        Matrix restricted(ell, s);
        for (int r = 0; r < ell; ++r)
            for (int c = 0; c < s; ++c) restricted(r, c) = m(r, support[c]);
        std::vector<double> z = nullspace_vector(restricted, detail::kRankTol);
        if (z.empty())
            throw std::runtime_error("caratheodory_reduce: null-space extraction failed with support " + std::to_string(s) +
                                     " > ell " + std::to_string(ell) + " (rank tolerance misconfiguration)");
        bool has_positive = false;
        for (double x : z)
            if (x > 0.0) {
                has_positive = true;
                break;
            }
        if (!has_positive)
            for (double& x : z) x = -x;

        double t = std::numeric_limits<double>::infinity();
        for (int c = 0; c < s; ++c)
            if (z[c] > 0.0) t = std::min(t, w[support[c]] / z[c]);

        for (int c = 0; c < s; ++c) {
            const int i = support[c];
            if (z[c] > 0.0 && w[i] / z[c] <= t * (1.0 + 1e-12)) {
                w[i] = 0.0;  // every coordinate attaining the minimum leaves
            } else {
                w[i] -= t * z[c];
                if (w[i] < -1e-12)
                    throw std::runtime_error("caratheodory_reduce: internal error, negative entry " + std::to_string(w[i]));
                if (w[i] < 0.0) w[i] = 0.0;
            }
        }
        detail::zero_clamp(w);

        if (trace) {
            int count = 0;
            for (double x : w)
                if (x > 0.0) ++count;
            trace->support_sizes.push_back(count);
            trace->residuals.push_back(detail::moment_residual(m, rhs, w));
            ++trace->iterations;
        }
    }

    int support = 0;
    for (double x : w)
        if (x > 0.0) ++support;
    if (support > ell)
        throw std::runtime_error("caratheodory_reduce: support " + std::to_string(support) + " still exceeds " + std::to_string(ell));
    if (detail::moment_residual(m, rhs, w) > kDefaultVerifyTol)
        throw std::runtime_error("caratheodory_reduce: residual drifted beyond tolerance");
    return w;
}

enum class DesignMethod { reduce_uniform, lp_vertex };

struct SolveOptions {
    DesignMethod method = DesignMethod::reduce_uniform;
    std::vector<double> objective;  // lp_vertex only; empty means all-ones
    double tol = kDefaultVerifyTol;
};

struct DesignVerification {
    int support_size = 0;
    bool support_ok = false;
    bool weights_positive = false;
    double weight_sum = 0.0;
    bool sum_ok = false;
    double orthogonality_residual = 0.0;
    bool residual_ok = false;
    double l2_norm_sq = 0.0;
    std::vector<double> inner_products;  // <phi_j, w> for j = 2..n
    int effective_depth = 1;
    bool passed = false;
};

/// Recomputes every design property from scratch against the basis.
inline DesignVerification verify_design(const SpectralBasis& basis, const DesignMeasure& m, double tol = kDefaultVerifyTol) {
    DesignVerification v;
    const std::vector<double> w = m.dense(basis.n);
    v.support_size = static_cast<int>(m.support.size());
    v.support_ok = v.support_size <= m.ell && v.support_size > 0;
    v.weights_positive = !m.weights.empty();
    for (double x : m.weights)
        if (!(x > 0.0)) v.weights_positive = false;
    v.weight_sum = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    v.sum_ok = std::abs(v.weight_sum - 1.0) <= 1e-12;
    v.l2_norm_sq = norm_sq(w);
    v.inner_products.reserve(basis.n - 1);
    for (int j = 1; j < basis.n; ++j) v.inner_products.push_back(dot(basis.eigenvectors[j], w));
    for (int j = 2; j <= m.ell; ++j)
        v.orthogonality_residual = std::max(v.orthogonality_residual, std::abs(v.inner_products[j - 2]));
    v.residual_ok = v.orthogonality_residual <= tol;
    v.effective_depth = 1;
    for (int j = 2; j <= basis.n; ++j) {
        if (std::abs(v.inner_products[j - 2]) > tol) break;
        v.effective_depth = j;
    }
    v.effective_depth = std::min(v.effective_depth, basis.n - 1);
    v.passed = v.support_ok && v.weights_positive && v.sum_ok && v.residual_ok;
    return v;
}

namespace detail {

inline DesignMeasure finalize_design(const SpectralBasis& basis, int ell, std::vector<double> w, double tol) {
    zero_clamp(w);
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(sum > 0.0)) throw std::runtime_error("design construction produced a zero measure");
    for (double& x : w) x /= sum;

    DesignMeasure m;
    m.ell = ell;
    for (int i = 0; i < basis.n; ++i) {
        if (w[i] > 0.0) {
            m.support.push_back(i);
            m.weights.push_back(w[i]);
        }
    }
    for (int j = 2; j <= ell; ++j)
        m.orthogonality_residual = std::max(m.orthogonality_residual, std::abs(dot(basis.eigenvectors[j - 1], w)));
    m.l2_norm_sq = norm_sq(w);

    if (static_cast<int>(m.support.size()) > ell)
        throw std::runtime_error("design support " + std::to_string(m.support.size()) + " exceeds ell " + std::to_string(ell));
    if (m.orthogonality_residual > tol)
        throw std::runtime_error("design orthogonality residual " + std::to_string(m.orthogonality_residual) + " exceeds tolerance");
    m.effective_depth = verify_design(basis, m, tol).effective_depth;
    return m;
}

}  // namespace detail

/// Constructs a design for the first `ell` basis positions.
///
/// reduce_uniform starts from the scaled uniform vector 1/sqrt(n), which
/// satisfies Mw = e1 exactly, and compresses its support; lp_vertex solves
/// min <c, w> s.t. Mw = e1, w >= 0 and takes the optimal vertex. Both are
/// normalized to probability measures.
inline DesignMeasure solve_design(const SpectralBasis& basis, int ell, const SolveOptions& options = {}) {
    const MomentSystem sys = build_moment_system(basis, ell);
    const int n = basis.n;
    std::vector<double> w;
    if (options.method == DesignMethod::reduce_uniform) {
        std::vector<double> start(n, 1.0 / std::sqrt(static_cast<double>(n)));
        w = caratheodory_reduce(sys.m, std::move(start));
    } else {
        std::vector<double> c = options.objective;
        if (c.empty()) c.assign(n, 1.0);
        if (static_cast<int>(c.size()) != n) throw std::invalid_argument("lp objective dimension mismatch");
        const SimplexResult lp = simplex_solve(sys.m, sys.rhs, c);
        if (lp.status == SimplexResult::Status::infeasible) {
            FeasibilityCertificate cert;
            cert.feasible = false;
            cert.farkas = lp.farkas;
            throw feasibility_breakdown(cert,
                                        "numerical breakdown: simplex reported Mw = e1, w >= 0 infeasible, which cannot hold "
                                        "for orthonormal rows; Farkas certificate attached");
        }
        if (lp.status == SimplexResult::Status::unbounded)
            throw std::runtime_error("numerical breakdown: design LP reported unbounded");
        w = lp.x;
    }
    return detail::finalize_design(basis, ell, std::move(w), options.tol);
}

/// Two-point design orthogonal to basis vector 2, from its extreme entries:
/// with alpha the largest positive and beta the most negative entry, weights
/// (-beta, alpha)/(alpha - beta) sit on those two vertices.
inline DesignMeasure design_from_sign_pattern(const SpectralBasis& basis, double tol = kDefaultVerifyTol) {
    if (basis.n < 3) throw std::invalid_argument("sign-pattern design needs n >= 3 (ell = 2 <= n-1)");
    const auto& phi2 = basis.eigenvectors[1];
    int imax = 0, imin = 0;
    for (int i = 1; i < basis.n; ++i) {
        if (phi2[i] > phi2[imax]) imax = i;
        if (phi2[i] < phi2[imin]) imin = i;
    }
    const double alpha = phi2[imax];
    const double beta = phi2[imin];
    if (!(alpha > 0.0) || !(beta < 0.0))
        throw std::runtime_error("basis vector 2 lacks entries of both signs; basis is not orthogonal to the constant vector");
    std::vector<double> w(basis.n, 0.0);
    w[imax] = -beta / (alpha - beta);
    w[imin] = alpha / (alpha - beta);
    return detail::finalize_design(basis, 2, std::move(w), tol);
}

}  // namespace designwalk
