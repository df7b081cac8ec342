#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "designwalk/graph.hpp"
#include "designwalk/linalg.hpp"

namespace designwalk {

enum class OperatorKind { walk_matrix, laplacian };

inline std::string to_string(OperatorKind op) {
    return op == OperatorKind::walk_matrix ? "walk_matrix" : "laplacian";
}

/// How positions 2..n of the eigenbasis are arranged. Position 1 is always
/// the trivial eigenpair. abs_desc means descending |eigenvalue| for the walk
/// matrix and ascending eigenvalue for the Laplacian; custom permutes the
/// abs_desc arrangement by a caller-supplied order of positions 2..n.
struct OrderingPolicy {
    enum class Tag { abs_desc, custom };
    Tag tag = Tag::abs_desc;
    std::vector<int> tail;  // custom: permutation of {2,..,n}, 1-based positions into the default order

    static OrderingPolicy abs_desc() { return {}; }
    static OrderingPolicy custom(std::vector<int> tail) {
        OrderingPolicy p;
        p.tag = Tag::custom;
        p.tail = std::move(tail);
        return p;
    }
};

inline std::string to_string(OrderingPolicy::Tag tag) {
    return tag == OrderingPolicy::Tag::abs_desc ? "abs_desc" : "custom";
}

/// Orthonormal eigenbasis of the chosen operator in policy order.
/// eigenvectors[i] is the (i+1)-th basis vector, so eigenvectors[0] is the
/// exact constant vector 1/sqrt(n). Immutable; share freely across threads.
struct SpectralBasis {
    OperatorKind op = OperatorKind::walk_matrix;
    OrderingPolicy ordering;
    int n = 0;
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    double residual = 0.0;  // max entry error of sum_i lambda_i phi_i phi_i^T vs the operator

    std::span<const double> phi(int index_zero_based) const { return eigenvectors.at(index_zero_based); }
};

inline Matrix operator_matrix(const Graph& g, OperatorKind op) {
    const int n = g.vertex_count();
    Matrix m(n, n);
    if (op == OperatorKind::walk_matrix) {
        const double inv_d = 1.0 / static_cast<double>(g.degree());
        for (int u = 0; u < n; ++u)
            for (int w : g.neighbors(u)) m(u, w) = inv_d;
    } else {
        for (int u = 0; u < n; ++u) {
            m(u, u) = static_cast<double>(g.degree(u));
            for (int w : g.neighbors(u)) m(u, w) = -1.0;
        }
    }
    return m;
}

namespace detail {

constexpr double kJacobiOffTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kEigGroupTol = 1e-9;
constexpr double kBasisInvariantTol = 1e-10;

struct JacobiResult {
    std::vector<double> values;
    Matrix vectors;  // columns are eigenvectors
    int sweeps = 0;
    double off_norm = 0.0;
};

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

/// Cyclic-by-row Jacobi rotations on a symmetric matrix.
inline JacobiResult jacobi_eigensymm(Matrix a) {
    const int n = a.rows;
    if (n != a.cols) throw std::invalid_argument("jacobi: matrix must be square");
    Matrix v(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;

    JacobiResult result;
    result.off_norm = off_diagonal_norm(a);
    int sweep = 0;
    while (result.off_norm > kJacobiOffTol && sweep < kJacobiMaxSweeps) {
        ++sweep;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
        result.off_norm = off_diagonal_norm(a);
    }
    result.sweeps = sweep;
    if (result.off_norm > kJacobiOffTol)
        throw std::runtime_error("eigensolver failed to converge after " + std::to_string(sweep) +
                                 " sweeps (off-diagonal norm " + std::to_string(result.off_norm) + ")");
    result.values.resize(n);
    for (int i = 0; i < n; ++i) result.values[i] = a(i, i);
    result.vectors = std::move(v);
    return result;
}

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

/// Deterministic orthonormal basis of the span of `members`: accept the
/// projections of the standard basis vectors e_0, e_1, ... in coordinate
/// order, Gram-Schmidt-orthogonalized against everything accepted so far
/// (including `fixed` vectors, which are kept but not returned).
inline std::vector<std::vector<double>> coordinate_seeded_basis(const std::vector<const std::vector<double>*>& members,
                                                                const std::vector<std::vector<double>>& fixed, int n) {
    const std::size_t want = members.size() - fixed.size();
    std::vector<std::vector<double>> accepted = fixed;
    std::vector<std::vector<double>> produced;
    for (int j = 0; j < n && produced.size() < want; ++j) {
        // candidate = projector onto the subspace applied to e_j
        std::vector<double> cand(n, 0.0);
        for (const auto* m : members) {
            const double coef = (*m)[j];
            if (coef == 0.0) continue;
            for (int i = 0; i < n; ++i) cand[i] += coef * (*m)[i];
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : accepted) {
                const double proj = dot(cand, u);
                for (int i = 0; i < n; ++i) cand[i] -= proj * u[i];
            }
        }
        const double len = norm(cand);
        if (len <= 1e-8) continue;
        for (double& x : cand) x /= len;
        accepted.push_back(cand);
        produced.push_back(std::move(cand));
    }
    if (produced.size() != want)
        throw std::runtime_error("degenerate eigenspace basis extraction failed");
    return produced;
}

}  // namespace detail

/// Orthonormal eigendecomposition under the ordering policy. Deterministic
/// for a given (graph, operator, policy): degenerate eigenspaces are grouped
/// at tolerance 1e-9 and re-based by coordinate-seeded Gram-Schmidt, and the
/// trivial eigenpair is inserted exactly rather than taken from the solver.
inline SpectralBasis decompose(const Graph& g, OperatorKind op, const OrderingPolicy& policy = {}) {
    const int n = g.vertex_count();
    const Matrix a = operator_matrix(g, op);
    const detail::JacobiResult jac = detail::jacobi_eigensymm(a);

    // Cluster eigenvalues (chained at tolerance 1e-9) so degenerate spaces
    // are handled as units.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return jac.values[x] < jac.values[y]; });
    std::vector<std::vector<int>> clusters;
    for (int idx : order) {
        if (!clusters.empty() && jac.values[idx] - jac.values[clusters.back().back()] <= detail::kEigGroupTol)
            clusters.back().push_back(idx);
        else
            clusters.push_back({idx});
    }

    const double trivial_value = op == OperatorKind::walk_matrix ? 1.0 : 0.0;
    std::vector<double> ones(n, 1.0 / std::sqrt(static_cast<double>(n)));

    int trivial_cluster = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        double mean = 0.0;
        for (int idx : clusters[c]) mean += jac.values[idx];
        mean /= static_cast<double>(clusters[c].size());
        if (const double gap = std::abs(mean - trivial_value); gap < best_gap) {
            best_gap = gap;
            trivial_cluster = static_cast<int>(c);
        }
    }
    if (best_gap > 1e-6)
        throw std::runtime_error("trivial eigenvalue not found (closest cluster at distance " + std::to_string(best_gap) + ")");

    std::vector<detail::EigenPair> trivial_first;  // the exact trivial pair
    std::vector<detail::EigenPair> rest;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        double mean = 0.0;
        std::vector<const std::vector<double>*> members;
        std::vector<std::vector<double>> columns;
        columns.reserve(clusters[c].size());
        for (int idx : clusters[c]) {
            mean += jac.values[idx];
            std::vector<double> col(n);
            for (int i = 0; i < n; ++i) col[i] = jac.vectors(i, idx);
            columns.push_back(std::move(col));
        }
        mean /= static_cast<double>(clusters[c].size());
        for (const auto& col : columns) members.push_back(&col);

        if (static_cast<int>(c) == trivial_cluster) {
            trivial_first.push_back({trivial_value, ones});
            const auto extra = detail::coordinate_seeded_basis(members, {ones}, n);
            for (const auto& vec : extra) rest.push_back({mean, vec});
        } else {
            const auto vecs = detail::coordinate_seeded_basis(members, {}, n);
            for (const auto& vec : vecs) rest.push_back({mean, vec});
        }
    }

    // Default arrangement of positions 2..n. Walk matrix: |value| descending,
    // positive before negative across an |value| tie, then ascending value.
    // Laplacian: ascending value.
    std::stable_sort(rest.begin(), rest.end(), [&](const detail::EigenPair& x, const detail::EigenPair& y) {
        if (op == OperatorKind::laplacian) return x.value < y.value;
        return std::abs(x.value) > std::abs(y.value);
    });
    if (op == OperatorKind::walk_matrix) {
        // Regroup |value| ties (tolerance 1e-9) and put positives first.
        std::size_t start = 0;
        while (start < rest.size()) {
            std::size_t stop = start + 1;
            while (stop < rest.size() && std::abs(rest[stop - 1].value) - std::abs(rest[stop].value) <= detail::kEigGroupTol) ++stop;
            std::stable_sort(rest.begin() + start, rest.begin() + stop, [](const detail::EigenPair& x, const detail::EigenPair& y) {
                const bool xp = x.value >= 0.0, yp = y.value >= 0.0;
                if (xp != yp) return xp;
                return x.value < y.value;
            });
            start = stop;
        }
    }

    SpectralBasis basis;
    basis.op = op;
    basis.ordering = policy;
    basis.n = n;
    basis.eigenvalues.reserve(n);
    basis.eigenvectors.reserve(n);
    basis.eigenvalues.push_back(trivial_first.front().value);
    basis.eigenvectors.push_back(std::move(trivial_first.front().vector));
    for (auto& pair : rest) {
        basis.eigenvalues.push_back(pair.value);
        basis.eigenvectors.push_back(std::move(pair.vector));
    }

    if (policy.tag == OrderingPolicy::Tag::custom) {
        std::vector<int> tail = policy.tail;
        std::vector<int> sorted = tail;
        std::sort(sorted.begin(), sorted.end());
        if (static_cast<int>(sorted.size()) != n - 1 || sorted.front() != 2 || sorted.back() != n ||
            std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("custom ordering must be a permutation of positions 2.." + std::to_string(n));
        std::vector<double> values(n);
        std::vector<std::vector<double>> vectors(n);
        values[0] = basis.eigenvalues[0];
        vectors[0] = std::move(basis.eigenvectors[0]);
        for (int p = 2; p <= n; ++p) {
            values[p - 1] = basis.eigenvalues[tail[p - 2] - 1];
            vectors[p - 1] = std::move(basis.eigenvectors[tail[p - 2] - 1]);
        }
        basis.eigenvalues = std::move(values);
        basis.eigenvectors = std::move(vectors);
    }

    // Invariant checks: orthonormality, per-entry eigen residual, and the
    // full reconstruction residual that is reported on the basis.
    double ortho = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double target = i == j ? 1.0 : 0.0;
            ortho = std::max(ortho, std::abs(dot(basis.eigenvectors[i], basis.eigenvectors[j]) - target));
        }
    double eig_residual = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto av = matvec(a, basis.eigenvectors[i]);
        for (int r = 0; r < n; ++r)
            eig_residual = std::max(eig_residual, std::abs(av[r] - basis.eigenvalues[i] * basis.eigenvectors[i][r]));
    }
    double recon = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += basis.eigenvalues[i] * basis.eigenvectors[i][r] * basis.eigenvectors[i][c];
            recon = std::max(recon, std::abs(s - a(r, c)));
        }
    basis.residual = recon;
    if (ortho > detail::kBasisInvariantTol || eig_residual > detail::kBasisInvariantTol || recon > detail::kBasisInvariantTol)
        throw std::runtime_error("eigenbasis invariants violated (orthonormality " + std::to_string(ortho) +
                                 ", eigen residual " + std::to_string(eig_residual) + ", reconstruction " + std::to_string(recon) + ")");
    return basis;
}

/// Reorders positions 2..n of an existing basis; tail is a permutation of
/// {2,..,n} giving, for each new position, the old position it takes.
inline SpectralBasis apply_custom_order(const SpectralBasis& basis, const std::vector<int>& tail) {
    const int n = basis.n;
    std::vector<int> sorted = tail;
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<int>(sorted.size()) != n - 1 || sorted.front() != 2 || sorted.back() != n ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("custom ordering must be a permutation of positions 2.." + std::to_string(n));
    SpectralBasis out;
    out.op = basis.op;
    out.ordering = OrderingPolicy::custom(tail);
    out.n = n;
    out.residual = basis.residual;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n);
    out.eigenvalues[0] = basis.eigenvalues[0];
    out.eigenvectors[0] = basis.eigenvectors[0];
    for (int p = 2; p <= n; ++p) {
        out.eigenvalues[p - 1] = basis.eigenvalues[tail[p - 2] - 1];
        out.eigenvectors[p - 1] = basis.eigenvectors[tail[p - 2] - 1];
    }
    return out;
}

struct GapEntry {
    int ell = 0;
    double decay_base = 0.0;
    bool tied = false;  // |lambda_ell| equals |lambda_{ell+1}|: no gain over ell-1
};

/// Guaranteed decay base |lambda_{ell+1}| for each ell = 1..n-1 under the
/// basis ordering.
inline std::vector<GapEntry> spectral_gap_report(const SpectralBasis& basis) {
    std::vector<GapEntry> report;
    report.reserve(basis.n - 1);
    for (int ell = 1; ell <= basis.n - 1; ++ell) {
        GapEntry entry;
        entry.ell = ell;
        entry.decay_base = std::abs(basis.eigenvalues[ell]);
        entry.tied = std::abs(std::abs(basis.eigenvalues[ell - 1]) - std::abs(basis.eigenvalues[ell])) <= detail::kEigGroupTol;
        report.push_back(entry);
    }
    return report;
}

}  // namespace designwalk
