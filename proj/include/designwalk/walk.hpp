#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "designwalk/design.hpp"
#include "designwalk/graph.hpp"
#include "designwalk/linalg.hpp"
#include "designwalk/spectral.hpp"

namespace designwalk {

/// Trajectory of the walk dynamics: squared 2-distances to uniform at every
/// step, plus the decay base the trace is compared against.
struct WalkTrace {
    std::vector<double> mu0;
    int steps = 0;
    std::vector<double> distances_sq;  // size steps + 1, entry k is d_k
    std::optional<double> fitted_rate;
    double bound_base = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void check_probability(std::span<const double> mu, int n) {
    if (static_cast<int>(mu.size()) != n)
        throw std::invalid_argument("probability vector length " + std::to_string(mu.size()) + " != vertex count " + std::to_string(n));
    double sum = 0.0;
    for (double x : mu) {
        if (x < -1e-10) throw std::invalid_argument("probability vector has negative entry " + std::to_string(x));
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("probability vector sums to " + std::to_string(sum) + ", not 1");
}

inline double distance_sq_to_uniform(std::span<const double> mu) {
    const double uniform = 1.0 / static_cast<double>(mu.size());
    double s = 0.0;
    for (double x : mu) {
        const double diff = x - uniform;
        s += diff * diff;
    }
    return s;
}

}  // namespace detail

inline WalkTrace iterate_walk(const Graph& g, std::vector<double> mu0, int steps) {
    if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
    detail::check_probability(mu0, g.vertex_count());
    WalkTrace trace;
    trace.steps = steps;
    trace.distances_sq.reserve(steps + 1);
    std::vector<double> mu = mu0;
    trace.mu0 = std::move(mu0);
    trace.distances_sq.push_back(detail::distance_sq_to_uniform(mu));
    for (int k = 0; k < steps; ++k) {
        mu = walk_matrix_apply(g, mu);
        trace.distances_sq.push_back(detail::distance_sq_to_uniform(mu));
    }
    return trace;
}

/// Exact value of the squared distance after k steps, from the spectral
/// identity sum_{j>=2} lambda_j^{2k} <mu0, phi_j>^2. No iteration involved.
inline double spectral_distance(const SpectralBasis& basis, std::span<const double> mu0, int k) {
    if (basis.op != OperatorKind::walk_matrix)
        throw std::invalid_argument("spectral_distance requires a walk-matrix basis, not laplacian");
    detail::check_probability(mu0, basis.n);
    double total = 0.0;
    for (int j = 1; j < basis.n; ++j) {
        const double coef = dot(basis.eigenvectors[j], mu0);
        total += std::pow(basis.eigenvalues[j] * basis.eigenvalues[j], k) * coef * coef;
    }
    return total;
}

/// All of d_0..d_K by the spectral identity, sharing the coefficient pass.
inline std::vector<double> spectral_distance_curve(const SpectralBasis& basis, std::span<const double> mu0, int steps) {
    if (basis.op != OperatorKind::walk_matrix)
        throw std::invalid_argument("spectral_distance requires a walk-matrix basis, not laplacian");
    detail::check_probability(mu0, basis.n);
    std::vector<double> coef_sq(basis.n, 0.0);
    for (int j = 1; j < basis.n; ++j) {
        const double coef = dot(basis.eigenvectors[j], mu0);
        coef_sq[j] = coef * coef;
    }
    std::vector<double> curve(steps + 1, 0.0);
    std::vector<double> factor(basis.n, 1.0);
    for (int k = 0; k <= steps; ++k) {
        double total = 0.0;
        for (int j = 1; j < basis.n; ++j) total += factor[j] * coef_sq[j];
        curve[k] = total;
        for (int j = 1; j < basis.n; ++j) factor[j] *= basis.eigenvalues[j] * basis.eigenvalues[j];
    }
    return curve;
}

/// Empirical per-step decay base: exp of the least-squares slope of
/// (1/2) log d_k over the points above the 1e-24 floor. Absent when fewer
/// than three points qualify.
inline std::optional<double> rate_fit(const WalkTrace& trace) {
    if (trace.steps < 4) throw std::invalid_argument("rate_fit needs a trace with at least 4 steps");
    std::vector<double> xs, ys;
    for (int k = 0; k < static_cast<int>(trace.distances_sq.size()); ++k) {
        const double d = trace.distances_sq[k];
        if (d > 1e-24) {
            xs.push_back(static_cast<double>(k));
            ys.push_back(0.5 * std::log(d));
        }
    }
    if (xs.size() < 3) return std::nullopt;
    return std::exp(least_squares_slope(xs, ys));
}

/// Bound check of a walk trace against base^{2k} and l2 * base^{2k}, where
/// base = |lambda_{ell+1}| and l2 = ||mu0||_2^2, evaluated with both the
/// iterated walk and the spectral identity.
struct WalkBoundReport {
    int ell = 1;
    double bound_base = 0.0;
    double l2_norm_sq = 0.0;
    int steps = 0;
    double max_bound_violation = 0.0;      // max over k, both evaluators, of d_k - base^{2k}
    double max_sharp_violation = 0.0;      // same against l2 * base^{2k}
    double max_evaluator_gap = 0.0;        // max_k |iterated - spectral|
    bool bound_ok = false;
    bool sharpened_ok = false;
    bool evaluators_agree = false;
    bool passed = false;
};

inline WalkBoundReport verify_walk_bound(const Graph& g, const SpectralBasis& basis, std::span<const double> mu0, int ell,
                                         int steps, double tol = kDefaultVerifyTol) {
    if (basis.op != OperatorKind::walk_matrix)
        throw std::invalid_argument("walk bounds require a walk-matrix basis");
    if (ell < 1 || ell > basis.n - 1) throw std::invalid_argument("ell out of range");
    WalkBoundReport report;
    report.ell = ell;
    report.bound_base = std::abs(basis.eigenvalues[ell]);
    report.l2_norm_sq = norm_sq(mu0);
    report.steps = steps;

    const WalkTrace trace = iterate_walk(g, std::vector<double>(mu0.begin(), mu0.end()), steps);
    const std::vector<double> exact = spectral_distance_curve(basis, mu0, steps);

    const double base_sq = report.bound_base * report.bound_base;
    double envelope = 1.0;
    for (int k = 0; k <= steps; ++k) {
        const double d_iter = trace.distances_sq[k];
        const double d_spec = exact[k];
        report.max_evaluator_gap = std::max(report.max_evaluator_gap, std::abs(d_iter - d_spec));
        for (const double d : {d_iter, d_spec}) {
            report.max_bound_violation = std::max(report.max_bound_violation, d - envelope);
            report.max_sharp_violation = std::max(report.max_sharp_violation, d - report.l2_norm_sq * envelope);
        }
        envelope *= base_sq;
    }
    report.bound_ok = report.max_bound_violation <= tol;
    report.sharpened_ok = report.max_sharp_violation <= tol;
    report.evaluators_agree = report.max_evaluator_gap <= tol;
    report.passed = report.bound_ok && report.sharpened_ok && report.evaluators_agree;
    return report;
}

/// Same check with a design measure as the initial distribution.
inline WalkBoundReport verify_walk_bound(const Graph& g, const SpectralBasis& basis, const DesignMeasure& m, int steps,
                                         double tol = kDefaultVerifyTol) {
    const std::vector<double> mu0 = m.dense(basis.n);
    return verify_walk_bound(g, basis, mu0, m.ell, steps, tol);
}

}  // namespace designwalk
