#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "designwalk/design.hpp"
#include "designwalk/linalg.hpp"
#include "designwalk/rng.hpp"
#include "designwalk/spectral.hpp"

namespace designwalk {

/// Vertex function with its coefficients against a fixed basis.
struct GraphFunction {
    std::string name;
    std::vector<double> values;
    std::vector<double> coefficients;  // <phi_i, f> in basis order
};

inline GraphFunction analyze_function(const SpectralBasis& basis, std::vector<double> values, std::string name = "f") {
    if (static_cast<int>(values.size()) != basis.n)
        throw std::invalid_argument("function length " + std::to_string(values.size()) + " != vertex count " + std::to_string(basis.n));
    GraphFunction f;
    f.name = std::move(name);
    f.coefficients.reserve(basis.n);
    for (int i = 0; i < basis.n; ++i) f.coefficients.push_back(dot(basis.eigenvectors[i], values));
    f.values = std::move(values);
    return f;
}

namespace detail {

inline GraphFunction synthesize(const SpectralBasis& basis, const std::vector<double>& coefficients, std::string name) {
    std::vector<double> values(basis.n, 0.0);
    for (int i = 0; i < basis.n; ++i) {
        if (coefficients[i] == 0.0) continue;
        for (int v = 0; v < basis.n; ++v) values[v] += coefficients[i] * basis.eigenvectors[i][v];
    }
    GraphFunction f;
    f.name = std::move(name);
    f.values = std::move(values);
    f.coefficients = coefficients;
    return f;
}

}  // namespace detail

/// Random coefficients on basis positions 1..band, zero elsewhere.
inline GraphFunction make_low_pass(const SpectralBasis& basis, int band, std::uint64_t seed) {
    if (band < 1 || band > basis.n) throw std::invalid_argument("low_pass band must lie in 1..n");
    Rng rng(seed);
    std::vector<double> coefficients(basis.n, 0.0);
    for (int i = 0; i < band; ++i) coefficients[i] = rng.normal();
    return detail::synthesize(basis, coefficients, "low_pass(L=" + std::to_string(band) + ",seed=" + std::to_string(seed) + ")");
}

/// Random coefficients on basis positions band+1..n, zero elsewhere.
inline GraphFunction make_high_pass(const SpectralBasis& basis, int band, std::uint64_t seed) {
    if (band < 0 || band > basis.n - 1) throw std::invalid_argument("high_pass band must lie in 0..n-1");
    Rng rng(seed);
    std::vector<double> coefficients(basis.n, 0.0);
    for (int i = band; i < basis.n; ++i) coefficients[i] = rng.normal();
    return detail::synthesize(basis, coefficients, "high_pass(L=" + std::to_string(band) + ",seed=" + std::to_string(seed) + ")");
}

/// Standard-normal value at every vertex.
inline GraphFunction make_random_function(const SpectralBasis& basis, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> values(basis.n);
    for (double& x : values) x = rng.normal();
    return analyze_function(basis, std::move(values), "random(seed=" + std::to_string(seed) + ")");
}

inline GraphFunction make_indicator(const SpectralBasis& basis, const std::vector<int>& vertices) {
    std::vector<double> values(basis.n, 0.0);
    std::string name = "indicator({";
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const int v = vertices[i];
        if (v < 0 || v >= basis.n) throw std::invalid_argument("indicator vertex " + std::to_string(v) + " out of range");
        values[v] = 1.0;
        name += (i ? "," : "") + std::to_string(v);
    }
    name += "})";
    return analyze_function(basis, std::move(values), std::move(name));
}

/// Quadrature outcome for one function: the weighted sample sum against the
/// true mean, the high-frequency error bound, and how much of the function's
/// energy lies above the annihilated band.
struct SamplingReport {
    std::string function;
    std::vector<int> support;
    std::vector<double> weights;
    double quadrature = 0.0;
    double mean = 0.0;
    double error = 0.0;
    double bound = 0.0;
    double high_freq_energy_fraction = 0.0;
    double identity_gap = 0.0;  // |direct error - coefficient expansion|
};

inline SamplingReport quadrature(const SpectralBasis& basis, const DesignMeasure& m, const GraphFunction& f) {
    if (static_cast<int>(f.values.size()) != basis.n || static_cast<int>(f.coefficients.size()) != basis.n)
        throw std::invalid_argument("function/basis dimension mismatch");
    SamplingReport report;
    report.function = f.name;
    report.support = m.support;
    report.weights = m.weights;

    for (std::size_t i = 0; i < m.support.size(); ++i) report.quadrature += m.weights[i] * f.values[m.support[i]];
    report.mean = std::accumulate(f.values.begin(), f.values.end(), 0.0) / static_cast<double>(basis.n);
    report.error = std::abs(report.mean - report.quadrature);

    const std::vector<double> w = m.dense(basis.n);
    double tail_energy = 0.0;
    double expansion = 0.0;
    for (int i = m.ell; i < basis.n; ++i) {
        tail_energy += f.coefficients[i] * f.coefficients[i];
        expansion += f.coefficients[i] * dot(basis.eigenvectors[i], w);
    }
    report.bound = std::sqrt(tail_energy);
    const double energy = norm_sq(f.values);
    report.high_freq_energy_fraction = energy > 0.0 ? tail_energy / energy : 0.0;
    report.identity_gap = std::abs(report.error - std::abs(expansion));
    return report;
}

/// Design tuned to annihilate a chosen frequency set: the given positions
/// (2-based indices into `basis`) are moved to positions 2..ell of a custom
/// ordering and a design is solved there.
struct TailoredDesign {
    SpectralBasis basis;  // reordered copy
    DesignMeasure measure;
};

inline TailoredDesign tailored_design_for(const SpectralBasis& basis, const std::vector<int>& frequencies,
                                          const SolveOptions& options = {}) {
    if (frequencies.empty()) throw std::invalid_argument("tailored design needs at least one frequency");
    std::vector<int> chosen = frequencies;
    std::sort(chosen.begin(), chosen.end());
    if (std::adjacent_find(chosen.begin(), chosen.end()) != chosen.end())
        throw std::invalid_argument("tailored frequencies must be distinct");
    if (chosen.front() < 2 || chosen.back() > basis.n)
        throw std::invalid_argument("tailored frequencies must lie in 2..n");

    std::vector<int> tail = chosen;
    std::vector<char> taken(basis.n + 1, 0);
    for (int p : chosen) taken[p] = 1;
    for (int p = 2; p <= basis.n; ++p)
        if (!taken[p]) tail.push_back(p);

    TailoredDesign out;
    out.basis = apply_custom_order(basis, tail);
    const int ell = static_cast<int>(chosen.size()) + 1;
    out.measure = solve_design(out.basis, ell, options);

    double residual = 0.0;
    const std::vector<double> w = out.measure.dense(basis.n);
    for (int p : chosen) residual = std::max(residual, std::abs(dot(basis.eigenvectors[p - 1], w)));
    if (residual > options.tol)
        throw std::runtime_error("tailored design misses its band: residual " + std::to_string(residual));
    return out;
}

}  // namespace designwalk
