#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "designwalk/design.hpp"
#include "designwalk/sampling.hpp"
#include "designwalk/spectral.hpp"
#include "designwalk/walk.hpp"

namespace designwalk {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

namespace detail {

inline std::string json_array(std::span<const double> values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    out += "]";
    return out;
}

inline std::string json_array(std::span<const int> values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    out += "]";
    return out;
}

}  // namespace detail

inline std::string to_json(const SpectralBasis& basis) {
    std::string out = "{\n";
    out += "  \"operator\": \"" + to_string(basis.op) + "\",\n";
    out += "  \"ordering\": \"" + to_string(basis.ordering.tag) + "\",\n";
    if (basis.ordering.tag == OrderingPolicy::Tag::custom)
        out += "  \"ordering_tail\": " + detail::json_array(basis.ordering.tail) + ",\n";
    out += "  \"eigenvalues\": " + detail::json_array(basis.eigenvalues) + ",\n";
    out += "  \"eigenvectors\": [\n";
    for (int i = 0; i < basis.n; ++i)
        out += "    " + detail::json_array(basis.eigenvectors[i]) + (i + 1 < basis.n ? ",\n" : "\n");
    out += "  ],\n";
    out += "  \"residual\": " + format_double(basis.residual) + "\n";
    out += "}\n";
    return out;
}

inline std::string to_json(const DesignMeasure& m) {
    std::string out = "{\n";
    out += "  \"ell\": " + std::to_string(m.ell) + ",\n";
    out += "  \"support\": " + detail::json_array(m.support) + ",\n";
    out += "  \"weights\": " + detail::json_array(m.weights) + ",\n";
    out += "  \"orthogonality_residual\": " + format_double(m.orthogonality_residual) + ",\n";
    out += "  \"l2_norm_sq\": " + format_double(m.l2_norm_sq) + ",\n";
    out += "  \"effective_depth\": " + std::to_string(m.effective_depth) + "\n";
    out += "}\n";
    return out;
}

inline std::string to_json(const DesignVerification& v) {
    std::string out = "{\n";
    out += "  \"support_size\": " + std::to_string(v.support_size) + ",\n";
    out += "  \"support_ok\": " + std::string(v.support_ok ? "true" : "false") + ",\n";
    out += "  \"weights_positive\": " + std::string(v.weights_positive ? "true" : "false") + ",\n";
    out += "  \"weight_sum\": " + format_double(v.weight_sum) + ",\n";
    out += "  \"sum_ok\": " + std::string(v.sum_ok ? "true" : "false") + ",\n";
    out += "  \"orthogonality_residual\": " + format_double(v.orthogonality_residual) + ",\n";
    out += "  \"residual_ok\": " + std::string(v.residual_ok ? "true" : "false") + ",\n";
    out += "  \"l2_norm_sq\": " + format_double(v.l2_norm_sq) + ",\n";
    out += "  \"inner_products\": " + detail::json_array(v.inner_products) + ",\n";
    out += "  \"effective_depth\": " + std::to_string(v.effective_depth) + ",\n";
    out += "  \"passed\": " + std::string(v.passed ? "true" : "false") + "\n";
    out += "}\n";
    return out;
}

inline std::string to_json(const WalkBoundReport& r) {
    std::string out = "{\n";
    out += "  \"ell\": " + std::to_string(r.ell) + ",\n";
    out += "  \"bound_base\": " + format_double(r.bound_base) + ",\n";
    out += "  \"l2_norm_sq\": " + format_double(r.l2_norm_sq) + ",\n";
    out += "  \"steps\": " + std::to_string(r.steps) + ",\n";
    out += "  \"max_bound_violation\": " + format_double(r.max_bound_violation) + ",\n";
    out += "  \"max_sharp_violation\": " + format_double(r.max_sharp_violation) + ",\n";
    out += "  \"max_evaluator_gap\": " + format_double(r.max_evaluator_gap) + ",\n";
    out += "  \"bound_ok\": " + std::string(r.bound_ok ? "true" : "false") + ",\n";
    out += "  \"sharpened_ok\": " + std::string(r.sharpened_ok ? "true" : "false") + ",\n";
    out += "  \"evaluators_agree\": " + std::string(r.evaluators_agree ? "true" : "false") + ",\n";
    out += "  \"passed\": " + std::string(r.passed ? "true" : "false") + "\n";
    out += "}\n";
    return out;
}

inline std::string to_json(const SamplingReport& r) {
    std::string out = "{\n";
    out += "  \"function\": \"" + r.function + "\",\n";
    out += "  \"support\": " + detail::json_array(r.support) + ",\n";
    out += "  \"weights\": " + detail::json_array(r.weights) + ",\n";
    out += "  \"quadrature\": " + format_double(r.quadrature) + ",\n";
    out += "  \"mean\": " + format_double(r.mean) + ",\n";
    out += "  \"error\": " + format_double(r.error) + ",\n";
    out += "  \"bound\": " + format_double(r.bound) + ",\n";
    out += "  \"high_freq_energy_fraction\": " + format_double(r.high_freq_energy_fraction) + ",\n";
    out += "  \"identity_gap\": " + format_double(r.identity_gap) + "\n";
    out += "}\n";
    return out;
}

inline std::string to_json(std::span<const SamplingReport> reports) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::string one = to_json(reports[i]);
        if (!one.empty() && one.back() == '\n') one.pop_back();
        out += one + (i + 1 < reports.size() ? ",\n" : "\n");
    }
    out += "]\n";
    return out;
}

/// CSV of a walk trace: the squared distance per step against the plain and
/// sharpened envelopes, with the plain distance in the last column.
inline std::string walk_trace_csv(const WalkTrace& trace, double bound_base, double l2_norm_sq) {
    std::string out = "k,distance_sq,bound,sharpened_bound,distance\n";
    const double base_sq = bound_base * bound_base;
    double envelope = 1.0;
    for (int k = 0; k < static_cast<int>(trace.distances_sq.size()); ++k) {
        const double d = trace.distances_sq[k];
        out += std::to_string(k) + "," + format_double(d) + "," + format_double(envelope) + "," +
               format_double(l2_norm_sq * envelope) + "," + format_double(std::sqrt(d)) + "\n";
        envelope *= base_sq;
    }
    return out;
}

inline std::string gap_report_csv(std::span<const GapEntry> report) {
    std::string out = "ell,decay_base,tied\n";
    for (const GapEntry& entry : report)
        out += std::to_string(entry.ell) + "," + format_double(entry.decay_base) + "," + (entry.tied ? "yes" : "no") + "\n";
    return out;
}

inline std::string sampling_batch_csv(std::span<const SamplingReport> reports) {
    std::string out = "function,error,bound,high_freq_energy_fraction\n";
    for (const SamplingReport& r : reports)
        out += r.function + "," + format_double(r.error) + "," + format_double(r.bound) + "," +
               format_double(r.high_freq_energy_fraction) + "\n";
    return out;
}

/// Write-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace designwalk
