// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria hold. Every tolerance is pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "designwalk/designwalk.hpp"

namespace fs = std::filesystem;
using namespace designwalk;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int number, const char* title, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number, title, detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
    return buffer;
}

bool same_spectrum(const std::vector<double>& got, std::vector<double> expected, double tol, double* worst) {
    std::vector<double> sorted = got;
    std::sort(sorted.begin(), sorted.end());
    std::sort(expected.begin(), expected.end());
    if (sorted.size() != expected.size()) return false;
    bool ok = true;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double gap = std::abs(sorted[i] - expected[i]);
        *worst = std::max(*worst, gap);
        ok = ok && gap <= tol;
    }
    return ok;
}

double orthonormality_residual(const SpectralBasis& basis) {
    double worst = 0.0;
    for (int i = 0; i < basis.n; ++i)
        for (int j = i; j < basis.n; ++j)
            worst = std::max(worst, std::abs(dot(basis.eigenvectors[i], basis.eigenvectors[j]) - (i == j ? 1.0 : 0.0)));
    return worst;
}

// --- criterion 1 -----------------------------------------------------------

void criterion1() {
    const auto start = Clock::now();
    bool ok = true;
    double worst_value = 0.0, worst_invariant = 0.0, worst_seconds = 0.0;

    const auto check_graph = [&](const Graph& g, const std::vector<double>& expected) {
        const auto t0 = Clock::now();
        const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
        worst_seconds = std::max(worst_seconds, seconds_since(t0));
        ok = same_spectrum(basis.eigenvalues, expected, 1e-9, &worst_value) && ok;
        worst_invariant = std::max({worst_invariant, basis.residual, orthonormality_residual(basis)});
    };

    for (int n : {4, 5, 8, 12}) {
        std::vector<double> expected(n);
        for (int j = 0; j < n; ++j) expected[j] = std::cos(2.0 * M_PI * j / n);
        check_graph(make_cycle(n), expected);
    }
    for (int m : {2, 3, 5}) {
        std::vector<double> expected(2 * m, 0.0);
        expected[0] = 1.0;
        expected[1] = -1.0;
        check_graph(make_complete_bipartite(m), expected);
    }
    {
        std::vector<double> expected = {1.0};
        for (int i = 0; i < 4; ++i) expected.push_back(-2.0 / 3.0);
        for (int i = 0; i < 5; ++i) expected.push_back(1.0 / 3.0);
        check_graph(make_petersen(), expected);
        // and the ordering positions are pinned
        const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
        ok = ok && basis.eigenvalues[0] == 1.0;
        for (int i = 1; i <= 4; ++i) ok = ok && std::abs(basis.eigenvalues[i] + 2.0 / 3.0) <= 1e-9;
        for (int i = 5; i <= 9; ++i) ok = ok && std::abs(basis.eigenvalues[i] - 1.0 / 3.0) <= 1e-9;
    }

    ok = ok && worst_invariant <= 1e-10 && worst_seconds < 1.0;
    report(1, "closed-form spectra", ok,
           fmt("max eigenvalue gap %.2e, max residual %.2e, slowest graph %.3fs", worst_value, worst_invariant, worst_seconds) +
               fmt(", total %.2fs", seconds_since(start)));
}

// --- criteria 2 and 3 ------------------------------------------------------

struct SweepOutcome {
    bool existence_ok = true;
    bool bounds_ok = true;
    double worst_residual = 0.0;
    double worst_sum_gap = 0.0;
    double worst_violation = 0.0;
    double worst_gap = 0.0;
    int designs = 0;
    std::string first_failure;
};

SweepOutcome existence_and_bounds(const Graph& g, const SpectralBasis& basis, int walk_steps) {
    SweepOutcome outcome;
    const int n = basis.n;
    for (int ell = 1; ell <= n - 1; ++ell) {
        DesignMeasure m;
        try {
            m = solve_design(basis, ell);
        } catch (const std::exception& e) {
            outcome.existence_ok = false;
            if (outcome.first_failure.empty())
                outcome.first_failure = "ell=" + std::to_string(ell) + ": " + e.what();
            continue;
        }
        ++outcome.designs;

        bool valid = static_cast<int>(m.support.size()) <= ell && !m.weights.empty();
        for (double w : m.weights) valid = valid && w > 0.0;
        double sum = 0.0;
        for (double w : m.weights) sum += w;
        outcome.worst_sum_gap = std::max(outcome.worst_sum_gap, std::abs(sum - 1.0));
        valid = valid && std::abs(sum - 1.0) <= 1e-12;
        const std::vector<double> dense = m.dense(n);
        double residual = 0.0;
        for (int j = 2; j <= ell; ++j) residual = std::max(residual, std::abs(dot(basis.eigenvectors[j - 1], dense)));
        outcome.worst_residual = std::max(outcome.worst_residual, residual);
        valid = valid && residual <= 1e-9;
        if (!valid) {
            outcome.existence_ok = false;
            if (outcome.first_failure.empty()) outcome.first_failure = "ell=" + std::to_string(ell) + ": invalid measure";
        }

        if (walk_steps > 0) {
            const WalkBoundReport report = verify_walk_bound(g, basis, dense, ell, walk_steps, 1e-9);
            outcome.worst_violation = std::max(outcome.worst_violation, report.max_bound_violation);
            outcome.worst_gap = std::max(outcome.worst_gap, report.max_evaluator_gap);
            if (!(report.bound_ok && report.evaluators_agree)) {
                outcome.bounds_ok = false;
                if (outcome.first_failure.empty()) outcome.first_failure = "ell=" + std::to_string(ell) + ": bound violated";
            }
        }
    }
    return outcome;
}

void criteria2and3() {
    const auto start = Clock::now();
    SweepOutcome total;
    bool infeasible_fired = false;
    int graphs = 0;

    const int degrees[3] = {3, 4, 6};
    const int sizes[10] = {20, 24, 28, 32, 36, 40, 44, 48, 54, 60};
    for (int i = 0; i < 30; ++i) {
        const int n = sizes[i % 10];
        const int d = degrees[i % 3];
        const Graph g = make_random_regular(n, d, 1000 + i);
        const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
        ++graphs;

        const SweepOutcome one = existence_and_bounds(g, basis, 50);
        total.existence_ok = total.existence_ok && one.existence_ok;
        total.bounds_ok = total.bounds_ok && one.bounds_ok;
        total.worst_residual = std::max(total.worst_residual, one.worst_residual);
        total.worst_sum_gap = std::max(total.worst_sum_gap, one.worst_sum_gap);
        total.worst_violation = std::max(total.worst_violation, one.worst_violation);
        total.worst_gap = std::max(total.worst_gap, one.worst_gap);
        total.designs += one.designs;
        if (total.first_failure.empty() && !one.first_failure.empty())
            total.first_failure = "graph " + std::to_string(i) + " " + one.first_failure;

        // the LP route must never report infeasibility either
        for (int ell : {2, n / 4, n / 2, n - 1}) {
            try {
                SolveOptions lp;
                lp.method = DesignMethod::lp_vertex;
                solve_design(basis, ell, lp);
            } catch (const feasibility_breakdown&) {
                infeasible_fired = true;
            } catch (const std::exception& e) {
                total.existence_ok = false;
                if (total.first_failure.empty())
                    total.first_failure = "lp graph " + std::to_string(i) + " ell=" + std::to_string(ell) + ": " + e.what();
            }
        }
    }

    const double elapsed = seconds_since(start);
    const bool c2 = total.existence_ok && !infeasible_fired && elapsed < 60.0;
    report(2, "design existence sweep", c2,
           std::to_string(graphs) + " graphs, " + std::to_string(total.designs) + " designs, " +
               fmt("max residual %.2e, max sum gap %.2e, %.1fs", total.worst_residual, total.worst_sum_gap, elapsed) +
               (infeasible_fired ? ", INFEASIBLE FIRED" : "") + (total.first_failure.empty() ? "" : ", " + total.first_failure));
    report(3, "walk decay bound at K=50", total.bounds_ok,
           fmt("max violation %.2e, max evaluator gap %.2e", total.worst_violation, total.worst_gap));
}

// --- criterion 4 -----------------------------------------------------------

void criterion4() {
    bool ok = true;
    std::string detail;

    {
        const Graph g = make_cycle(4);
        const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
        const DesignMeasure m = solve_design(basis, 2);
        const WalkTrace trace = iterate_walk(g, m.dense(4), 1);
        ok = ok && trace.distances_sq[1] <= 1e-12;
        detail += fmt("C4 design d1=%.2e", trace.distances_sq[1]);
    }
    {
        const Graph g = make_complete_bipartite(3);
        const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
        const DesignMeasure m = solve_design(basis, 2);
        const WalkTrace trace = iterate_walk(g, m.dense(6), 1);
        ok = ok && trace.distances_sq[1] <= 1e-12;
        detail += fmt(", K33 design d1=%.2e", trace.distances_sq[1]);
    }
    {
        const Graph g = make_cycle(4);
        std::vector<double> dirac(4, 0.0);
        dirac[0] = 1.0;
        const WalkTrace trace = iterate_walk(g, dirac, 50);
        double worst = 0.0;
        for (int k = 1; k <= 50; ++k) worst = std::max(worst, std::abs(trace.distances_sq[k] - 0.25));
        ok = ok && worst <= 1e-12;
        detail += fmt(", C4 dirac max |d_k - 1/4| = %.2e", worst);
    }
    report(4, "exact small cases", ok, detail);
}

// --- criterion 5 -----------------------------------------------------------

void criterion5() {
    const Graph g = make_petersen();
    const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
    bool ok = true;
    std::string detail;

    {
        const DesignMeasure m = solve_design(basis, 5);
        const std::vector<double> w = m.dense(10);
        double tail = 0.0;
        for (int j = 5; j < 10; ++j) {
            const double c = dot(basis.eigenvectors[j], w);
            tail += c * c;
        }
        ok = ok && tail > 1e-12;  // coefficients on the 1/3 eigenspace are nonzero
        const WalkTrace trace = iterate_walk(g, w, 40);
        const auto fitted = rate_fit(trace);
        ok = ok && fitted.has_value() && std::abs(*fitted - 1.0 / 3.0) <= 1e-3;
        detail += fmt("ell=5 fit %.6f (target 1/3, K=40)", fitted.value_or(-1.0));
    }
    {
        int vertex = -1;
        for (int v = 0; v < 10; ++v)
            if (std::abs(basis.eigenvectors[1][v]) > 1e-12) {
                vertex = v;
                break;
            }
        std::vector<double> dirac(10, 0.0);
        dirac[vertex] = 1.0;
        const WalkTrace trace = iterate_walk(g, dirac, 50);
        const auto fitted = rate_fit(trace);
        ok = ok && fitted.has_value() && std::abs(*fitted - 2.0 / 3.0) <= 1e-3;
        detail += fmt(", dirac fit %.6f (target 2/3, K=50)", fitted.value_or(-1.0));
    }
    report(5, "empirical rate fits", ok, detail);
}

// --- criteria 6 and 7 ------------------------------------------------------

struct QuadratureOutcome {
    bool ok = true;
    double worst_excess = -1e300;    // error - bound, should stay <= 1e-9
    double worst_band_error = 0.0;   // band-limited functions
    double worst_identity = 0.0;
    int trials = 0;
};

void quadrature_block(const SpectralBasis& basis, QuadratureOutcome* outcome) {
    const int n = basis.n;
    std::set<int> ells = {2, (n + 3) / 4, (n + 1) / 2};
    for (int ell : ells) {
        if (ell < 1 || ell > n - 1) continue;
        const DesignMeasure m = solve_design(basis, ell);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const SamplingReport r = quadrature(basis, m, make_random_function(basis, seed));
            outcome->worst_excess = std::max(outcome->worst_excess, r.error - r.bound);
            outcome->worst_identity = std::max(outcome->worst_identity, r.identity_gap);
            outcome->ok = outcome->ok && r.error <= r.bound + 1e-9 && r.identity_gap <= 1e-10;
            ++outcome->trials;
        }
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const SamplingReport r = quadrature(basis, m, make_low_pass(basis, ell, 900 + seed));
            outcome->worst_band_error = std::max(outcome->worst_band_error, r.error);
            outcome->ok = outcome->ok && r.error <= 1e-9;
            ++outcome->trials;
        }
    }
}

void criterion6() {
    const auto start = Clock::now();
    QuadratureOutcome outcome;
    const std::vector<Graph> corpus = {make_cycle(4),        make_cycle(12),           make_complete_bipartite(3),
                                       make_petersen(),      make_hypercube(3),        make_circulant(12, {1, 3}),
                                       make_random_regular(20, 3, 1)};
    for (const Graph& g : corpus) {
        const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
        quadrature_block(basis, &outcome);
    }
    const double elapsed = seconds_since(start);
    report(6, "quadrature error bound", outcome.ok && elapsed < 60.0,
           std::to_string(outcome.trials) + fmt(" trials, max error-bound %.2e, ", outcome.worst_excess) +
               fmt("max band error %.2e, max identity gap %.2e, %.1fs", outcome.worst_band_error, outcome.worst_identity, elapsed));
}

Graph random_connected_irregular(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::set<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) edges.emplace(static_cast<int>(rng.below(v)), v);
    int extra = n / 2 + 2;
    while (extra > 0) {
        int a = static_cast<int>(rng.below(n));
        int b = static_cast<int>(rng.below(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (edges.count({a, b})) continue;
        edges.emplace(a, b);
        --extra;
    }
    return Graph::from_edges(n, {edges.begin(), edges.end()}, false);
}

void criterion7() {
    const auto start = Clock::now();
    bool ok = true;
    SweepOutcome designs_total;
    QuadratureOutcome quadrature_total;
    const int sizes[5] = {10, 14, 20, 28, 40};
    for (int i = 0; i < 5; ++i) {
        const Graph g = random_connected_irregular(sizes[i], 500 + i);
        ok = ok && !g.is_regular();
        const SpectralBasis basis = decompose(g, OperatorKind::laplacian);

        const SweepOutcome one = existence_and_bounds(g, basis, 0);  // walk bound not defined for laplacian
        designs_total.existence_ok = designs_total.existence_ok && one.existence_ok;
        designs_total.worst_residual = std::max(designs_total.worst_residual, one.worst_residual);
        designs_total.worst_sum_gap = std::max(designs_total.worst_sum_gap, one.worst_sum_gap);
        designs_total.designs += one.designs;

        quadrature_block(basis, &quadrature_total);
    }
    ok = ok && designs_total.existence_ok && quadrature_total.ok;
    report(7, "laplacian extension on non-regular graphs", ok,
           std::to_string(designs_total.designs) + " designs, " +
               fmt("max residual %.2e, ", designs_total.worst_residual) + std::to_string(quadrature_total.trials) +
               fmt(" quadrature trials, max error-bound %.2e, max identity gap %.2e", quadrature_total.worst_excess,
                   quadrature_total.worst_identity) +
               fmt(", %.1fs", seconds_since(start)));
}

// --- criterion 8 -----------------------------------------------------------

void criterion8() {
    const fs::path dir = fs::temp_directory_path() / "designwalk_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path a = dir / "run_a";
    const fs::path b = dir / "run_b";
    const std::string base = std::string(DESIGNWALK_CLI_PATH) + " sweep --family petersen --seed 7 --out ";
    const int rc_a = std::system((base + a.string() + " > /dev/null 2>&1").c_str());
    const int rc_b = std::system((base + b.string() + " > /dev/null 2>&1").c_str());
    bool ok = rc_a == 0 && rc_b == 0;
    std::string detail;
    if (ok) {
        const std::string bytes_a = read_file(a / "sweep.csv");
        const std::string bytes_b = read_file(b / "sweep.csv");
        ok = !bytes_a.empty() && bytes_a == bytes_b;
        detail = std::to_string(bytes_a.size()) + " bytes, " + (ok ? "byte-identical" : "MISMATCH");
    } else {
        detail = "sweep exited with " + std::to_string(rc_a) + "/" + std::to_string(rc_b);
    }
    report(8, "sweep determinism", ok, detail);
}

}  // namespace

int main() {
    criterion1();
    criteria2and3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
