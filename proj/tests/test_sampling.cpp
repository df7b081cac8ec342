#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "designwalk/design.hpp"
#include "designwalk/graph.hpp"
#include "designwalk/sampling.hpp"
#include "designwalk/spectral.hpp"

using namespace designwalk;

TEST_CASE("constant functions are integrated exactly", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const DesignMeasure m = solve_design(basis, 5);
    const GraphFunction f = analyze_function(basis, std::vector<double>(10, 3.25), "const");
    const SamplingReport report = quadrature(basis, m, f);
    CHECK(report.mean == Approx(3.25).margin(1e-12));
    CHECK(report.error <= 1e-12);
    CHECK(report.bound <= 1e-9);
}

TEST_CASE("a pure high eigenvector has mean zero and bound one", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const int ell = 5;
    const DesignMeasure m = solve_design(basis, ell);
    const GraphFunction f = analyze_function(basis, basis.eigenvectors[ell], "phi_next");
    const SamplingReport report = quadrature(basis, m, f);
    CHECK(report.mean == Approx(0.0).margin(1e-12));
    CHECK(report.bound == Approx(1.0).margin(1e-10));
    const double coupling = std::abs(dot(basis.eigenvectors[ell], m.dense(10)));
    CHECK(report.error == Approx(coupling).margin(1e-12));
    CHECK(report.error <= 1.0 + 1e-12);
}

TEST_CASE("band-limited functions are integrated to machine precision", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    for (int ell : {2, 5, 8}) {
        const DesignMeasure m = solve_design(basis, ell);
        const GraphFunction f = make_low_pass(basis, ell, 41);
        const SamplingReport report = quadrature(basis, m, f);
        CHECK(report.error <= 1e-9);
        CHECK(report.bound <= 1e-9);
    }
}

TEST_CASE("functions inside the annihilated band alone integrate exactly", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const int ell = 5;
    const DesignMeasure m = solve_design(basis, ell);
    Rng rng(53);
    std::vector<double> values(10, 0.0);
    for (int i = 1; i < ell; ++i) {
        const double c = rng.normal();
        for (int v = 0; v < 10; ++v) values[v] += c * basis.eigenvectors[i][v];
    }
    const SamplingReport report = quadrature(basis, m, analyze_function(basis, values, "band_2_to_ell"));
    CHECK(report.mean == Approx(0.0).margin(1e-12));
    CHECK(report.error <= 1e-9);
}

TEST_CASE("parseval holds for analyzed functions", "[sampling][property]") {
    const SpectralBasis basis = decompose(make_random_regular(18, 4, 12), OperatorKind::walk_matrix);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GraphFunction f = make_random_function(basis, seed);
        double coef_energy = 0.0;
        for (double c : f.coefficients) coef_energy += c * c;
        CHECK(coef_energy == Approx(norm_sq(f.values)).margin(1e-9));
    }
}

TEST_CASE("the sampling bound holds over random functions", "[sampling][property]") {
    for (const Graph& g : {make_petersen(), make_cycle(12)}) {
        const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix);
        for (int ell : {2, 4}) {
            const DesignMeasure m = solve_design(basis, ell);
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const SamplingReport report = quadrature(basis, m, make_random_function(basis, seed));
                CHECK(report.error <= report.bound + 1e-9);
                CHECK(report.identity_gap <= 1e-10);
            }
        }
    }
}

TEST_CASE("cauchy-schwarz chain: error bounded via the measure norm", "[sampling][property]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const DesignMeasure m = solve_design(basis, 5);
    CHECK(m.l2_norm_sq <= 1.0 + 1e-12);
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const SamplingReport report = quadrature(basis, m, make_random_function(basis, seed));
        CHECK(report.error <= report.bound * std::sqrt(m.l2_norm_sq) + 1e-9);
    }
}

TEST_CASE("test function generators are deterministic and typed", "[sampling]") {
    const SpectralBasis basis = decompose(make_cycle(8), OperatorKind::walk_matrix);

    const GraphFunction a = make_random_function(basis, 5);
    const GraphFunction b = make_random_function(basis, 5);
    CHECK(a.values == b.values);
    CHECK(a.name == "random(seed=5)");

    const GraphFunction constant = make_low_pass(basis, 1, 3);
    for (double x : constant.values) CHECK(x == Approx(constant.values[0]).margin(1e-12));

    const GraphFunction high = make_high_pass(basis, 3, 3);
    for (int i = 0; i < 3; ++i) CHECK(high.coefficients[i] == 0.0);

    const GraphFunction ind = make_indicator(basis, {2});
    for (int i = 0; i < 8; ++i)
        CHECK(ind.coefficients[i] == Approx(basis.eigenvectors[i][2]).margin(1e-12));

    CHECK_THROWS(make_low_pass(basis, 0, 1));
    CHECK_THROWS(make_low_pass(basis, 9, 1));
    CHECK_THROWS(make_high_pass(basis, 8, 1));
    CHECK_THROWS(make_indicator(basis, {8}));
}

TEST_CASE("high-pass error equals its coefficient expansion", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const int ell = 5;
    const DesignMeasure m = solve_design(basis, ell);
    const GraphFunction f = make_high_pass(basis, ell, 17);
    const SamplingReport report = quadrature(basis, m, f);
    CHECK(report.mean == Approx(0.0).margin(1e-12));
    double expansion = 0.0;
    const std::vector<double> w = m.dense(10);
    for (int i = ell; i < 10; ++i) expansion += f.coefficients[i] * dot(basis.eigenvectors[i], w);
    CHECK(report.error == Approx(std::abs(expansion)).margin(1e-10));
}

TEST_CASE("tailored design with the identity band matches the default", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const TailoredDesign tailored = tailored_design_for(basis, {2, 3, 4, 5});
    const DesignMeasure standard = solve_design(basis, 5);
    CHECK(tailored.measure.support == standard.support);
    REQUIRE(tailored.measure.weights.size() == standard.weights.size());
    for (std::size_t i = 0; i < standard.weights.size(); ++i)
        CHECK(tailored.measure.weights[i] == Approx(standard.weights[i]).margin(1e-12));
}

TEST_CASE("tailored design annihilates the petersen 1/3 eigenspace", "[sampling]") {
    const SpectralBasis basis = decompose(make_petersen(), OperatorKind::walk_matrix);
    const TailoredDesign tailored = tailored_design_for(basis, {6, 7, 8, 9, 10});
    CHECK(tailored.measure.ell == 6);
    CHECK(tailored.measure.support.size() <= 6);
    const std::vector<double> w = tailored.measure.dense(10);
    for (int position : {6, 7, 8, 9, 10})
        CHECK(std::abs(dot(basis.eigenvectors[position - 1], w)) <= 1e-9);
    // a function living on that band is integrated exactly
    std::vector<double> coefficients(10, 0.0);
    Rng rng(8);
    for (int position : {6, 7, 8, 9, 10}) coefficients[position - 1] = rng.normal();
    std::vector<double> values(10, 0.0);
    for (int i = 0; i < 10; ++i)
        for (int v = 0; v < 10; ++v) values[v] += coefficients[i] * basis.eigenvectors[i][v];
    const GraphFunction f = analyze_function(basis, values, "mid_band");
    double sample_sum = 0.0;
    for (std::size_t i = 0; i < tailored.measure.support.size(); ++i)
        sample_sum += tailored.measure.weights[i] * f.values[tailored.measure.support[i]];
    CHECK(std::abs(sample_sum - 0.0) <= 1e-9);  // mean of a nontrivial eigenvector mix is 0
}

TEST_CASE("tailored design accepts the top frequency alone", "[sampling]") {
    const SpectralBasis basis = decompose(make_cycle(9), OperatorKind::walk_matrix);
    const TailoredDesign tailored = tailored_design_for(basis, {9});
    const std::vector<double> w = tailored.measure.dense(9);
    CHECK(std::abs(dot(basis.eigenvectors[8], w)) <= 1e-9);
    CHECK_THROWS(tailored_design_for(basis, {1}));
    CHECK_THROWS(tailored_design_for(basis, {10}));
    CHECK_THROWS(tailored_design_for(basis, {3, 3}));
}

TEST_CASE("laplacian quadrature covers non-regular graphs", "[sampling]") {
    const Graph g = Graph::from_edge_list("0 1\n1 2\n2 0\n2 3\n3 4\n4 0\n4 5", false);
    REQUIRE_FALSE(g.is_regular());
    const SpectralBasis basis = decompose(g, OperatorKind::laplacian);
    const DesignMeasure m = solve_design(basis, 3);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SamplingReport report = quadrature(basis, m, make_random_function(basis, seed));
        CHECK(report.error <= report.bound + 1e-9);
        CHECK(report.identity_gap <= 1e-10);
    }
    const SamplingReport smooth = quadrature(basis, m, make_low_pass(basis, 3, 9));
    CHECK(smooth.error <= 1e-9);
}
