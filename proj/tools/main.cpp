#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "designwalk/designwalk.hpp"

namespace fs = std::filesystem;
using namespace designwalk;

namespace {

struct CommonOptions {
    std::string graph_path;
    std::string family;
    int n = 0;
    int m = 0;
    int dim = 0;
    int degree = 0;
    std::vector<int> offsets;
    std::string order = "abs";
    std::string op = "walk";
    int ell = 0;
    std::string method = "reduce";
    std::string mu0 = "design";
    int steps = 50;
    std::uint64_t seed = 0;
    int functions = 100;
    std::string out = ".";
};

void add_graph_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--graph", opt.graph_path, "edge-list file to load");
    cmd->add_option("--family", opt.family,
                    "generator: cycle, complete, complete_bipartite, hypercube, petersen, circulant, random_regular");
    cmd->add_option("--n", opt.n, "vertex count (cycle, complete, circulant, random_regular)");
    cmd->add_option("--m", opt.m, "part size (complete_bipartite)");
    cmd->add_option("--dim", opt.dim, "dimension (hypercube)");
    cmd->add_option("--degree", opt.degree, "degree (random_regular)");
    cmd->add_option("--offsets", opt.offsets, "circulant offsets")->delimiter(',');
    cmd->add_option("--seed", opt.seed, "seed for random_regular and sampled functions");
    cmd->add_option("--out", opt.out, "output directory (default: current)");
}

void add_operator_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--operator", opt.op, "walk or laplacian (default walk)");
    cmd->add_option("--order", opt.order, "abs or custom:<perm-file> (default abs)");
}

Graph build_graph(const CommonOptions& opt, bool require_regular) {
    if (!opt.graph_path.empty() && !opt.family.empty())
        throw std::runtime_error("give either --graph or --family, not both");
    if (!opt.graph_path.empty()) return Graph::from_edge_list(read_file(opt.graph_path), require_regular);
    if (opt.family == "cycle") return make_cycle(opt.n);
    if (opt.family == "complete") return make_complete(opt.n);
    if (opt.family == "complete_bipartite") return make_complete_bipartite(opt.m);
    if (opt.family == "hypercube") return make_hypercube(opt.dim);
    if (opt.family == "petersen") return make_petersen();
    if (opt.family == "circulant") return make_circulant(opt.n, opt.offsets);
    if (opt.family == "random_regular") return make_random_regular(opt.n, opt.degree, opt.seed);
    if (opt.family.empty()) throw std::runtime_error("a graph is required: pass --graph <file> or --family <name>");
    throw std::runtime_error("unknown family '" + opt.family + "'");
}

OperatorKind parse_operator(const std::string& s) {
    if (s == "walk" || s == "walk_matrix") return OperatorKind::walk_matrix;
    if (s == "laplacian") return OperatorKind::laplacian;
    throw std::runtime_error("unknown operator '" + s + "' (use walk or laplacian)");
}

OrderingPolicy parse_order(const std::string& s) {
    if (s == "abs" || s == "abs_desc") return OrderingPolicy::abs_desc();
    if (s.rfind("custom:", 0) == 0) {
        const std::string path = s.substr(7);
        std::istringstream in(read_file(path));
        std::vector<int> tail;
        int value = 0;
        while (in >> value) tail.push_back(value);
        return OrderingPolicy::custom(tail);
    }
    throw std::runtime_error("unknown ordering '" + s + "' (use abs or custom:<perm-file>)");
}

DesignMethod parse_method(const std::string& s) {
    if (s == "reduce" || s == "reduce_uniform") return DesignMethod::reduce_uniform;
    if (s == "lp" || s == "lp_vertex") return DesignMethod::lp_vertex;
    throw std::runtime_error("unknown method '" + s + "' (use reduce or lp)");
}

double verification_tolerance() {
    if (const char* env = std::getenv("DESIGNWALK_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(tol > 0.0))
            throw std::runtime_error("DESIGNWALK_TOL must be a positive number, got '" + std::string(env) + "'");
        return tol;
    }
    return kDefaultVerifyTol;
}

fs::path prepare_out_dir(const CommonOptions& opt) {
    const fs::path dir(opt.out);
    fs::create_directories(dir);
    return dir;
}

std::vector<double> parse_mu0_file(const std::string& path, int n) {
    std::vector<double> mu(n, 0.0);
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream fields(line);
        int vertex = 0;
        double weight = 0.0;
        if (!(fields >> vertex)) continue;
        if (!(fields >> weight))
            throw std::runtime_error("mu0 file line " + std::to_string(line_no) + ": expected 'vertex,weight'");
        if (vertex < 0 || vertex >= n)
            throw std::runtime_error("mu0 file line " + std::to_string(line_no) + ": vertex " + std::to_string(vertex) + " out of range");
        mu[vertex] = weight;
    }
    return mu;
}

int run_gen(const CommonOptions& opt) {
    const Graph g = build_graph(opt, false);
    const fs::path dir = prepare_out_dir(opt);
    write_file_atomic(dir / "graph.edges", g.to_edge_list());
    std::printf("wrote %s (n=%d, edges=%d)\n", (dir / "graph.edges").c_str(), g.vertex_count(), g.edge_count());
    return 0;
}

int run_spectrum(const CommonOptions& opt) {
    const OperatorKind op = parse_operator(opt.op);
    const Graph g = build_graph(opt, op == OperatorKind::walk_matrix);
    const SpectralBasis basis = decompose(g, op, parse_order(opt.order));
    const fs::path dir = prepare_out_dir(opt);
    write_file_atomic(dir / "spectrum.json", to_json(basis));
    write_file_atomic(dir / "gaps.csv", gap_report_csv(spectral_gap_report(basis)));
    std::printf("wrote %s and %s (n=%d, residual=%s)\n", (dir / "spectrum.json").c_str(), (dir / "gaps.csv").c_str(),
                basis.n, format_double(basis.residual).c_str());
    return 0;
}

int run_design(const CommonOptions& opt) {
    const double tol = verification_tolerance();
    const OperatorKind op = parse_operator(opt.op);
    const Graph g = build_graph(opt, op == OperatorKind::walk_matrix);
    const SpectralBasis basis = decompose(g, op, parse_order(opt.order));
    if (opt.ell < 1) throw std::runtime_error("design requires --ell >= 1");
    SolveOptions options;
    options.method = parse_method(opt.method);
    options.tol = tol;
    const DesignMeasure m = solve_design(basis, opt.ell, options);
    const DesignVerification verification = verify_design(basis, m, tol);
    const fs::path dir = prepare_out_dir(opt);
    write_file_atomic(dir / "design.json", to_json(m));
    write_file_atomic(dir / "design_verification.json", to_json(verification));
    std::printf("design ell=%d support=%zu residual=%s depth=%d %s\n", m.ell, m.support.size(),
                format_double(m.orthogonality_residual).c_str(), m.effective_depth,
                verification.passed ? "ok" : "FAILED");
    return verification.passed ? 0 : 1;
}

int run_walk(const CommonOptions& opt) {
    const double tol = verification_tolerance();
    const Graph g = build_graph(opt, true);
    const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix, parse_order(opt.order));
    const int n = basis.n;

    std::vector<double> mu0;
    int ell = 1;
    if (opt.mu0 == "design") {
        if (opt.ell < 1) throw std::runtime_error("walk with --mu0 design requires --ell");
        SolveOptions options;
        options.method = parse_method(opt.method);
        options.tol = tol;
        const DesignMeasure m = solve_design(basis, opt.ell, options);
        mu0 = m.dense(n);
        ell = m.ell;
    } else if (opt.mu0 == "uniform") {
        mu0.assign(n, 1.0 / n);
    } else if (opt.mu0.rfind("dirac:", 0) == 0) {
        int v = -1;
        try {
            v = std::stoi(opt.mu0.substr(6));
        } catch (const std::exception&) {
            throw std::runtime_error("dirac vertex must be an integer, got '" + opt.mu0.substr(6) + "'");
        }
        if (v < 0 || v >= n) throw std::runtime_error("dirac vertex " + std::to_string(v) + " out of range");
        mu0.assign(n, 0.0);
        mu0[v] = 1.0;
    } else if (opt.mu0.rfind("file:", 0) == 0) {
        mu0 = parse_mu0_file(opt.mu0.substr(5), n);
    } else {
        throw std::runtime_error("unknown mu0 '" + opt.mu0 + "' (use design, uniform, dirac:<v> or file:<path>)");
    }

    WalkTrace trace = iterate_walk(g, mu0, opt.steps);
    if (opt.steps >= 4) trace.fitted_rate = rate_fit(trace);
    const WalkBoundReport report = verify_walk_bound(g, basis, mu0, ell, opt.steps, tol);
    trace.bound_base = report.bound_base;

    const fs::path dir = prepare_out_dir(opt);
    write_file_atomic(dir / "walk.csv", walk_trace_csv(trace, report.bound_base, report.l2_norm_sq));
    write_file_atomic(dir / "walk_verification.json", to_json(report));
    std::printf("walk steps=%d base=%s fitted=%s %s\n", opt.steps, format_double(report.bound_base).c_str(),
                trace.fitted_rate ? format_double(*trace.fitted_rate).c_str() : "none",
                report.passed ? "ok" : "FAILED");
    return report.passed ? 0 : 1;
}

int run_sample(const CommonOptions& opt) {
    const double tol = verification_tolerance();
    const OperatorKind op = parse_operator(opt.op);
    const Graph g = build_graph(opt, op == OperatorKind::walk_matrix);
    const SpectralBasis basis = decompose(g, op, parse_order(opt.order));
    if (opt.ell < 1) throw std::runtime_error("sample requires --ell >= 1");
    SolveOptions options;
    options.method = parse_method(opt.method);
    options.tol = tol;
    const DesignMeasure m = solve_design(basis, opt.ell, options);

    std::vector<SamplingReport> reports;
    bool passed = true;
    for (int i = 0; i < opt.functions; ++i) {
        reports.push_back(quadrature(basis, m, make_random_function(basis, opt.seed + i)));
        passed = passed && reports.back().error <= reports.back().bound + tol && reports.back().identity_gap <= 1e-10;
    }
    reports.push_back(quadrature(basis, m, make_low_pass(basis, opt.ell, opt.seed)));
    passed = passed && reports.back().error <= tol;

    const fs::path dir = prepare_out_dir(opt);
    write_file_atomic(dir / "samples.json", to_json(std::span<const SamplingReport>(reports)));
    write_file_atomic(dir / "samples.csv", sampling_batch_csv(reports));
    std::printf("sampled %zu functions, ell=%d support=%zu %s\n", reports.size(), m.ell, m.support.size(),
                passed ? "ok" : "FAILED");
    return passed ? 0 : 1;
}

int run_sweep(const CommonOptions& opt) {
    const double tol = verification_tolerance();
    const Graph g = build_graph(opt, true);
    const SpectralBasis basis = decompose(g, OperatorKind::walk_matrix, parse_order(opt.order));
    const int n = basis.n;

    std::string csv = "ell,support_size,lambda_next_abs,fitted_rate,bound_satisfied\n";
    bool all_passed = true;
    SolveOptions options;
    options.method = parse_method(opt.method);
    options.tol = tol;
    for (int ell = 1; ell <= n - 1; ++ell) {
        const DesignMeasure m = solve_design(basis, ell, options);
        const WalkBoundReport report = verify_walk_bound(g, basis, m, opt.steps, tol);
        WalkTrace trace = iterate_walk(g, m.dense(n), opt.steps);
        const std::optional<double> fitted = opt.steps >= 4 ? rate_fit(trace) : std::nullopt;
        const bool ok = report.passed && verify_design(basis, m, tol).passed;
        all_passed = all_passed && ok;
        csv += std::to_string(ell) + "," + std::to_string(m.support.size()) + "," + format_double(report.bound_base) +
               "," + (fitted ? format_double(*fitted) : "") + "," + (ok ? "yes" : "no") + "\n";
    }
    const fs::path dir = prepare_out_dir(opt);
    write_file_atomic(dir / "sweep.csv", csv);
    std::printf("sweep over ell=1..%d %s\n", n - 1, all_passed ? "ok" : "FAILED");
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"designwalk: sparse vertex measures that speed up random-walk equidistribution and integrate smooth graph functions"};
    app.require_subcommand(1);

    CommonOptions opt;

    CLI::App* gen = app.add_subcommand("gen", "generate a graph and write its edge list");
    add_graph_flags(gen, opt);

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigendecomposition and the decay-base menu");
    add_graph_flags(spectrum, opt);
    add_operator_flags(spectrum, opt);

    CLI::App* design = app.add_subcommand("design", "construct and verify a design measure");
    add_graph_flags(design, opt);
    add_operator_flags(design, opt);
    design->add_option("--ell", opt.ell, "orthogonality depth (1..n-1)");
    design->add_option("--method", opt.method, "reduce or lp (default reduce)");

    CLI::App* walk = app.add_subcommand("walk", "iterate the walk and check the decay bound");
    add_graph_flags(walk, opt);
    walk->add_option("--order", opt.order, "abs or custom:<perm-file>");
    walk->add_option("--ell", opt.ell, "design depth when --mu0 design");
    walk->add_option("--method", opt.method, "reduce or lp (default reduce)");
    walk->add_option("--mu0", opt.mu0, "design | uniform | dirac:<v> | file:<path> (default design)");
    walk->add_option("--steps", opt.steps, "walk steps (default 50)");

    CLI::App* sample = app.add_subcommand("sample", "quadrature reports over seeded test functions");
    add_graph_flags(sample, opt);
    add_operator_flags(sample, opt);
    sample->add_option("--ell", opt.ell, "design depth (1..n-1)");
    sample->add_option("--method", opt.method, "reduce or lp (default reduce)");
    sample->add_option("--functions", opt.functions, "number of random functions (default 100)");

    CLI::App* sweep = app.add_subcommand("sweep", "design + walk verification for every ell");
    add_graph_flags(sweep, opt);
    sweep->add_option("--order", opt.order, "abs or custom:<perm-file>");
    sweep->add_option("--method", opt.method, "reduce or lp (default reduce)");
    sweep->add_option("--steps", opt.steps, "walk steps per ell (default 50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen(opt);
        if (spectrum->parsed()) return run_spectrum(opt);
        if (design->parsed()) return run_design(opt);
        if (walk->parsed()) return run_walk(opt);
        if (sample->parsed()) return run_sample(opt);
        if (sweep->parsed()) return run_sweep(opt);
    } catch (const feasibility_breakdown& e) {
        std::string farkas;
        for (double y : e.certificate.farkas) farkas += (farkas.empty() ? "" : ",") + format_double(y);
        std::fprintf(stderr, "error: %s [farkas=%s]\n", e.what(), farkas.c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
