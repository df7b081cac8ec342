#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "designwalk/rng.hpp"

namespace designwalk {

/// Undirected simple connected graph on vertices 0..n-1.
///
/// Immutable once built and safe to share across threads. Construction
/// rejects self-loops, duplicate edges and disconnected inputs. A constant
/// vertex degree is optional at construction so the Laplacian pipeline can
/// carry non-regular graphs; the walk operator re-checks regularity when it
/// is requested.
class Graph {
public:
    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges, bool require_regular = true) {
        if (n <= 0) throw std::invalid_argument("graph must have at least one vertex");
        for (auto& [a, b] : edges) {
            if (a < 0 || b < 0 || a >= n || b >= n)
                throw std::invalid_argument("edge {" + std::to_string(a) + "," + std::to_string(b) + "} out of vertex range 0.." + std::to_string(n - 1));
            if (a == b) throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
            if (a > b) std::swap(a, b);
        }
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i] == edges[i - 1])
                throw std::invalid_argument("duplicate edge {" + std::to_string(edges[i].first) + "," + std::to_string(edges[i].second) + "}");

        Graph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.adjacency_.assign(n, {});
        for (const auto& [a, b] : g.edges_) {
            g.adjacency_[a].push_back(b);
            g.adjacency_[b].push_back(a);
        }
        for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());

        g.check_connected();
        if (require_regular) g.check_regular();
        return g;
    }

    /// Parses the edge-list text format: one "i j" pair per line, '#' starts
    /// a comment, blank lines ignored. Vertex ids must form 0..n-1.
    static Graph from_edge_list(std::string_view text, bool require_regular = true) {
        std::vector<std::pair<int, int>> edges;
        int max_id = -1;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

            std::vector<long long> ids;
            std::size_t i = 0;
            while (i < line.size()) {
                while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                if (i >= line.size()) break;
                std::size_t start = i;
                while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                const std::string token(line.substr(start, i - start));
                try {
                    std::size_t used = 0;
                    const long long value = std::stoll(token, &used);
                    if (used != token.size() || value < 0) throw std::invalid_argument(token);
                    ids.push_back(value);
                } catch (const std::exception&) {
                    throw std::runtime_error("parse error: line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" + token + "'");
                }
            }
            if (ids.empty()) continue;
            if (ids.size() != 2)
                throw std::runtime_error("parse error: line " + std::to_string(line_no) + ": expected two vertex ids, got " + std::to_string(ids.size()));
            edges.emplace_back(static_cast<int>(ids[0]), static_cast<int>(ids[1]));
            max_id = std::max(max_id, static_cast<int>(std::max(ids[0], ids[1])));
        }
        if (edges.empty()) throw std::runtime_error("parse error: edge list contains no edges");
        return from_edges(max_id + 1, std::move(edges), require_regular);
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<int>& neighbors(int v) const {
        if (v < 0 || v >= n_) throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
        return adjacency_[v];
    }

    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

    bool is_regular() const {
        for (int v = 1; v < n_; ++v)
            if (degree(v) != degree(0)) return false;
        return true;
    }

    /// Common degree of a regular graph; throws for irregular graphs.
    int degree() const {
        check_regular();
        return degree(0);
    }

    /// Edges in canonical form: i < j, sorted lexicographically.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Canonical edge-list emission; bit-exact inverse of from_edge_list.
    std::string to_edge_list() const {
        std::string out;
        for (const auto& [a, b] : edges_) {
            out += std::to_string(a);
            out += ' ';
            out += std::to_string(b);
            out += '\n';
        }
        return out;
    }

private:
    Graph() = default;

    void check_connected() const {
        std::vector<char> seen(n_, 0);
        std::queue<int> frontier;
        frontier.push(0);
        seen[0] = 1;
        int visited = 1;
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (int w : adjacency_[u]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++visited;
                    frontier.push(w);
                }
            }
        }
        if (visited != n_) {
            int missing = 0;
            while (seen[missing]) ++missing;
            throw std::invalid_argument("graph is disconnected: vertex " + std::to_string(missing) + " is unreachable from vertex 0");
        }
    }

    void check_regular() const {
        for (int v = 1; v < n_; ++v) {
            if (degree(v) != degree(0))
                throw std::invalid_argument("graph is not regular: vertex 0 has degree " + std::to_string(degree(0)) +
                                            " != degree " + std::to_string(degree(v)) + " of vertex " + std::to_string(v));
        }
    }

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

inline Graph make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle requires n >= 3");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n);
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, std::move(edges));
}

inline Graph make_complete(int n) {
    if (n < 2) throw std::invalid_argument("complete graph requires n >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph::from_edges(n, std::move(edges));
}

/// K_{m,m}: parts {0..m-1} and {m..2m-1}. Equal part sizes keep it regular.
inline Graph make_complete_bipartite(int m) {
    if (m < 1) throw std::invalid_argument("complete bipartite requires part size m >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) edges.emplace_back(i, m + j);
    return Graph::from_edges(2 * m, std::move(edges));
}

inline Graph make_hypercube(int dim) {
    if (dim < 1 || dim > 20) throw std::invalid_argument("hypercube requires 1 <= dim <= 20");
    const int n = 1 << dim;
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v)
        for (int b = 0; b < dim; ++b) {
            const int w = v ^ (1 << b);
            if (v < w) edges.emplace_back(v, w);
        }
    return Graph::from_edges(n, std::move(edges));
}

/// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
inline Graph make_petersen() {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
        edges.emplace_back(i, 5 + i);
    }
    return Graph::from_edges(10, std::move(edges));
}

inline Graph make_circulant(int n, const std::vector<int>& offsets) {
    if (n < 3) throw std::invalid_argument("circulant requires n >= 3");
    if (offsets.empty()) throw std::invalid_argument("circulant requires at least one offset");
    std::vector<int> sorted = offsets;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] < 1 || sorted[i] > n / 2)
            throw std::invalid_argument("circulant offset " + std::to_string(sorted[i]) + " outside 1.." + std::to_string(n / 2));
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw std::invalid_argument("circulant offsets must be distinct");
    }
    std::vector<std::pair<int, int>> edges;
    for (int s : sorted) {
        const int count = (2 * s == n) ? n / 2 : n;
        for (int i = 0; i < count; ++i) edges.emplace_back(i, (i + s) % n);
    }
    return Graph::from_edges(n, std::move(edges));
}

/// Configuration/pairing model: pair up d stubs per vertex uniformly and
/// reject until the result is simple and connected. Deterministic per seed.
/// The acceptance rate decays like exp(-(d*d-1)/4), so the budget must be
/// generous for d around 6.
inline Graph make_random_regular(int n, int d, std::uint64_t seed, int retry_budget = 100000) {
    if (n < 2 || d < 1 || d >= n) throw std::invalid_argument("random_regular requires n >= 2 and 1 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0) throw std::invalid_argument("random_regular requires n*d even");

    Rng rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < d; ++k) stubs[static_cast<std::size_t>(v) * d + k] = v;

    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        shuffle(stubs, rng);
        std::vector<std::pair<int, int>> edges;
        edges.reserve(stubs.size() / 2);
        bool simple = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) {
                simple = false;
                break;
            }
            if (a > b) std::swap(a, b);
            edges.emplace_back(a, b);
        }
        if (!simple) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        try {
            return Graph::from_edges(n, std::move(edges), true);
        } catch (const std::invalid_argument&) {
            continue;  // disconnected sample, redraw
        }
    }
    throw std::runtime_error("random_regular: no simple connected graph after " + std::to_string(retry_budget) +
                             " attempts (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ", seed=" + std::to_string(seed) + ")");
}

/// One step of the walk operator: (1/d) * A * v, accumulated over neighbors.
inline std::vector<double> walk_matrix_apply(const Graph& g, std::span<const double> v) {
    if (static_cast<int>(v.size()) != g.vertex_count())
        throw std::invalid_argument("walk_matrix_apply: vector length " + std::to_string(v.size()) +
                                    " != vertex count " + std::to_string(g.vertex_count()));
    const double inv_d = 1.0 / static_cast<double>(g.degree());
    std::vector<double> out(v.size(), 0.0);
    for (int u = 0; u < g.vertex_count(); ++u) {
        double acc = 0.0;
        for (int w : g.neighbors(u)) acc += v[w];
        out[u] = acc * inv_d;
    }
    return out;
}

}  // namespace designwalk
