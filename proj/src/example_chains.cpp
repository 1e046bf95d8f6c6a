#include "chainkit/example_chains.hpp"

#include <algorithm>

namespace chainkit {

GraphAdjacency GraphAdjacency::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw ValidationError("graph must have n >= 1");
    GraphAdjacency g;
    g.n = n;
    g.neighbors.assign(static_cast<size_t>(n), {});
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) {
            throw ValidationError("edge endpoint out of range");
        }
        if (u == v) throw ValidationError("self-loops are not allowed");
        g.neighbors[static_cast<size_t>(u)].push_back(v);
        g.neighbors[static_cast<size_t>(v)].push_back(u);
    }
    for (auto& nb : g.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return g;
}

bool GraphAdjacency::connected() const {
    if (n == 0) return false;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : neighbors[static_cast<size_t>(u)]) {
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                stack.push_back(v);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

StochasticMatrix winning_streak(int n) {
    if (n < 2) throw ValidationError("winning_streak: n must be >= 2");
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
        a[static_cast<size_t>(i) * n + (i + 1)] = 0.5;
        a[static_cast<size_t>(i) * n + 0] += 0.5;
    }
    a[static_cast<size_t>(n - 1) * n + (n - 1)] = 0.5;
    a[static_cast<size_t>(n - 1) * n + 0] += 0.5;
    return StochasticMatrix::validate(std::move(a), n);
}

StochasticMatrix winning_streak_reversal(int n) {
    if (n < 2) throw ValidationError("winning_streak_reversal: n must be >= 2");
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    // Row 1 is pi itself; halving from 1.0 keeps every entry an exact dyadic.
    double v = 1.0;
    for (int j = 0; j < n - 1; ++j) {
        v *= 0.5;
        a[static_cast<size_t>(j)] = v;
    }
    a[static_cast<size_t>(n - 1)] = v;
    for (int i = 1; i < n - 1; ++i) a[static_cast<size_t>(i) * n + (i - 1)] = 1.0;
    a[static_cast<size_t>(n - 1) * n + (n - 2)] = 0.5;
    a[static_cast<size_t>(n - 1) * n + (n - 1)] = 0.5;
    return StochasticMatrix::validate(std::move(a), n);
}

Distribution winning_streak_stationary(int n) {
    if (n < 2) throw ValidationError("winning_streak_stationary: n must be >= 2");
    std::vector<double> p(static_cast<size_t>(n), 0.0);
    double v = 1.0;
    for (int i = 0; i < n - 1; ++i) {
        v *= 0.5;
        p[static_cast<size_t>(i)] = v;
    }
    p[static_cast<size_t>(n - 1)] = v;
    return Distribution::validated(std::move(p));
}

GraphAdjacency complete_graph_bijection_adjacency(int n) {
    if (n < 4 || (n % 2 == 1 && n < 5)) {
        throw ValidationError("complete_graph_bijection: n must be >= 4 even or >= 5 odd");
    }
    std::vector<std::pair<int, int>> edges;
    const int h = (n % 2 == 0) ? n / 2 : (n - 1) / 2;
    for (int i = 0; i < h; ++i) {
        for (int j = i + 1; j < h; ++j) {
            edges.emplace_back(i, j);          // first clique
            edges.emplace_back(i + h, j + h);  // second clique
        }
        edges.emplace_back(i, i + h);  // the bijection i -> i + h
    }
    if (n % 2 == 1) {
        for (int i = 0; i < n - 1; ++i) edges.emplace_back(i, n - 1);  // auxiliary hub
    }
    return GraphAdjacency::from_edges(n, edges);
}

StochasticMatrix complete_graph_bijection(int n) {
    if (n < 4 || (n % 2 == 1 && n < 5)) {
        throw ValidationError("complete_graph_bijection: n must be >= 4 even or >= 5 odd");
    }
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    if (n % 2 == 0) {
        const int h = n / 2;
        const double w = 1.0 / n;
        for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] = 0.5;
        for (int i = 0; i < h; ++i) {
            for (int j = 0; j < h; ++j) {
                if (i == j) continue;
                a[static_cast<size_t>(i) * n + j] = w;
                a[static_cast<size_t>(i + h) * n + (j + h)] = w;
            }
            a[static_cast<size_t>(i) * n + (i + h)] = w;
            a[static_cast<size_t>(i + h) * n + i] = w;
        }
    } else {
        const int h = (n - 1) / 2;
        const double w = 1.0 / (n + 1);
        const double hub = 1.0 / (2.0 * (n - 1));  // = (n+1)/(2(n-1)) * 1/(n+1)
        for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] = 0.5;
        for (int i = 0; i < h; ++i) {
            for (int j = 0; j < h; ++j) {
                if (i == j) continue;
                a[static_cast<size_t>(i) * n + j] = w;
                a[static_cast<size_t>(i + h) * n + (j + h)] = w;
            }
            a[static_cast<size_t>(i) * n + (i + h)] = w;
            a[static_cast<size_t>(i + h) * n + i] = w;
            a[static_cast<size_t>(i) * n + (n - 1)] = w;
            a[static_cast<size_t>(i + h) * n + (n - 1)] = w;
        }
        for (int j = 0; j < n - 1; ++j) a[static_cast<size_t>(n - 1) * n + j] = hub;
    }
    return StochasticMatrix::validate(std::move(a), n);
}

Distribution complete_graph_bijection_stationary(int n) {
    if (n < 4 || (n % 2 == 1 && n < 5)) {
        throw ValidationError("complete_graph_bijection: n must be >= 4 even or >= 5 odd");
    }
    if (n % 2 == 0) return Distribution::uniform(n);
    std::vector<double> p(static_cast<size_t>(n),
                          (n + 1.0) / ((n + 3.0) * (n - 1.0)));
    p[static_cast<size_t>(n - 1)] = 2.0 / (n + 3.0);
    return Distribution::validated(std::move(p));
}

StochasticMatrix lazy_walk(const GraphAdjacency& adj) {
    if (adj.n < 1) throw ValidationError("lazy_walk: empty graph");
    if (!adj.connected()) throw ValidationError("lazy_walk: graph must be connected");
    const int n = adj.n;
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        a[static_cast<size_t>(i) * n + i] = 0.5;
        const int deg = adj.degree(i);
        if (deg == 0) throw ValidationError("lazy_walk: isolated state");
        const double w = 1.0 / (2.0 * deg);
        for (int j : adj.neighbors[static_cast<size_t>(i)]) {
            a[static_cast<size_t>(i) * n + j] = w;
        }
    }
    return StochasticMatrix::validate(std::move(a), n);
}

}  // namespace chainkit
