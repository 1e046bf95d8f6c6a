#pragma once

#include <utility>
#include <vector>

#include "chainkit/chain.hpp"

namespace chainkit {

/// Undirected simple graph as per-state neighbor lists (0-indexed, sorted).
struct GraphAdjacency {
    int n = 0;
    std::vector<std::vector<int>> neighbors;

    /// Builds from an edge list, checking symmetry is implied (edges are
    /// undirected) and rejecting self-loops and out-of-range endpoints.
    static GraphAdjacency from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    bool connected() const;
    int degree(int i) const { return static_cast<int>(neighbors[static_cast<size_t>(i)].size()); }
};

/// Winning streak chain on {1..n}: from i < n move to i+1 or reset to 1, each
/// with probability 1/2; from n stay or reset, each with probability 1/2.
StochasticMatrix winning_streak(int n);

/// Time reversal of the winning streak w.r.t. its stationary distribution.
/// Row 1 equals pi; rows 2..n-1 step down deterministically; row n splits
/// evenly between n-1 and n. Entries are exact dyadics built by halving.
StochasticMatrix winning_streak_reversal(int n);

/// Closed-form stationary distribution shared by both winning streak chains:
/// pi(i) = 2^{-i} for i < n, pi(n) = 2^{-n+1}.
Distribution winning_streak_stationary(int n);

/// Lazy random walk on two n/2-cliques joined by a perfect matching; for odd
/// n, two (n-1)/2-cliques plus an auxiliary hub adjacent to everything.
/// Requires n >= 4 even or n >= 5 odd.
StochasticMatrix complete_graph_bijection(int n);

/// pi uniform for even n; for odd n, pi(i) = (n+1)/((n+3)(n-1)) for i < n and
/// pi(n) = 2/(n+3).
Distribution complete_graph_bijection_stationary(int n);

/// The underlying graph of the complete graph bijection chain.
GraphAdjacency complete_graph_bijection_adjacency(int n);

/// Lazy random walk on a connected undirected graph: P(i,i) = 1/2 and
/// P(i,j) = 1/(2 deg(i)) for neighbors j. Stationary mass is proportional to
/// degree.
StochasticMatrix lazy_walk(const GraphAdjacency& adj);

}  // namespace chainkit
