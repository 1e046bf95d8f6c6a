#include "chainkit/coupling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "chainkit/example_chains.hpp"
#include "chainkit/parallel.hpp"

namespace chainkit {

SplitMix64 trial_stream(uint64_t seed, uint64_t trial) {
    // Two scramble rounds over seed ^ f(trial) give well-separated states.
    uint64_t z = seed ^ (0xD1342543DE82EF95ull * (trial + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return SplitMix64(z ^ (z >> 31));
}

namespace {

int sample_from(const std::vector<double>& probs, SplitMix64& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    const int n = static_cast<int>(probs.size());
    for (int i = 0; i < n; ++i) {
        acc += probs[static_cast<size_t>(i)];
        if (u < acc) return i;
    }
    return n - 1;  // u landed in fp slack at the top
}

int sample_row(const StochasticMatrix& P, int i, SplitMix64& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    const auto row = P.row(i);
    const int n = P.n();
    for (int j = 0; j < n; ++j) {
        acc += row[static_cast<size_t>(j)];
        if (u < acc) return j;
    }
    return n - 1;
}

CouplingTrace finish_trace(long trials, int t, long meets, uint64_t seed) {
    CouplingTrace tr;
    tr.trials = trials;
    tr.t = t;
    tr.meet_count = meets;
    tr.seed = seed;
    tr.estimate = 1.0 - static_cast<double>(meets) / static_cast<double>(trials);
    tr.std_err = std::sqrt(tr.estimate * (1.0 - tr.estimate) / static_cast<double>(trials));
    return tr;
}

// Runs `trials` independent simulations of one (X, Y) trajectory and reduces
// deterministically: per-trial streams make the result independent of the
// partition, and counts are summed exactly.
template <typename TrialFn>
CouplingTrace run_trials(long trials, int t, uint64_t seed, int threads, int n,
                         CouplingMarginals* marginals, const TrialFn& trial_fn) {
    if (trials < 1) throw ValidationError("coupling: trials must be >= 1");
    if (t < 0) throw ValidationError("coupling: t must be nonnegative");
    const int workers = std::max(1, resolve_threads(threads));
    std::vector<long> meet_by_worker(static_cast<size_t>(workers), 0);
    std::vector<std::vector<long>> xh(static_cast<size_t>(workers)),
        yh(static_cast<size_t>(workers));
    if (marginals) {
        for (auto& h : xh) h.assign(static_cast<size_t>(n), 0);
        for (auto& h : yh) h.assign(static_cast<size_t>(n), 0);
    }
    std::atomic<int> next_worker{0};
    parallel_chunks(trials, workers, [&](long lo, long hi) {
        const int w = next_worker.fetch_add(1);
        long meets = 0;
        for (long k = lo; k < hi; ++k) {
            SplitMix64 rng = trial_stream(seed, static_cast<uint64_t>(k));
            const auto [x, y] = trial_fn(rng);
            if (x == y) ++meets;
            if (marginals) {
                ++xh[static_cast<size_t>(w)][static_cast<size_t>(x)];
                ++yh[static_cast<size_t>(w)][static_cast<size_t>(y)];
            }
        }
        meet_by_worker[static_cast<size_t>(w)] = meets;
    });
    long meets = 0;
    for (long m : meet_by_worker) meets += m;
    if (marginals) {
        marginals->x_counts.assign(static_cast<size_t>(n), 0);
        marginals->y_counts.assign(static_cast<size_t>(n), 0);
        for (int w = 0; w < workers; ++w) {
            for (int s = 0; s < n; ++s) {
                marginals->x_counts[static_cast<size_t>(s)] += xh[static_cast<size_t>(w)][static_cast<size_t>(s)];
                marginals->y_counts[static_cast<size_t>(s)] += yh[static_cast<size_t>(w)][static_cast<size_t>(s)];
            }
        }
    }
    return finish_trace(trials, t, meets, seed);
}

}  // namespace

std::pair<int, int> maximal_coupling_sample(const Distribution& mu, const Distribution& nu,
                                            SplitMix64& rng) {
    const int n = mu.n();
    if (nu.n() != n) throw ValidationError("maximal_coupling_sample: dimension mismatch");
    double tv = 0.0;
    for (int i = 0; i < n; ++i) tv += std::abs(mu[i] - nu[i]);
    tv *= 0.5;
    if (tv <= 0.0) {
        const int z = sample_from(mu.probs(), rng);
        return {z, z};
    }
    const double u = rng.uniform();
    if (u < 1.0 - tv) {
        // draw from the overlap min(mu, nu) / (1 - tv)
        const double target = u;  // reuse: u is uniform on [0, 1-tv) here
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += std::min(mu[i], nu[i]);
            if (target < acc) return {i, i};
        }
        // fp slack: fall through to the last overlap state
        for (int i = n - 1; i >= 0; --i) {
            if (std::min(mu[i], nu[i]) > 0.0) return {i, i};
        }
    }
    // residuals, drawn independently
    std::vector<double> rx(static_cast<size_t>(n)), ry(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        rx[static_cast<size_t>(i)] = std::max(mu[i] - nu[i], 0.0) / tv;
        ry[static_cast<size_t>(i)] = std::max(nu[i] - mu[i], 0.0) / tv;
    }
    const int x = sample_from(rx, rng);
    const int y = sample_from(ry, rng);
    return {x, y};
}

CouplingTrace lemma71_coupling(const StochasticMatrix& P, const StochasticMatrix& Ptilde,
                               int t, long trials, uint64_t seed, int threads,
                               CouplingMarginals* marginals) {
    const int n = P.n();
    if (Ptilde.n() != n) throw ValidationError("lemma71_coupling: dimension mismatch");
    const Distribution pit = stationary(Ptilde);
    std::vector<Distribution> p_rows, pt_rows;
    p_rows.reserve(static_cast<size_t>(n));
    pt_rows.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        p_rows.push_back(Distribution::unchecked({P.row(i).begin(), P.row(i).end()}));
        pt_rows.push_back(Distribution::unchecked({Ptilde.row(i).begin(), Ptilde.row(i).end()}));
    }
    return run_trials(trials, t, seed, threads, n, marginals,
                      [&](SplitMix64& rng) -> std::pair<int, int> {
                          int x = sample_from(pit.probs(), rng);
                          int y = x;
                          for (int s = 0; s < t; ++s) {
                              if (x == y) {
                                  const auto [nx, ny] = maximal_coupling_sample(
                                      p_rows[static_cast<size_t>(x)],
                                      pt_rows[static_cast<size_t>(x)], rng);
                                  x = nx;
                                  y = ny;
                              } else {
                                  x = sample_row(P, x, rng);
                                  y = sample_row(Ptilde, y, rng);
                              }
                          }
                          return {x, y};
                      });
}

namespace {

struct CgbGeometry {
    int n = 0;
    int half = 0;  // clique size
    GraphAdjacency adj;

    explicit CgbGeometry(int n_) : n(n_), half(n_ % 2 == 0 ? n_ / 2 : (n_ - 1) / 2) {
        adj = complete_graph_bijection_adjacency(n);
    }

    int clique_of(int v) const { return v < half ? 0 : (v < 2 * half ? 1 : 2); }

    int uniform_neighbor(int v, SplitMix64& rng) const {
        const auto& nb = adj.neighbors[static_cast<size_t>(v)];
        return nb[static_cast<size_t>(rng.below(static_cast<int>(nb.size())))];
    }

    // Uniform over v's clique minus {v, w}; w must sit in the same clique.
    int clique_mate_excluding(int v, int w, SplitMix64& rng) const {
        const int base = clique_of(v) * half;
        int pick = rng.below(half - 2);
        for (int offset = 0; offset < half; ++offset) {
            const int cand = base + offset;
            if (cand == v || cand == w) continue;
            if (pick == 0) return cand;
            --pick;
        }
        return base;  // unreachable for half >= 3
    }

    // Uniform neighbor of v excluding the hub (odd n only).
    int neighbor_excluding_hub(int v, SplitMix64& rng) const {
        const auto& nb = adj.neighbors[static_cast<size_t>(v)];
        // hub is the last state and sorts last in the neighbor list
        const int m = static_cast<int>(nb.size()) - 1;
        return nb[static_cast<size_t>(rng.below(m))];
    }
};

// One true kernel step of the lazy walk, used whenever the chains have met.
int lazy_walk_step(const CgbGeometry& g, int v, SplitMix64& rng) {
    if (rng.uniform() < 0.5) return v;
    return g.uniform_neighbor(v, rng);
}

}  // namespace

CouplingTrace cgb_even_coupling(int n, int i, int j, int t, long trials, uint64_t seed,
                                int threads, CouplingMarginals* marginals) {
    if (n < 6 || n % 2 != 0) throw ValidationError("cgb_even_coupling: n must be even and >= 6");
    if (i < 0 || i >= n || j < 0 || j >= n) throw ValidationError("cgb_even_coupling: bad start");
    const CgbGeometry g(n);
    const double face1 = 2.0 / n;  // switch cliques together
    const double face2 = 2.0 / n;  // swap the chains
    return run_trials(trials, t, seed, threads, n, marginals,
                      [&](SplitMix64& rng) -> std::pair<int, int> {
                          int x = i, y = j;
                          for (int s = 0; s < t; ++s) {
                              if (x == y) {  // (A) run together
                                  x = y = lazy_walk_step(g, x, rng);
                              } else if (g.clique_of(x) != g.clique_of(y)) {
                                  // (B) alternate lazy moves; one chain moves,
                                  // the other holds, so cliques never swap.
                                  if (rng.uniform() < 0.5) {
                                      x = g.uniform_neighbor(x, rng);
                                  } else {
                                      y = g.uniform_neighbor(y, rng);
                                  }
                              } else {  // (C) same clique, not yet met
                                  if (rng.uniform() < 0.5) continue;  // both lazy
                                  const double d = rng.uniform();
                                  if (d < face1) {
                                      const int shift = x < g.half ? g.half : -g.half;
                                      x += shift;
                                      y += shift;
                                  } else if (d < face1 + face2) {
                                      std::swap(x, y);
                                  } else {
                                      // merge on a fresh in-clique state; the
                                      // swap face is what makes excluding both
                                      // x and y marginal-exact
                                      x = y = g.clique_mate_excluding(x, y, rng);
                                  }
                              }
                          }
                          return {x, y};
                      });
}

CouplingTrace cgb_odd_coupling(int n, int i, int j, int t, long trials, uint64_t seed,
                               int threads, CouplingMarginals* marginals) {
    if (n < 5 || n % 2 == 0) throw ValidationError("cgb_odd_coupling: n must be odd and >= 5");
    if (i < 0 || i >= n || j < 0 || j >= n) throw ValidationError("cgb_odd_coupling: bad start");
    const CgbGeometry g(n);
    const int hub = n - 1;
    const double face3 = 1.0 / (n + 1);          // both chains jump to the hub
    const double face1 = 0.5;                    // both hold
    return run_trials(trials, t, seed, threads, n, marginals,
                      [&](SplitMix64& rng) -> std::pair<int, int> {
                          int x = i, y = j;
                          for (int s = 0; s < t; ++s) {
                              if (x == y) {  // (D) run together
                                  x = y = lazy_walk_step(g, x, rng);
                              } else if (x == hub || y == hub) {
                                  // (E) alternate lazy moves off the hub
                                  if (rng.uniform() < 0.5) {
                                      x = g.uniform_neighbor(x, rng);
                                  } else {
                                      y = g.uniform_neighbor(y, rng);
                                  }
                              } else {  // (F) neither at the hub
                                  const double d = rng.uniform();
                                  if (d < face1) continue;  // both hold
                                  if (d < 1.0 - face3) {
                                      x = g.neighbor_excluding_hub(x, rng);
                                      y = g.neighbor_excluding_hub(y, rng);
                                  } else {
                                      x = y = hub;
                                  }
                              }
                          }
                          return {x, y};
                      });
}

}  // namespace chainkit
