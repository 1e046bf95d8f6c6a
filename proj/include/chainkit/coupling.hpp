#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chainkit/chain.hpp"

namespace chainkit {

/// SplitMix64: the 64-bit generator of Steele, Lea & Flood (the java.util
/// splittable RNG finalizer). State advances by the golden-ratio increment
/// and is scrambled through two xor-multiply rounds per draw.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by 128-bit multiply (no modulo bias worth
    /// caring about at n << 2^64).
    int below(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

private:
    uint64_t state_;
};

/// Per-trial stream: the base seed and the trial counter are mixed into a
/// fresh SplitMix64 state, so trial i's stream depends only on (seed, i) and
/// results are independent of how trials are partitioned across workers.
SplitMix64 trial_stream(uint64_t seed, uint64_t trial);

/// One Monte Carlo mismatch estimate. estimate = 1 - meet_count / trials is
/// the fraction of trials with X(t) != Y(t); std_err = sqrt(p(1-p)/trials).
struct CouplingTrace {
    long trials = 0;
    int t = 0;
    long meet_count = 0;
    double estimate = 0.0;
    double std_err = 0.0;
    uint64_t seed = 0;
};

/// Empirical state histograms of both coupled chains at time t, for marginal
/// fidelity checks.
struct CouplingMarginals {
    std::vector<long> x_counts;
    std::vector<long> y_counts;
};

/// Samples one pair with marginals (mu, nu) and P(X != Y) = ||mu - nu||, by
/// the overlap decomposition: with probability 1 - TV both draw from the
/// normalized min(mu, nu); otherwise X and Y draw independently from the
/// normalized positive parts of mu - nu and nu - mu.
std::pair<int, int> maximal_coupling_sample(const Distribution& mu, const Distribution& nu,
                                            SplitMix64& rng);

/// The coupling behind the generic perturbation upper bound: both chains
/// start at one draw from the stationary distribution of Ptilde; while equal
/// they advance through a maximal coupling of their rows, once apart they
/// advance independently. Mismatch at time t is at most 1 - (1-alpha)^t for
/// Ptilde within radius alpha of P.
CouplingTrace lemma71_coupling(const StochasticMatrix& P, const StochasticMatrix& Ptilde,
                               int t, long trials, uint64_t seed, int threads = 1,
                               CouplingMarginals* marginals = nullptr);

/// The even-n complete-graph-bijection coupling: run together once met;
/// alternate lazy moves across cliques; within a clique, a fair coin then a
/// three-sided die (faces 2/n, 2/n, 1-4/n) that jointly switches cliques,
/// swaps the chains, or merges them on a fresh in-clique state.
CouplingTrace cgb_even_coupling(int n, int i, int j, int t, long trials, uint64_t seed,
                                int threads = 1, CouplingMarginals* marginals = nullptr);

/// The odd-n coupling: run together once met; alternate lazy moves while
/// either chain sits on the hub; otherwise a die with faces 1/2,
/// 1/2 - 1/(n+1), 1/(n+1) that holds both, moves both independently off the
/// hub, or sends both to the hub at once.
CouplingTrace cgb_odd_coupling(int n, int i, int j, int t, long trials, uint64_t seed,
                               int threads = 1, CouplingMarginals* marginals = nullptr);

}  // namespace chainkit
