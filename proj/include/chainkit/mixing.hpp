#pragma once

#include <vector>

#include "chainkit/chain.hpp"

namespace chainkit {

/// The curve t -> d_n(t) = max_i || e_i P^t - pi || for t = 0..t_max.
/// d(0) = 1 - min_i pi(i) and d is non-increasing (up to fp accumulation).
struct MixingProfile {
    std::vector<double> d;  // indexed by t, size t_max + 1
    bool exact = true;      // computed by full enumeration over starting states

    int t_max() const { return static_cast<int>(d.size()) - 1; }
    double at(int t) const { return d[static_cast<size_t>(t)]; }
};

/// Advances all n point-mass starts one step at a time (never materializes
/// P^t). Parallelizes over starting states; output independent of `threads`.
MixingProfile distance_profile(const StochasticMatrix& P, const Distribution& pi,
                               int t_max, int threads = 1);

/// min { t : d(t) <= eps }. The profile must be long enough that
/// d(t_max) <= eps; otherwise throws ComputeError asking for a larger t_max.
int mixing_time(const MixingProfile& profile, double eps);

struct CutoffRatio {
    double ratio = 0.0;  // t_mix(eps) / t_mix(1 - eps)
    bool infinite = false;
    int t_upper = 0;  // t_mix(eps)
    int t_lower = 0;  // t_mix(1 - eps)
};

/// t_mix(eps) / t_mix(1-eps) for eps in (0, 1/2). A zero denominator is
/// reported as an infinite ratio with the flag set, not an error.
CutoffRatio cutoff_ratio(const StochasticMatrix& P, const Distribution& pi, double eps,
                         int t_max);

/// Real spectrum of a reversible chain plus the derived relaxation time.
struct SpectrumSummary {
    std::vector<double> eigenvalues;  // ascending; the top one is 1
    double lambda_star = 0.0;         // largest modulus among eigenvalues != 1
    double t_rel = 1.0;               // 1 / (1 - lambda_star)
};

/// Symmetrizes S = D^{1/2} P D^{-1/2} with D = diag(pi) and solves the
/// symmetric eigenproblem; the eigenvalues of S are those of P. Requires P
/// reversible w.r.t. pi (checked) and pi strictly positive.
SpectrumSummary spectrum(const StochasticMatrix& P, const Distribution& pi,
                         double tol = kDetailedBalanceTol);

/// P_x(T_A > t) for t = 0..t_max, by dynamic programming on the substochastic
/// restriction of P to the complement of A. States in A are 0-indexed.
std::vector<double> hitting_profile(const StochasticMatrix& P, int x,
                                    const std::vector<int>& A, int t_max);

enum class HitSearchMode { Exact, Greedy };

struct THitOptions {
    HitSearchMode mode = HitSearchMode::Exact;
    int t_cap = 100000;        // error if the threshold is not met by this time
    int exact_n_limit = 18;    // exact mode refuses larger chains
    long subset_budget = 500000;  // cap on enumeration work in exact mode
};

/// Witness realizing t_hit: at time t_hit - 1 the pair (x, A) still satisfies
/// P_x(T_A > t_hit - 1) > eta1, while by t_hit every qualifying pair is below.
struct HittingTimeCertificate {
    int t_hit = 0;
    int witness_x = -1;            // -1 when t_hit = 0 (no witness needed)
    std::vector<int> witness_A;    // sorted ascending
    double witness_prob = 0.0;     // P_x(T_A > t_hit - 1); 1.0 when t_hit = 0
    bool exhaustive = true;        // false for the greedy search
};

/// t_hit(1-eta3, eta1): the first t by which every set of stationary measure
/// at least 1-eta3 has been hit from every start with probability > 1-eta1,
/// i.e. min { t : max_{x, A : pi(A) >= 1-eta3} P_x(T_A > t) <= eta1 }.
///
/// Exact mode enumerates only inclusion-minimal qualifying sets (removing a
/// state from A weakly increases P_x(T_A > t), so the max is attained on
/// minimal sets). Greedy mode keeps the single set obtained by discarding
/// states of lowest stationary mass while the set still qualifies, and marks
/// the certificate non-exhaustive. Witness ties break to the smallest x, then
/// the lexicographically smallest A.
HittingTimeCertificate t_hit(const StochasticMatrix& P, const Distribution& pi,
                             double eta3, double eta1, const THitOptions& opts = {});

struct BasuReport {
    int lhs = 0;           // t_mix((eta1 + eta2) ^ 1)
    int rhs = 0;           // t_hit(1-eta3, eta1) + ceil((t_rel/2) max{log(...), 0})
    bool holds = false;    // lhs <= rhs
    int t_hit = 0;
    double t_rel = 1.0;
    long correction = 0;   // the ceil term
};

/// Checks the mixing/hitting inequality for lazy reversible chains:
/// t_mix((eta1+eta2) ^ 1) <= t_hit(1-eta3, eta1)
///                          + ceil((t_rel / 2) max{log(2(1-eta1)^2 / (eta1 eta2 eta3)), 0}).
BasuReport basu_check(const StochasticMatrix& P, const Distribution& pi, double eta1,
                      double eta2, double eta3, int t_max, const THitOptions& opts = {});

struct SubmultiplicativityReport {
    int t_mix = 0;              // t_mix(eps)
    std::vector<double> lhs;    // d(k t_mix(eps)) for k = 1..k_max
    std::vector<double> rhs;    // (2 eps)^k
    bool holds = true;
};

/// Verifies d(k t_mix(eps)) <= (2 eps)^k for k = 1..k_max, eps in (0, 1/2).
SubmultiplicativityReport submultiplicativity_check(const StochasticMatrix& P,
                                                    const Distribution& pi, double eps,
                                                    int k_max);

}  // namespace chainkit
