#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chainkit/chain.hpp"
#include "chainkit/mixing.hpp"

namespace chainkit {

/// Restart with probability alpha at a state drawn from sigma.
struct RestartPerturbation {
    double alpha = 0.0;  // in (0,1)
    Distribution sigma;
};

/// (1 - alpha) P + alpha 1^T sigma. Row-stochastic by construction.
StochasticMatrix restart_matrix(const StochasticMatrix& P, const RestartPerturbation& pert);

/// max_i || e_i P - e_i Ptilde ||; Ptilde lies in B(P, alpha) iff this is
/// at most alpha.
double radius(const StochasticMatrix& P, const StochasticMatrix& Ptilde);

/// Stationary distribution of the restart perturbation via the geometric
/// series alpha sum_t (1-alpha)^t sigma P^t, truncated once the tail
/// (1-alpha)^T drops below tol and renormalized. Agrees with the direct
/// solve of restart_matrix to within ~2 tol.
Distribution restart_stationary_series(const StochasticMatrix& P,
                                       const RestartPerturbation& pert, double tol);

/// || pi(P) - pi(Ptilde) || with both stationary distributions computed by
/// the direct solve. Throws ComputeError if either chain is reducible.
double perturbation_error(const StochasticMatrix& P, const StochasticMatrix& Ptilde);

struct ErrorUpperBound {
    double bound = 1.0;
    int argmin_t = 0;
};

/// min_{t <= t_max} [ 1 - (1-alpha)^t + d(t) ], valid for every
/// Ptilde in B(P, alpha).
ErrorUpperBound upper_bound(const StochasticMatrix& P, const Distribution& pi, double alpha,
                            int t_max);

/// One row of a perturbation experiment. lower_bound is absent when the
/// adversarial certificate was not constructed (or is vacuous <= 0 it is
/// still reported). alpha_tmix carries the eps it was computed at.
struct PerturbationReport {
    int n = 0;
    double eps = 0.25;
    double alpha = 0.0;
    double radius = 0.0;
    double error = 0.0;
    double upper_bound = 1.0;
    std::optional<double> lower_bound;
    double alpha_tmix = 0.0;
    std::optional<int> t_hit;
    std::optional<int> witness_x;
};

struct AdversarialRestart {
    RestartPerturbation pert;      // restart at the hitting-time witness state
    double certified_lower = 0.0;  // 1 - 3 delta - exp(-alpha t_hit)
    HittingTimeCertificate certificate;
    PerturbationReport report;
};

/// The adversarial construction: take the exact hitting-time certificate for
/// (eta3, eta1) =etas(delta) below, restart at its witness state, and certify
/// error > 1 - 3 delta - exp(-alpha t_hit) whenever that is positive. The
/// exact error is computed and reported alongside. Requires the exact t_hit
/// search; refuses (throws) rather than certify from a heuristic witness.
AdversarialRestart adversarial_restart(const StochasticMatrix& P, const Distribution& pi,
                                       double delta, double alpha, double eps = 0.25,
                                       const THitOptions& opts = {});

enum class AlphaRuleKind { COverTmix, Power, Const };

/// c-over-tmix: alpha_n = value / t_mix(eps);  power: alpha_n = n^{-value};
/// const: alpha_n = value.
struct AlphaRule {
    AlphaRuleKind kind = AlphaRuleKind::COverTmix;
    double value = 1.0;
};

double alpha_from_rule(const AlphaRule& rule, int n, int tmix);

/// Runs the adversarial-restart pipeline for each n in n_list on the given
/// family, emitting one report per n (deterministic order).
std::vector<PerturbationReport> trichotomy_sweep(
    const std::function<StochasticMatrix(int)>& family, const std::vector<int>& n_list,
    const AlphaRule& rule, double eps, double delta, const THitOptions& opts = {});

struct Condition61Report {
    double eps = 0.0;
    int tmix_lower = 0;        // t_mix(1 - eps)
    double alpha = 0.0;        // 1 / (2 t_mix(1 - eps))
    double bound = 1.0;        // 1 - eps (1-alpha)^{t_mix(1-eps)}
    double series_bound = 1.0; // upper bound on alpha sum_t (1-alpha)^t d(t)
    bool bernoulli_holds = false;  // bound <= 1 - eps/2
};

/// The computable upper-bound chain for restart probabilities
/// alpha = 1/(2 t_mix(1-eps)): every restart perturbation at this alpha has
/// error <= series_bound <= bound <= 1 - eps/2.
Condition61Report condition61_upper_bound(const StochasticMatrix& P, const Distribution& pi,
                                          double eps);

/// Restart probabilities alpha[in][ie] over n_list x eps_list.
struct PerturbationSchedule {
    std::vector<int> n_list;
    std::vector<double> eps_list;              // within (0, 1/2)
    std::vector<std::vector<double>> alpha;    // alpha[in][ie] in (0,1)
};

/// t_mix values the schedule is checked against, same index sets.
struct MixingTimeGrid {
    std::vector<int> n_list;
    std::vector<double> eps_list;
    std::vector<std::vector<int>> tmix_eps;            // t_mix(eps)
    std::vector<std::vector<int>> tmix_one_minus_eps;  // t_mix(1 - eps)
};

struct CoincidenceReport {
    bool ratio_ok = true;  // every pair eps >= delta satisfies the interval
    // products[in][ie] = alpha_{n,eps} * t_mix(eps); the liminf/sup condition
    // is asymptotic and only reported through these finite-prefix values.
    std::vector<std::vector<double>> products;
    struct Violation {
        int n;
        double eps, delta, ratio, lo;
    };
    std::vector<Violation> violations;
};

/// Checks, for every n and every eps >= delta in the grid, that
/// alpha_{n,eps} / alpha_{n,delta} lies in [ t_mix(1-delta)/t_mix(1-eps), 1 ].
CoincidenceReport coincidence_check(const PerturbationSchedule& schedule,
                                    const MixingTimeGrid& grid);

}  // namespace chainkit
