#include "chainkit/mixing.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chainkit/parallel.hpp"

namespace chainkit {

MixingProfile distance_profile(const StochasticMatrix& P, const Distribution& pi, int t_max,
                               int threads) {
    if (pi.n() != P.n()) throw ValidationError("distance_profile: dimension mismatch");
    if (t_max < 0) throw ValidationError("distance_profile: t_max must be nonnegative");
    const int n = P.n();
    // M holds the n start rows e_i P^t, advanced in lockstep.
    std::vector<double> M(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) M[static_cast<size_t>(i) * n + i] = 1.0;
    std::vector<double> next(M.size());
    std::vector<double> row_tv(static_cast<size_t>(n));

    MixingProfile prof;
    prof.exact = true;
    prof.d.reserve(static_cast<size_t>(t_max) + 1);

    auto measure = [&]() {
        parallel_chunks(n, threads, [&](long lo, long hi) {
            for (long i = lo; i < hi; ++i) {
                const double* r = M.data() + static_cast<size_t>(i) * n;
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += std::abs(r[j] - pi[j]);
                row_tv[static_cast<size_t>(i)] = 0.5 * s;
            }
        });
        return *std::max_element(row_tv.begin(), row_tv.end());
    };

    prof.d.push_back(measure());
    for (int t = 1; t <= t_max; ++t) {
        parallel_chunks(n, threads, [&](long lo, long hi) {
            for (long i = lo; i < hi; ++i) {
                const double* src = M.data() + static_cast<size_t>(i) * n;
                double* dst = next.data() + static_cast<size_t>(i) * n;
                std::fill(dst, dst + n, 0.0);
                for (int k = 0; k < n; ++k) {
                    const double m = src[k];
                    if (m == 0.0) continue;
                    const auto row = P.row(k);
                    for (int j = 0; j < n; ++j) dst[j] += m * row[static_cast<size_t>(j)];
                }
            }
        });
        M.swap(next);
        prof.d.push_back(measure());
    }
    return prof;
}

int mixing_time(const MixingProfile& profile, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("mixing_time: eps must be in (0,1)");
    for (size_t t = 0; t < profile.d.size(); ++t) {
        if (profile.d[t] <= eps) return static_cast<int>(t);
    }
    std::ostringstream os;
    os << "mixing_time: d(t_max=" << profile.t_max() << ") = " << profile.d.back() << " > eps = "
       << eps << "; recompute the profile with a larger t_max";
    throw ComputeError(os.str());
}

CutoffRatio cutoff_ratio(const StochasticMatrix& P, const Distribution& pi, double eps,
                         int t_max) {
    if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("cutoff_ratio: eps must be in (0,1/2)");
    const MixingProfile prof = distance_profile(P, pi, t_max);
    CutoffRatio r;
    r.t_upper = mixing_time(prof, eps);
    r.t_lower = mixing_time(prof, 1.0 - eps);
    if (r.t_lower == 0) {
        r.infinite = true;
        r.ratio = std::numeric_limits<double>::infinity();
    } else {
        r.ratio = static_cast<double>(r.t_upper) / r.t_lower;
    }
    return r;
}

SpectrumSummary spectrum(const StochasticMatrix& P, const Distribution& pi, double tol) {
    const int n = P.n();
    if (pi.n() != n) throw ValidationError("spectrum: dimension mismatch");
    for (int i = 0; i < n; ++i) {
        if (pi[i] <= 0.0) throw ValidationError("spectrum: pi must be strictly positive");
    }
    const ChainProperties props = classify(P, pi, tol);
    if (!props.reversible) {
        std::ostringstream os;
        os << "spectrum: chain is not reversible (detailed-balance residual "
           << props.reversibility_residual << " > " << tol << ")";
        throw ValidationError(os.str());
    }
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            S(i, j) = std::sqrt(pi[i] / pi[j]) * P(i, j);
        }
    }
    S = 0.5 * (S + S.transpose()).eval();  // kill roundoff asymmetry
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw ComputeError("spectrum: eigensolver failed");

    SpectrumSummary out;
    out.eigenvalues.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.eigenvalues[static_cast<size_t>(i)] = es.eigenvalues()(i);
    if (n == 1) {
        out.lambda_star = 0.0;
    } else {
        out.lambda_star = std::max(std::abs(out.eigenvalues.front()),
                                   std::abs(out.eigenvalues[static_cast<size_t>(n) - 2]));
    }
    if (out.lambda_star >= 1.0) {
        throw ComputeError("spectrum: absolute spectral gap is zero; chain is not ergodic");
    }
    out.t_rel = 1.0 / (1.0 - out.lambda_star);
    return out;
}

namespace {

// Tail probabilities u(t) = Q^t 1 over the complement of A, where Q is the
// substochastic restriction of P. u(t)[k] = P_{comp[k]}(T_A > t).
struct HitDP {
    std::vector<int> comp;       // states outside A, ascending
    std::vector<double> q;       // |comp| x |comp| restriction, row-major
    std::vector<double> u, tmp;  // current tail vector

    HitDP(const StochasticMatrix& P, const std::vector<char>& in_A) {
        const int n = P.n();
        for (int i = 0; i < n; ++i)
            if (!in_A[static_cast<size_t>(i)]) comp.push_back(i);
        const size_t m = comp.size();
        q.resize(m * m);
        for (size_t a = 0; a < m; ++a)
            for (size_t b = 0; b < m; ++b) q[a * m + b] = P(comp[a], comp[b]);
        u.assign(m, 1.0);
        tmp.resize(m);
    }

    void advance() {
        const size_t m = comp.size();
        for (size_t a = 0; a < m; ++a) {
            double s = 0.0;
            const double* qr = q.data() + a * m;
            for (size_t b = 0; b < m; ++b) s += qr[b] * u[b];
            tmp[a] = s;
        }
        u.swap(tmp);
    }

    double max_tail() const { return u.empty() ? 0.0 : *std::max_element(u.begin(), u.end()); }
};

}  // namespace

std::vector<double> hitting_profile(const StochasticMatrix& P, int x, const std::vector<int>& A,
                                    int t_max) {
    const int n = P.n();
    if (A.empty()) throw ValidationError("hitting_profile: A must be nonempty");
    if (x < 0 || x >= n) throw ValidationError("hitting_profile: start state out of range");
    if (t_max < 0) throw ValidationError("hitting_profile: t_max must be nonnegative");
    std::vector<char> in_A(static_cast<size_t>(n), 0);
    for (int a : A) {
        if (a < 0 || a >= n) throw ValidationError("hitting_profile: A contains an invalid state");
        in_A[static_cast<size_t>(a)] = 1;
    }
    std::vector<double> out(static_cast<size_t>(t_max) + 1, 0.0);
    if (in_A[static_cast<size_t>(x)]) return out;  // T_A = 0

    HitDP dp(P, in_A);
    const auto it = std::lower_bound(dp.comp.begin(), dp.comp.end(), x);
    const size_t xi = static_cast<size_t>(it - dp.comp.begin());
    out[0] = 1.0;
    for (int t = 1; t <= t_max; ++t) {
        dp.advance();
        out[static_cast<size_t>(t)] = dp.u[xi];
    }
    return out;
}

namespace {

// Enumerates the inclusion-minimal A with pi(A) >= 1 - eta3 by walking the
// complements: C maximal with pi(C) <= eta3. States enter the recursion in
// descending-pi order so the suffix-sum prune stays tight.
struct MinimalSetEnumerator {
    const std::vector<double>& pi;
    double eta3;
    long budget;
    long nodes = 0;
    std::vector<int> order;       // eligible states, descending pi
    std::vector<double> suffix;   // suffix sums of ordered weights
    std::vector<int> current;
    std::vector<std::vector<int>> complements;

    MinimalSetEnumerator(const std::vector<double>& pi_, double eta3_, long budget_)
        : pi(pi_), eta3(eta3_), budget(budget_) {
        const int n = static_cast<int>(pi.size());
        for (int i = 0; i < n; ++i)
            if (pi[static_cast<size_t>(i)] <= eta3) order.push_back(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (pi[static_cast<size_t>(a)] != pi[static_cast<size_t>(b)])
                return pi[static_cast<size_t>(a)] > pi[static_cast<size_t>(b)];
            return a < b;
        });
        suffix.assign(order.size() + 1, 0.0);
        for (size_t k = order.size(); k-- > 0;)
            suffix[k] = suffix[k + 1] + pi[static_cast<size_t>(order[k])];
    }

    bool is_maximal(const std::vector<int>& sorted, double mass) const {
        for (int i : order) {
            if (!std::binary_search(sorted.begin(), sorted.end(), i) &&
                mass + pi[static_cast<size_t>(i)] <= eta3)
                return false;
        }
        return true;
    }

    void recurse(size_t k, double mass) {
        if (++nodes > budget) {
            throw ComputeError("t_hit: subset enumeration budget exceeded (" +
                               std::to_string(budget) + " nodes); the chain is too large for "
                               "exact mode");
        }
        if (k == order.size()) {
            std::vector<int> sorted = current;
            std::sort(sorted.begin(), sorted.end());
            if (is_maximal(sorted, mass)) complements.push_back(std::move(sorted));
            return;
        }
        const double w = pi[static_cast<size_t>(order[k])];
        if (mass + w <= eta3) {
            current.push_back(order[k]);
            recurse(k + 1, mass + w);
            current.pop_back();
        }
        // Excluding order[k] can only lead to a maximal C if the final mass
        // can still rise above eta3 - w.
        if (mass + suffix[k + 1] + w > eta3) recurse(k + 1, mass);
    }

    std::vector<std::vector<int>> run() {
        recurse(0, 0.0);
        std::sort(complements.begin(), complements.end());
        complements.erase(std::unique(complements.begin(), complements.end()),
                          complements.end());
        return complements;
    }
};

std::vector<int> complement_of(const std::vector<int>& C, int n) {
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int c : C) in[static_cast<size_t>(c)] = 1;
    std::vector<int> A;
    A.reserve(static_cast<size_t>(n) - C.size());
    for (int i = 0; i < n; ++i)
        if (!in[static_cast<size_t>(i)]) A.push_back(i);
    return A;
}

// Greedy qualifying set: discard states of lowest stationary mass (ties to
// the higher index) while the remainder keeps pi(A) >= 1 - eta3.
std::vector<int> greedy_set(const std::vector<double>& pi, double eta3) {
    const int n = static_cast<int>(pi.size());
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (pi[static_cast<size_t>(a)] != pi[static_cast<size_t>(b)])
            return pi[static_cast<size_t>(a)] < pi[static_cast<size_t>(b)];
        return a > b;
    });
    std::vector<char> dropped(static_cast<size_t>(n), 0);
    double removed = 0.0;
    for (int i : order) {
        if (removed + pi[static_cast<size_t>(i)] <= eta3) {
            removed += pi[static_cast<size_t>(i)];
            dropped[static_cast<size_t>(i)] = 1;
        }
    }
    std::vector<int> A;
    for (int i = 0; i < n; ++i)
        if (!dropped[static_cast<size_t>(i)]) A.push_back(i);
    return A;
}

}  // namespace

HittingTimeCertificate t_hit(const StochasticMatrix& P, const Distribution& pi, double eta3,
                             double eta1, const THitOptions& opts) {
    const int n = P.n();
    if (pi.n() != n) throw ValidationError("t_hit: dimension mismatch");
    if (!(eta3 > 0.0 && eta3 < 1.0) || !(eta1 > 0.0 && eta1 < 1.0)) {
        throw ValidationError("t_hit: eta parameters must lie in (0,1)");
    }

    std::vector<std::vector<int>> sets;
    bool exhaustive = true;
    if (opts.mode == HitSearchMode::Exact) {
        if (n > opts.exact_n_limit) {
            throw ComputeError("t_hit: exact mode is limited to n <= " +
                               std::to_string(opts.exact_n_limit) + " (got n = " +
                               std::to_string(n) + "); use greedy mode or raise the limit");
        }
        MinimalSetEnumerator enumerator(pi.probs(), eta3, opts.subset_budget);
        for (auto& C : enumerator.run()) sets.push_back(complement_of(C, n));
        std::sort(sets.begin(), sets.end());
    } else {
        sets.push_back(greedy_set(pi.probs(), eta3));
        exhaustive = false;
    }

    std::vector<HitDP> dps;
    dps.reserve(sets.size());
    for (const auto& A : sets) {
        std::vector<char> in_A(static_cast<size_t>(n), 0);
        for (int a : A) in_A[static_cast<size_t>(a)] = 1;
        dps.emplace_back(P, in_A);
    }

    // "Smallest bitmask" set order: at the highest state where two sets
    // differ, the smaller one lacks it.
    auto bitmask_less = [](const std::vector<int>& a, const std::vector<int>& b) {
        auto ia = a.rbegin(), ib = b.rbegin();
        for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
            if (*ia != *ib) return *ia < *ib;
        }
        return a.size() < b.size();
    };

    HittingTimeCertificate cert;
    cert.exhaustive = exhaustive;

    auto worst_tail = [&]() {
        double worst = 0.0;
        for (const auto& dp : dps) worst = std::max(worst, dp.max_tail());
        return worst;
    };

    if (worst_tail() <= eta1) {
        cert.t_hit = 0;
        cert.witness_x = -1;
        cert.witness_prob = 1.0;
        if (!sets.empty()) cert.witness_A = sets.front();
        return cert;
    }
    for (int t = 1; t <= opts.t_cap; ++t) {
        // The current tails are at time t-1; remember the pair achieving the
        // max so it can serve as the witness if time t succeeds. Ties break
        // to the smallest x, then the smallest A bitmask.
        double best = -1.0;
        int best_x = -1;
        size_t best_set = 0;
        for (size_t s = 0; s < dps.size(); ++s) {
            const HitDP& dp = dps[s];
            for (size_t k = 0; k < dp.comp.size(); ++k) {
                const double p = dp.u[k];
                const int x = dp.comp[k];
                if (p > best || (p == best && (x < best_x || (x == best_x &&
                                               bitmask_less(sets[s], sets[best_set]))))) {
                    best = p;
                    best_x = x;
                    best_set = s;
                }
            }
        }
        for (auto& dp : dps) dp.advance();
        if (worst_tail() <= eta1) {
            cert.t_hit = t;
            cert.witness_x = best_x;
            cert.witness_A = sets[best_set];
            cert.witness_prob = best;
            return cert;
        }
    }
    throw ComputeError("t_hit: threshold not met within t_cap = " + std::to_string(opts.t_cap));
}

BasuReport basu_check(const StochasticMatrix& P, const Distribution& pi, double eta1,
                      double eta2, double eta3, int t_max, const THitOptions& opts) {
    if (!(eta1 > 0.0 && eta1 < 1.0) || !(eta2 > 0.0 && eta2 < 1.0) ||
        !(eta3 > 0.0 && eta3 < 1.0)) {
        throw ValidationError("basu_check: eta parameters must lie in (0,1)");
    }
    const ChainProperties props = classify(P, pi);
    if (!props.lazy || !props.reversible) {
        throw ValidationError("basu_check: chain must be lazy and reversible");
    }

    BasuReport rep;
    const double eps = std::min(eta1 + eta2, 1.0);
    if (eps >= 1.0) {
        rep.lhs = 0;  // d(0) <= 1 always
    } else {
        const MixingProfile prof = distance_profile(P, pi, t_max);
        rep.lhs = mixing_time(prof, eps);
    }
    const HittingTimeCertificate cert = t_hit(P, pi, eta3, eta1, opts);
    rep.t_hit = cert.t_hit;
    const SpectrumSummary spec = spectrum(P, pi);
    rep.t_rel = spec.t_rel;
    const double logterm =
        std::max(std::log(2.0 * (1.0 - eta1) * (1.0 - eta1) / (eta1 * eta2 * eta3)), 0.0);
    rep.correction = static_cast<long>(std::ceil(spec.t_rel / 2.0 * logterm));
    rep.rhs = cert.t_hit + static_cast<int>(rep.correction);
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

SubmultiplicativityReport submultiplicativity_check(const StochasticMatrix& P,
                                                    const Distribution& pi, double eps,
                                                    int k_max) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw ValidationError("submultiplicativity_check: eps must be in (0,1/2)");
    }
    if (k_max < 1) throw ValidationError("submultiplicativity_check: k_max must be >= 1");
    // Find t_mix(eps) first, then extend the profile to k_max * t_mix.
    int t_max = 4 * P.n() + 4;
    MixingProfile prof = distance_profile(P, pi, t_max);
    while (prof.d.back() > eps) {
        t_max *= 2;
        if (t_max > 1 << 22) throw ComputeError("submultiplicativity_check: profile cap exceeded");
        prof = distance_profile(P, pi, t_max);
    }
    SubmultiplicativityReport rep;
    rep.t_mix = mixing_time(prof, eps);
    const long need = static_cast<long>(rep.t_mix) * k_max;
    if (need > prof.t_max()) prof = distance_profile(P, pi, static_cast<int>(need));
    for (int k = 1; k <= k_max; ++k) {
        const double lhs = prof.at(static_cast<int>(static_cast<long>(k) * rep.t_mix));
        const double rhs = std::pow(2.0 * eps, k);
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        if (lhs > rhs + 1e-12) rep.holds = false;
    }
    return rep;
}

}  // namespace chainkit
