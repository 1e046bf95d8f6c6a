#include "chainkit/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chainkit {

StochasticMatrix restart_matrix(const StochasticMatrix& P, const RestartPerturbation& pert) {
    const int n = P.n();
    if (pert.sigma.n() != n) throw ValidationError("restart_matrix: dimension mismatch");
    if (!(pert.alpha > 0.0 && pert.alpha < 1.0)) {
        throw ValidationError("restart_matrix: alpha must be in (0,1)");
    }
    std::vector<double> a(static_cast<size_t>(n) * n);
    const double keep = 1.0 - pert.alpha;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a[static_cast<size_t>(i) * n + j] = keep * P(i, j) + pert.alpha * pert.sigma[j];
        }
    }
    return StochasticMatrix::validate(std::move(a), n, P.row_sums_tol());
}

double radius(const StochasticMatrix& P, const StochasticMatrix& Ptilde) {
    const int n = P.n();
    if (Ptilde.n() != n) throw ValidationError("radius: dimension mismatch");
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(P(i, j) - Ptilde(i, j));
        worst = std::max(worst, 0.5 * s);
    }
    return worst;
}

Distribution restart_stationary_series(const StochasticMatrix& P,
                                       const RestartPerturbation& pert, double tol) {
    const int n = P.n();
    if (pert.sigma.n() != n) throw ValidationError("restart_stationary_series: dimension mismatch");
    if (!(pert.alpha > 0.0 && pert.alpha < 1.0)) {
        throw ValidationError("restart_stationary_series: alpha must be in (0,1)");
    }
    if (!(tol > 0.0)) throw ValidationError("restart_stationary_series: tol must be positive");
    const double alpha = pert.alpha;
    const long T = static_cast<long>(std::ceil(std::log(tol) / std::log1p(-alpha)));

    std::vector<double> acc(static_cast<size_t>(n), 0.0);
    std::vector<double> cur = pert.sigma.probs();
    std::vector<double> next(static_cast<size_t>(n));
    double weight = alpha;  // alpha (1-alpha)^t
    for (long t = 0;; ++t) {
        for (int j = 0; j < n; ++j) acc[static_cast<size_t>(j)] += weight * cur[static_cast<size_t>(j)];
        if (t >= T) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            const double m = cur[static_cast<size_t>(i)];
            if (m == 0.0) continue;
            const auto row = P.row(i);
            for (int j = 0; j < n; ++j) next[static_cast<size_t>(j)] += m * row[static_cast<size_t>(j)];
        }
        cur.swap(next);
        weight *= 1.0 - alpha;
    }
    double mass = 0.0;
    for (double v : acc) mass += v;
    for (auto& v : acc) v /= mass;
    return Distribution::unchecked(std::move(acc));
}

double perturbation_error(const StochasticMatrix& P, const StochasticMatrix& Ptilde) {
    return total_variation(stationary(P), stationary(Ptilde));
}

ErrorUpperBound upper_bound(const StochasticMatrix& P, const Distribution& pi, double alpha,
                            int t_max) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("upper_bound: alpha must be in (0,1)");
    const MixingProfile prof = distance_profile(P, pi, t_max);
    ErrorUpperBound out;
    double decay = 1.0;  // (1-alpha)^t
    out.bound = prof.at(0);  // t = 0 term: 1 - 1 + d(0)
    out.argmin_t = 0;
    for (int t = 1; t <= t_max; ++t) {
        decay *= 1.0 - alpha;
        const double v = 1.0 - decay + prof.at(t);
        if (v < out.bound) {
            out.bound = v;
            out.argmin_t = t;
        }
    }
    return out;
}

AdversarialRestart adversarial_restart(const StochasticMatrix& P, const Distribution& pi,
                                       double delta, double alpha, double eps,
                                       const THitOptions& opts) {
    const int n = P.n();
    if (!(delta > 0.0 && delta < 0.5)) {
        throw ValidationError("adversarial_restart: delta must be in (0,1/2)");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("adversarial_restart: alpha must be in (0,1)");
    }
    THitOptions exact = opts;
    exact.mode = HitSearchMode::Exact;  // a certified lower bound needs the exact search
    const HittingTimeCertificate cert = t_hit(P, pi, delta, 1.0 - 2.0 * delta, exact);

    AdversarialRestart out;
    out.certificate = cert;
    const int x = cert.witness_x >= 0 ? cert.witness_x : 0;
    out.pert = RestartPerturbation{alpha, Distribution::point_mass(n, x)};
    out.certified_lower = 1.0 - 3.0 * delta - std::exp(-alpha * cert.t_hit);

    const StochasticMatrix Ptilde = restart_matrix(P, out.pert);
    PerturbationReport rep;
    rep.n = n;
    rep.eps = eps;
    rep.alpha = alpha;
    rep.radius = radius(P, Ptilde);
    rep.error = total_variation(pi, stationary(Ptilde));
    int t_max = std::max(4 * n + 4, cert.t_hit + 1);
    MixingProfile prof = distance_profile(P, pi, t_max);
    while (prof.d.back() > eps) {
        t_max *= 2;
        if (t_max > (1 << 22)) throw ComputeError("adversarial_restart: profile cap exceeded");
        prof = distance_profile(P, pi, t_max);
    }
    double decay = 1.0;
    rep.upper_bound = prof.at(0);
    for (int t = 1; t <= prof.t_max(); ++t) {
        decay *= 1.0 - alpha;
        rep.upper_bound = std::min(rep.upper_bound, 1.0 - decay + prof.at(t));
    }
    rep.lower_bound = out.certified_lower;
    rep.alpha_tmix = alpha * mixing_time(prof, eps);
    rep.t_hit = cert.t_hit;
    rep.witness_x = cert.witness_x;
    out.report = rep;
    return out;
}

double alpha_from_rule(const AlphaRule& rule, int n, int tmix) {
    double alpha = 0.0;
    switch (rule.kind) {
        case AlphaRuleKind::COverTmix:
            if (tmix <= 0) throw ComputeError("alpha rule c-over-tmix: t_mix is zero");
            alpha = rule.value / tmix;
            break;
        case AlphaRuleKind::Power:
            alpha = std::pow(static_cast<double>(n), -rule.value);
            break;
        case AlphaRuleKind::Const:
            alpha = rule.value;
            break;
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << "alpha rule produced alpha = " << alpha << " outside (0,1) at n = " << n;
        throw ComputeError(os.str());
    }
    return alpha;
}

std::vector<PerturbationReport> trichotomy_sweep(
    const std::function<StochasticMatrix(int)>& family, const std::vector<int>& n_list,
    const AlphaRule& rule, double eps, double delta, const THitOptions& opts) {
    if (n_list.empty()) throw ValidationError("trichotomy_sweep: empty n list");
    std::vector<PerturbationReport> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        const StochasticMatrix P = family(n);
        const Distribution pi = stationary(P);
        int t_max = 4 * n + 4;
        MixingProfile prof = distance_profile(P, pi, t_max);
        while (prof.d.back() > eps) {
            t_max *= 2;
            if (t_max > (1 << 22)) throw ComputeError("trichotomy_sweep: profile cap exceeded");
            prof = distance_profile(P, pi, t_max);
        }
        const int tmix = mixing_time(prof, eps);
        const double alpha = alpha_from_rule(rule, n, tmix);
        AdversarialRestart adv = adversarial_restart(P, pi, delta, alpha, eps, opts);
        adv.report.alpha_tmix = alpha * tmix;
        rows.push_back(adv.report);
    }
    return rows;
}

Condition61Report condition61_upper_bound(const StochasticMatrix& P, const Distribution& pi,
                                          double eps) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw ValidationError("condition61_upper_bound: eps must be in (0,1/2)");
    }
    const int n = P.n();
    int t_max = 4 * n + 4;
    MixingProfile prof = distance_profile(P, pi, t_max);
    while (prof.d.back() > 1.0 - eps) {
        t_max *= 2;
        if (t_max > (1 << 22)) {
            throw ComputeError("condition61_upper_bound: t_mix(1-eps) unavailable");
        }
        prof = distance_profile(P, pi, t_max);
    }
    Condition61Report rep;
    rep.eps = eps;
    rep.tmix_lower = mixing_time(prof, 1.0 - eps);
    if (rep.tmix_lower == 0) {
        throw ComputeError("condition61_upper_bound: t_mix(1-eps) = 0, alpha undefined");
    }
    rep.alpha = 1.0 / (2.0 * rep.tmix_lower);
    rep.bound = 1.0 - eps * std::pow(1.0 - rep.alpha, rep.tmix_lower);
    rep.bernoulli_holds = rep.bound <= 1.0 - eps / 2.0 + 1e-12;

    // alpha sum_t (1-alpha)^t d(t), summed until the geometric tail or the
    // profile itself is negligible; the cut tail is added as d(T) (1-alpha)^T,
    // an upper bound since d is non-increasing.
    const double tail_tol = 1e-13;
    double sum = 0.0;
    double decay = 1.0;  // (1-alpha)^t
    int t = 0;
    for (;; ++t) {
        if (t > prof.t_max()) {
            t_max *= 2;
            if (t_max > (1 << 22)) break;
            prof = distance_profile(P, pi, t_max);
        }
        if (decay <= tail_tol || prof.at(t) <= tail_tol) break;
        sum += rep.alpha * decay * prof.at(t);
        decay *= 1.0 - rep.alpha;
    }
    rep.series_bound = sum + decay * (t <= prof.t_max() ? prof.at(t) : prof.d.back());
    return rep;
}

CoincidenceReport coincidence_check(const PerturbationSchedule& schedule,
                                    const MixingTimeGrid& grid) {
    if (schedule.n_list != grid.n_list || schedule.eps_list != grid.eps_list) {
        throw ValidationError("coincidence_check: schedule and t_mix grids index differently");
    }
    const size_t nn = schedule.n_list.size();
    const size_t ne = schedule.eps_list.size();
    if (schedule.alpha.size() != nn) throw ValidationError("coincidence_check: alpha grid shape");
    for (const auto& row : schedule.alpha) {
        if (row.size() != ne) throw ValidationError("coincidence_check: alpha grid shape");
    }
    for (double e : schedule.eps_list) {
        if (!(e > 0.0 && e < 0.5)) {
            throw ValidationError("coincidence_check: eps values must lie in (0,1/2)");
        }
    }

    CoincidenceReport rep;
    rep.products.assign(nn, std::vector<double>(ne, 0.0));
    const double slack = 1e-12;
    for (size_t in = 0; in < nn; ++in) {
        for (size_t ie = 0; ie < ne; ++ie) {
            rep.products[in][ie] =
                schedule.alpha[in][ie] * grid.tmix_eps[in][ie];
            for (size_t id = 0; id < ne; ++id) {
                if (schedule.eps_list[ie] < schedule.eps_list[id]) continue;  // need eps >= delta
                const double ratio = schedule.alpha[in][ie] / schedule.alpha[in][id];
                const int num = grid.tmix_one_minus_eps[in][id];
                const int den = grid.tmix_one_minus_eps[in][ie];
                const double lo = den > 0 ? static_cast<double>(num) / den
                                          : (num == 0 ? 1.0 : std::numeric_limits<double>::infinity());
                if (ratio < lo - slack || ratio > 1.0 + slack) {
                    rep.ratio_ok = false;
                    rep.violations.push_back({schedule.n_list[in], schedule.eps_list[ie],
                                              schedule.eps_list[id], ratio, lo});
                }
            }
        }
    }
    return rep;
}

}  // namespace chainkit
