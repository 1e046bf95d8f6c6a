#include "chainkit/chain.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <sstream>

namespace chainkit {

namespace {

std::string fmt_index(int i) { return std::to_string(i + 1); }  // 1-indexed in messages

}  // namespace

Distribution Distribution::validated(std::vector<double> probs, double tol) {
    if (probs.empty()) throw ValidationError("distribution must have n >= 1 entries");
    double sum = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0)) {
            throw ValidationError("distribution entry " + fmt_index(static_cast<int>(i)) +
                                  " is negative or NaN");
        }
        sum += probs[i];
    }
    if (std::abs(sum - 1.0) > tol) {
        std::ostringstream os;
        os << "distribution sum " << sum << " deviates from 1 beyond tolerance " << tol;
        throw ValidationError(os.str());
    }
    if (sum != 1.0) {
        for (auto& p : probs) p /= sum;
    }
    return Distribution(std::move(probs));
}

Distribution Distribution::unchecked(std::vector<double> probs) {
    return Distribution(std::move(probs));
}

Distribution Distribution::point_mass(int n, int state) {
    if (n < 1 || state < 0 || state >= n) throw ValidationError("point_mass: state out of range");
    std::vector<double> p(static_cast<size_t>(n), 0.0);
    p[static_cast<size_t>(state)] = 1.0;
    return Distribution(std::move(p));
}

Distribution Distribution::uniform(int n) {
    if (n < 1) throw ValidationError("uniform: n must be >= 1");
    return Distribution(std::vector<double>(static_cast<size_t>(n), 1.0 / n));
}

StochasticMatrix StochasticMatrix::validate(std::vector<double> row_major, int n, double tol) {
    if (n < 1) throw ValidationError("matrix must have n >= 1");
    if (row_major.size() != static_cast<size_t>(n) * n) {
        throw ValidationError("matrix is not square: got " + std::to_string(row_major.size()) +
                              " entries for n = " + std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = row_major[static_cast<size_t>(i) * n + j];
            if (!(v >= 0.0)) {
                throw ValidationError("row " + fmt_index(i) + ": entry " + fmt_index(j) +
                                      " is negative or NaN");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) {
            std::ostringstream os;
            os << "row " << fmt_index(i) << ": sum " << sum
               << " deviates from 1 beyond tolerance " << tol;
            throw ValidationError(os.str());
        }
        if (sum != 1.0) {
            for (int j = 0; j < n; ++j) row_major[static_cast<size_t>(i) * n + j] /= sum;
        }
    }
    return StochasticMatrix(std::move(row_major), n, tol);
}

StochasticMatrix StochasticMatrix::validate(const std::vector<std::vector<double>>& rows,
                                            double tol) {
    const int n = static_cast<int>(rows.size());
    if (n < 1) throw ValidationError("matrix must have n >= 1");
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) {
            throw ValidationError("matrix is not square: row " + fmt_index(i) + " has " +
                                  std::to_string(rows[static_cast<size_t>(i)].size()) +
                                  " entries, expected " + std::to_string(n));
        }
        flat.insert(flat.end(), rows[static_cast<size_t>(i)].begin(),
                    rows[static_cast<size_t>(i)].end());
    }
    return validate(std::move(flat), n, tol);
}

namespace {

// Reachability over positive entries, forward or transposed.
void bfs_reach(const StochasticMatrix& P, int src, bool transpose, std::vector<char>& seen) {
    const int n = P.n();
    seen.assign(static_cast<size_t>(n), 0);
    std::vector<int> stack{src};
    seen[static_cast<size_t>(src)] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < n; ++v) {
            const double w = transpose ? P(v, u) : P(u, v);
            if (w > 0.0 && !seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                stack.push_back(v);
            }
        }
    }
}

}  // namespace

bool is_irreducible(const StochasticMatrix& P) {
    const int n = P.n();
    if (n == 1) return true;
    std::vector<char> seen;
    bfs_reach(P, 0, false, seen);
    for (char s : seen)
        if (!s) return false;
    bfs_reach(P, 0, true, seen);
    for (char s : seen)
        if (!s) return false;
    return true;
}

namespace {

// gcd of cycle lengths via BFS levels from state 0; valid on the component
// reachable from 0. Any positive diagonal entry short-circuits to aperiodic.
bool is_aperiodic(const StochasticMatrix& P) {
    const int n = P.n();
    for (int i = 0; i < n; ++i)
        if (P(i, i) > 0.0) return true;
    std::vector<int> level(static_cast<size_t>(n), -1);
    std::vector<int> queue{0};
    level[0] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        for (int v = 0; v < n; ++v) {
            if (P(u, v) > 0.0 && level[static_cast<size_t>(v)] < 0) {
                level[static_cast<size_t>(v)] = level[static_cast<size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    long g = 0;
    for (int u = 0; u < n; ++u) {
        if (level[static_cast<size_t>(u)] < 0) continue;
        for (int v = 0; v < n; ++v) {
            if (P(u, v) > 0.0 && level[static_cast<size_t>(v)] >= 0) {
                const long diff = level[static_cast<size_t>(u)] + 1 - level[static_cast<size_t>(v)];
                g = std::gcd(g, diff);
            }
        }
    }
    return g == 1;
}

}  // namespace

ChainProperties classify(const StochasticMatrix& P, const Distribution& pi, double tol) {
    if (pi.n() != P.n()) throw ValidationError("classify: dimension mismatch");
    ChainProperties props;
    props.irreducible = is_irreducible(P);
    props.aperiodic = is_aperiodic(P);
    double min_diag = 1.0;
    for (int i = 0; i < P.n(); ++i) min_diag = std::min(min_diag, P(i, i));
    props.lazy = min_diag >= 0.5 - tol;
    double residual = 0.0;
    for (int i = 0; i < P.n(); ++i) {
        for (int j = i + 1; j < P.n(); ++j) {
            residual = std::max(residual, std::abs(pi[i] * P(i, j) - pi[j] * P(j, i)));
        }
    }
    props.reversibility_residual = residual;
    props.reversible = residual <= tol;
    return props;
}

Distribution stationary(const StochasticMatrix& P, double tol) {
    const int n = P.n();
    if (!is_irreducible(P)) {
        throw ComputeError("stationary: chain is reducible, no unique stationary distribution");
    }
    // Solve (P^T - I) pi^T = 0 with the last equation replaced by sum(pi) = 1.
    // The rows of P^T - I sum to zero, so dropping any one keeps rank n-1 and
    // the substituted system is nonsingular for irreducible P.
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = P(j, i) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) A(n - 1, j) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(b);

    std::vector<double> pi(static_cast<size_t>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = x(i);
        if (v < 0.0) {
            if (v < -tol) throw ComputeError("stationary: solver produced a negative entry");
            v = 0.0;
        }
        pi[static_cast<size_t>(i)] = v;
        sum += v;
    }
    for (auto& v : pi) v /= sum;

    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += pi[static_cast<size_t>(i)] * P(i, j);
        residual += std::abs(col - pi[static_cast<size_t>(j)]);
    }
    if (residual > tol) {
        std::ostringstream os;
        os << "stationary: residual ||pi P - pi||_1 = " << residual << " exceeds " << tol;
        throw ComputeError(os.str());
    }
    return Distribution::unchecked(std::move(pi));
}

double total_variation(const Distribution& mu, const Distribution& nu) {
    if (mu.n() != nu.n()) throw ValidationError("total_variation: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < mu.n(); ++i) s += std::abs(mu[i] - nu[i]);
    return 0.5 * s;
}

Distribution step(const Distribution& mu, const StochasticMatrix& P, long t) {
    if (mu.n() != P.n()) throw ValidationError("step: dimension mismatch");
    if (t < 0) throw ValidationError("step: t must be nonnegative");
    const int n = P.n();
    std::vector<double> cur = mu.probs();
    std::vector<double> next(static_cast<size_t>(n));
    for (long s = 0; s < t; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            const double m = cur[static_cast<size_t>(i)];
            if (m == 0.0) continue;
            const auto row = P.row(i);
            for (int j = 0; j < n; ++j) next[static_cast<size_t>(j)] += m * row[static_cast<size_t>(j)];
        }
        cur.swap(next);
    }
    return Distribution::unchecked(std::move(cur));
}

StochasticMatrix lazify(const StochasticMatrix& P) {
    const int n = P.n();
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a[static_cast<size_t>(i) * n + j] = 0.5 * (P(i, j) + (i == j ? 1.0 : 0.0));
        }
    }
    return StochasticMatrix::validate(std::move(a), n, P.row_sums_tol());
}

}  // namespace chainkit
