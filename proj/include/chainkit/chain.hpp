#pragma once

#include <span>
#include <vector>

#include "chainkit/errors.hpp"

namespace chainkit {

// Default tolerances. All overridable per call.
inline constexpr double kRowSumTol = 1e-9;          // matrix/distribution validation
inline constexpr double kStationaryTol = 1e-10;     // ||pi P - pi||_1 residual
inline constexpr double kDetailedBalanceTol = 1e-9; // reversibility residual

/// A probability vector on states {0, ..., n-1}. Immutable after construction.
class Distribution {
public:
    Distribution() = default;

    /// Checks entries >= 0 and sum == 1 within tol, then normalizes the sum
    /// away (skipped when the sum is exactly 1 so dyadic vectors stay exact).
    static Distribution validated(std::vector<double> probs, double tol = kRowSumTol);

    /// For kernels whose output is a distribution by construction.
    static Distribution unchecked(std::vector<double> probs);

    static Distribution point_mass(int n, int state);
    static Distribution uniform(int n);

    int n() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[static_cast<size_t>(i)]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    explicit Distribution(std::vector<double> p) : probs_(std::move(p)) {}
    std::vector<double> probs_;
};

/// Dense row-stochastic n x n transition matrix, row-major. Immutable.
class StochasticMatrix {
public:
    StochasticMatrix() = default;

    /// Validates nonnegativity and row sums within tol; rows whose sum is
    /// not exactly 1 are renormalized. Throws ValidationError otherwise.
    static StochasticMatrix validate(std::vector<double> row_major, int n,
                                     double tol = kRowSumTol);
    static StochasticMatrix validate(const std::vector<std::vector<double>>& rows,
                                     double tol = kRowSumTol);

    int n() const { return n_; }
    double operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * n_ + j];
    }
    std::span<const double> row(int i) const {
        return {a_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)};
    }
    const std::vector<double>& data() const { return a_; }
    double row_sums_tol() const { return tol_; }

private:
    StochasticMatrix(std::vector<double> a, int n, double tol)
        : a_(std::move(a)), n_(n), tol_(tol) {}
    std::vector<double> a_;
    int n_ = 0;
    double tol_ = kRowSumTol;
};

/// Structural predicates of a chain. `reversible` holds exactly when
/// `reversibility_residual` is at or below the tolerance passed to classify().
struct ChainProperties {
    bool irreducible = false;
    bool aperiodic = false;
    bool lazy = false;
    bool reversible = false;
    double reversibility_residual = 0.0;
};

/// Irreducibility via strong connectivity of the positive-entry digraph;
/// aperiodicity via a positive diagonal shortcut, else gcd of BFS cycle
/// lengths; lazy iff min diagonal >= 1/2 - tol; reversible iff the detailed
/// balance residual max |pi(i)P(i,j) - pi(j)P(j,i)| is <= tol.
ChainProperties classify(const StochasticMatrix& P, const Distribution& pi,
                         double tol = kDetailedBalanceTol);

/// True when the positive-entry digraph of P is strongly connected.
bool is_irreducible(const StochasticMatrix& P);

/// Unique stationary distribution of an irreducible chain, by direct linear
/// solve of (P^T - I) with the normalization row substituted in. Throws
/// ComputeError for reducible chains or when ||pi P - pi||_1 exceeds tol.
Distribution stationary(const StochasticMatrix& P, double tol = kStationaryTol);

/// Total variation distance (1/2) sum_i |mu(i) - nu(i)|, in [0, 1].
double total_variation(const Distribution& mu, const Distribution& nu);

/// mu P^t by repeated vector-matrix products; P^t is never materialized.
Distribution step(const Distribution& mu, const StochasticMatrix& P, long t);

/// (P + I) / 2. Stationary distribution is unchanged.
StochasticMatrix lazify(const StochasticMatrix& P);

}  // namespace chainkit
