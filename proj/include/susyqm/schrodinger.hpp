#pragma once

// Eigenvalues of H = -d^2/dx^2 + V(x) on a Dirichlet interval.
//
// The kinetic term is -d^2/dx^2 with no factor 1/2: atomic units with
// mass 1/2, so V = x^2 has E_N = 2N + 1.
//
// Discretization is second-order central differences on a uniform grid;
// the eigenvalues of the resulting symmetric tridiagonal matrix are found by
// Sturm-sequence bisection and extrapolated h -> 0 with a Romberg table.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "susyqm/superpotential.hpp"

namespace susyqm {

/// Interior points x_i = x_min + i h, i = 1..n, with h = (x_max - x_min)/(n + 1).
/// The wavefunction vanishes at x_min and x_max.
struct Grid {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n = 3;

    static Grid symmetric(double half_width, std::size_t n) { return {-half_width, half_width, n}; }

    double spacing() const noexcept { return (x_max - x_min) / static_cast<double>(n + 1); }
    double point(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * spacing(); }

    /// Same interval, h halved.
    Grid refined() const noexcept { return {x_min, x_max, 2 * n + 1}; }

    void validate() const;
};

/// diag[i] = 2/h^2 + V(x_{i+1}); every off-diagonal entry equals `offdiag`.
struct TridiagonalOperator {
    // Extended precision: 2/h^2 dominates the diagonal, and rounding it to
    // double would put an eps/h^2 floor under every eigenvalue.
    std::vector<long double> diag;
    long double offdiag = 0.0L;

    std::size_t size() const noexcept { return diag.size(); }
};

TridiagonalOperator build_hamiltonian(const Potential& v, const Grid& g);

/// Number of eigenvalues below `lambda` (one sitting exactly at `lambda` may
/// be counted either way).
std::size_t sturm_count(const TridiagonalOperator& t, double lambda);

/// The k smallest eigenvalues, ascending.  Throws DomainError if k > n.
std::vector<double> lowest_eigenvalues(const TridiagonalOperator& t, std::size_t k);

struct Level {
    std::size_t index = 0;
    double energy = 0.0;
    double error = 0.0;  // a-posteriori, from the last Romberg step
};

struct Spectrum {
    std::vector<Level> levels;
    double box = 0.0;       // half-width actually used (or 0.5 * interval length)
    Grid finest;            // last grid evaluated
    std::size_t grids = 0;  // number of h-halvings + 1

    std::vector<double> energies() const;
    double energy(std::size_t n) const { return levels.at(n).energy; }
    double max_error() const;
};

struct SolveRequest {
    Potential potential;
    std::size_t levels = 1;
    double tol = 1e-10;
    /// Dirichlet walls at +-box instead of auto-sizing.
    std::optional<double> box;
    /// Starting grid; overrides both box and auto-sizing.
    std::optional<Grid> grid;
    /// Cap on interior points of the finest grid.
    std::size_t max_points = std::size_t{1} << 22;
};

/// R >= 1 such that V(x) > threshold whenever |x| >= R (a Cauchy-type bound
/// from the leading term).  Requires a confining V without walls.
double exceedance_radius(const Potential& v, double threshold);

/// Minimum of V over [-radius, radius], located on a fine scan and refined.
double potential_minimum(const Potential& v, double radius);

/// Leading-order WKB estimate of E_N measured from the bottom of V, using only
/// the highest-power term.
double crude_level_estimate(const Potential& v, std::size_t n);

/// Box half-width for the lowest K levels of a confining V.
///
/// Starts where V(+-L) >= E_est + 25 (E_est a leading-term WKB guess measured
/// from min V) and doubles L until the coarse-grid eigenvalues move by less
/// than tol/10 (relative for |E| > 1).  Hard walls return the wall position.
double auto_box(const Potential& v, std::size_t levels, double tol = 1e-10);

/// Converged lowest `levels` eigenvalues.  Convergence: successive Romberg
/// diagonal entries differ by < tol * max(1, |E|) for every level.
/// Throws ConvergenceError when the grid cap is hit first.
Spectrum solve(const SolveRequest& req);

/// Grid-sampled wavefunction normalized to h * sum psi_i^2 = 1, with the
/// sign fixed so that the first significant sample is positive.
struct EigenState {
    double energy = 0.0;
    Grid grid;
    std::vector<double> samples;

    double norm() const;
    std::size_t nodes() const;
    /// max(|psi_1|, |psi_n|) / max |psi|.
    double edge_ratio() const;
};

/// Inverse iteration at the eigenvalue of `t` nearest to `energy`.
EigenState eigenstate(const TridiagonalOperator& t, const Grid& g, double energy);

/// The lowest k eigenstates on grid g.
std::vector<EigenState> eigenstates(const Potential& v, const Grid& g, std::size_t k);

/// <psi| O |psi> by the composite rule on the state's grid.
double expectation(const EigenState& state, const Potential& op);

/// <a| O |b>; both states must live on the same grid.
double matrix_element(const EigenState& a, const Potential& op, const EigenState& b);

struct PtCoefficients {
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    double err0 = 0.0, err1 = 0.0, err2 = 0.0;
    std::size_t n_states = 0;
    std::size_t grids = 0;
};

/// Rayleigh-Schroedinger coefficients of the ground state of
/// V0 + a W1 + a^2 W2 through second order:
///   e0 = E_0(V0), e1 = <0|W1|0>,
///   e2 = <0|W2|0> + sum_{k=1..n_states} <0|W1|k>^2 / (e0 - E_k).
/// Each coefficient is evaluated on successive grids and Romberg-extrapolated.
PtCoefficients pt_coefficients(const Potential& v0, const Potential& w1, const Potential& w2,
                               std::size_t n_states, double tol = 1e-10);

}  // namespace susyqm
