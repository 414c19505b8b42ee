#pragma once

// Exact Bohr-Sommerfeld bookkeeping: for an exact level E_N,
//   int_{x_a}^{x_b} sqrt(E_N - V) dx = pi (N + 1/2 + gamma(N)),
// with hbar = 1 and mass 1/2.  gamma(N) is the WKB correction.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "susyqm/superpotential.hpp"

namespace susyqm {

struct TurningPoints {
    double x_a = 0.0;
    double x_b = 0.0;
    /// Points strictly inside (x_a, x_b) where E - V touches (or dips below)
    /// zero.  The action integral is split there.
    std::vector<double> interior_zeros;
    /// E lies below an interior barrier: E - V < 0 somewhere inside.
    bool below_barrier = false;
    /// x_a / x_b are hard walls rather than classical turning points.
    bool hard_wall = false;
};

TurningPoints turning_points(const Potential& v, double energy);

struct ActionResult {
    double value = 0.0;
    double error = 0.0;
};

/// int sqrt(max(0, E - V)) dx over [x_a, x_b], split at interior zeros (and
/// at x = 0 when V has |x|^m terms).  Each piece is mapped by
/// x = c + r sin(theta) and integrated by Gauss-Legendre with order doubling.
ActionResult action_integral(const Potential& v, double energy, const TurningPoints& tp);

/// Convenience overload computing the turning points first.
ActionResult action_integral(const Potential& v, double energy);

struct GammaEntry {
    std::size_t n = 0;
    double energy = 0.0;
    double energy_error = 0.0;
    double gamma = 0.0;
    double error = 0.0;  // quadrature error / pi + energy sensitivity
    TurningPoints turning;
    ActionResult action;
};

/// gamma = action / pi - N - 1/2 at the supplied exact energy.
GammaEntry wkb_gamma(const Potential& v, std::size_t n, double energy, double energy_error = 0.0);

struct GammaTable {
    std::string potential;
    std::string sector;  // "B", "F" or empty
    std::vector<GammaEntry> entries;
};

/// Solves the lowest n_max + 1 levels (at `tol`) and tabulates gamma.
GammaTable gamma_table(const Potential& v, std::size_t n_max, double tol = 1e-10);

/// Level N whose action equals `action`: the inverse of the exact condition.
/// The action is strictly increasing in E, so a bracketing secant converges.
double energy_from_action(const Potential& v, double action);

struct SusyGammaPairEntry {
    std::size_t n = 0;  // fermionic level; bosonic partner is n + 1
    double bosonic_energy = 0.0;
    double fermionic_energy = 0.0;
    double bosonic_gamma = 0.0;
    double fermionic_gamma = 0.0;
    double error_budget = 0.0;  // combined gamma error of the pair
};

struct SusyGammaPair {
    double a = 1.0;
    GammaTable bosonic;    // a^2 x^6 - 3 a x^2, N = 0..n_max+1
    GammaTable fermionic;  // a^2 x^6 + 3 a x^2, N = 0..n_max
    std::vector<SusyGammaPairEntry> pairs;
};

/// Both sectors of w = a x^3 (a > 0) and the partner pairing
/// E_B(N+1) = E_F(N) next to gamma_B(N+1), gamma_F(N).
SusyGammaPair susy_gamma_pair(double a, std::size_t n_max, double tol = 1e-10);

struct InvarianceReport {
    std::vector<double> couplings;
    std::vector<GammaTable> tables;
    double max_deviation = 0.0;
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// gamma tables of the sextic sector (bosonic: a^2x^6 - 3ax^2, fermionic: +)
/// at each coupling, compared entry-wise with the first; a deviation larger
/// than 10x the combined error estimates is a violation.
InvarianceReport coupling_invariance(std::span<const double> couplings, std::size_t n_max, bool bosonic = true,
                                     double tol = 1e-10);

}  // namespace susyqm
