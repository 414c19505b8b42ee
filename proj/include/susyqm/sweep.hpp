#pragma once

// Coupling sweeps through a = 0 for w(x; a, b) = a p(x) + b q(x), one-sided
// limits at a = 0, transition classification and asymptotic fits.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "susyqm/schrodinger.hpp"
#include "susyqm/superpotential.hpp"

namespace susyqm {

enum class Sector { Bosonic, Fermionic };

std::string_view to_string(Sector s);

struct FamilySpec {
    std::string name = "custom";
    Superpotential p;
    Superpotential q;
    double b = 0.0;
    Sector sector = Sector::Bosonic;
    /// Hard walls at +-box.
    std::optional<double> box;
    /// Exponents of the small-|a| model beta |a|^p exp(-alpha b / |a|^q).
    double prefactor_power = 1.0;
    double instanton_power = 1.0;

    static FamilySpec sextic(double b);    // p = x^3, q = x
    static FamilySpec quartic(double b);   // p = x^2, q = x
    static FamilySpec harmonic();          // p = x, q = 0
    /// "sextic", "quartic" or "harmonic"; DomainError otherwise.
    static FamilySpec named(std::string_view name, double b);

    FamilySpec with_box(double half_width) const;

    Superpotential superpotential(double a) const;
    /// Sector potential at coupling a, with the walls attached.
    Potential potential(double a) const;
    void validate() const;
};

struct Sample {
    double a = 0.0;
    double energy = 0.0;
    double error = 0.0;
    /// Empty on success; otherwise the solver's message (energy is NaN).
    std::string failure;

    bool ok() const noexcept { return failure.empty(); }
};

struct SweepResult {
    std::string family;
    std::size_t level = 0;
    double b = 0.0;
    Sector sector = Sector::Bosonic;
    std::vector<Sample> samples;  // strictly increasing in a

    bool ok() const noexcept;
};

struct SweepOptions {
    double tol = 1e-10;
    /// 0 means: SUSYQM_THREADS from the environment, else 1.
    std::size_t threads = 0;
};

/// Worker count from SUSYQM_THREADS (default 1).
std::size_t worker_threads();

/// `points` couplings evenly spaced on [a_min, a_max]; a = 0 is dropped.
std::vector<double> coupling_grid(double a_min, double a_max, std::size_t points);

/// Geometric samples between |a| = lo and hi (same sign), ends included.
std::vector<double> geometric_grid(double a_lo, double a_hi, std::size_t points);

/// Level N of the family's sector potential at each coupling.  a = 0 and
/// repeated couplings are rejected.  Failed solves are kept, annotated.
SweepResult sweep(const FamilySpec& family, std::size_t level, std::span<const double> couplings,
                  const SweepOptions& options = {});

/// Level N at a = 0 (the b q(x) member).  Empty when that potential does
/// not confine and there are no walls (e.g. a free particle).
std::optional<Level> energy_at_zero(const FamilySpec& family, std::size_t level, double tol = 1e-10);

struct LimitOptions {
    double eps0 = 0.1;
    std::size_t halvings = 8;
    double tol = 1e-10;
    std::size_t threads = 0;
};

struct OneSidedLimit {
    double side = 1.0;  // +1: a -> 0+, -1: a -> 0-
    std::vector<double> eps;
    std::vector<double> energies;
    std::vector<double> errors;
    double limit = 0.0;
    double limit_error = 0.0;
    /// Secant slopes between side * eps_k and side * eps_{k+1}.
    std::vector<double> quotients;
    double derivative = 0.0;
    double derivative_error = 0.0;
    bool divergent = false;
    /// |quotient| ~ eps^(-growth) when divergent.
    double growth = 0.0;
};

struct ZeroLimits {
    OneSidedLimit minus;
    OneSidedLimit plus;
    std::optional<Level> at_zero;
};

/// One-sided limits of E_N and of its difference quotients over
/// eps_k = eps0 2^-k, k = 0..halvings, by geometric (Aitken-type)
/// extrapolation.  Throws ConvergenceError if a sequence does not settle.
ZeroLimits limits_at_zero(const FamilySpec& family, std::size_t level, const LimitOptions& options = {});

enum class TransitionKind { Analytic, FirstOrder, SecondOrder, InfiniteOrder };

std::string_view to_string(TransitionKind k);

/// E(a) - E_ref on one side at |a| = probe_start 2^(-k/2), with the best
/// straight line of log|dE| - p log|a| against -|a|^-q (q scanned).
struct InstantonProbe {
    double side = 1.0;
    double reference = 0.0;
    std::vector<double> a;
    std::vector<double> delta;
    std::vector<double> errors;
    /// Points used: the resolvable ones closest to a = 0, at most six.
    std::size_t used = 0;
    double q = 0.0;
    double correlation = 0.0;
    /// d log|dE| / d log|a| between the two innermost used points.
    double slope = 0.0;
    bool instanton_like = false;
    bool ambiguous = false;
};

struct ClassifyOptions {
    LimitOptions limits;
    double tol_jump = 1e-3;
    double tol_deriv = 1e-2;
    double correlation = 0.999;
    /// Minimum local log-log slope for exponential flatness.
    double min_slope = 6.0;
    double probe_start = 0.5;
    std::size_t probe_points = 16;
};

struct TransitionClass {
    TransitionKind kind = TransitionKind::Analytic;
    ZeroLimits limits;
    double jump = 0.0;
    double jump_error = 0.0;
    double derivative_gap = 0.0;  // infinite when a side diverges
    double derivative_gap_error = 0.0;
    std::optional<InstantonProbe> minus_probe;
    std::optional<InstantonProbe> plus_probe;
};

/// FirstOrder if any two of E-, E+, E(0) differ by more than tol_jump; else
/// SecondOrder if D- and D+ differ by more than tol_deriv or one diverges;
/// else InfiniteOrder if a side deviates from E(0) like exp(-c/|a|^q)
/// (correlation above threshold and log-log slope above min_slope);
/// else Analytic.  Evidence too close to a threshold raises UnresolvedError.
TransitionClass classify(const FamilySpec& family, std::size_t level, const ClassifyOptions& options = {});

enum class FitModel { PowerLaw, Instanton };

std::string_view to_string(FitModel m);

struct FitResult {
    FitModel model = FitModel::PowerLaw;
    double beta = 0.0, beta_error = 0.0;
    double p = 0.0, p_error = 0.0;
    double alpha = 0.0, alpha_error = 0.0;
    double q = 0.0;
    double residual_rms = 0.0;  // in log E
    double a_lo = 0.0, a_hi = 0.0;
    std::size_t points = 0;
    /// Instanton only: samples left out because E did not exceed 10x its
    /// error estimate.
    std::size_t dropped = 0;
    /// Instanton only: change in log E across the window carried by a
    /// quadratic term, and whether that term is statistically significant.
    double curvature = 0.0;
    bool curvature_dominant = false;
};

/// log E = log beta + p log|a| by least squares; p fixed when given.
FitResult fit_power_law(std::span<const Sample> samples, std::optional<double> p = std::nullopt);

/// log E - p log|a| = log beta - alpha (b / |a|^q), p and q fixed.  Samples
/// whose energy is not resolved above its error are skipped (`dropped`).
FitResult fit_instanton(std::span<const Sample> samples, double b, double p, double q);

/// Default fit windows (a_lo < a_hi, one side of zero).
std::pair<double, double> default_power_window(const FamilySpec& family);
std::pair<double, double> default_instanton_window(const FamilySpec& family);

struct DegeneracyPair {
    std::size_t n = 0;
    double upper = 0.0;  // E^(N+1) of the sector with the zero mode, or E_B^(N)
    double lower = 0.0;  // E^(N) of the partner, or E_F^(N)
    double difference = 0.0;
};

struct DegeneracyReport {
    SusyClass susy = SusyClass::Broken;
    std::vector<double> bosonic;
    std::vector<double> fermionic;
    std::vector<DegeneracyPair> pairs;
    std::optional<double> zero_energy;
    double max_difference = 0.0;
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Exact SUSY: the zero-mode sector's E^(N+1) equals the partner's E^(N)
/// for N < K and its E^(0) vanishes.  Broken: E_B^(N) = E_F^(N) for N < K.
DegeneracyReport check_degeneracy(const Superpotential& w, std::size_t levels, double tol = 1e-6);

/// Rayleigh-Schroedinger coefficients of the family's ground energy in a
/// about a = 0: V = V0 + a W1 + a^2 W2 for the chosen sector.
PtCoefficients family_pt_coefficients(const FamilySpec& family, std::size_t n_states, double tol = 1e-10);

}  // namespace susyqm
