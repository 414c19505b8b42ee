#pragma once

// Polynomial superpotentials w(x) and the partner potentials V_B = w^2 - w',
// V_F = w^2 + w' they generate.  Units: hbar = 1, m = 1/2, so the kinetic
// term of every Hamiltonian in this library is -d^2/dx^2.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace susyqm {

/// One monomial: coeff * x^power, or coeff * |x|^power when `absolute` is set.
/// Non-absolute terms must have a non-negative integer power.
struct PolyTerm {
    double coeff = 0.0;
    double power = 0.0;
    bool absolute = false;

    friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

/// A potential V(x) = sum of terms + constant, optionally confined by hard
/// walls at x = -L and x = +L.
///
/// Terms are kept in canonical form: like powers merged, zero coefficients
/// dropped, |x|^k with even integer k folded into x^k, sorted by descending
/// power.  Two potentials compare equal iff their canonical forms match
/// exactly, which is what the partner-duality checks rely on.
class Potential {
public:
    Potential() : Potential(std::vector<PolyTerm>{}) {}
    explicit Potential(std::vector<PolyTerm> terms, double constant = 0.0,
                       std::optional<double> wall = std::nullopt);

    /// c[0] + c[1] x + c[2] x^2 + ...
    static Potential polynomial(std::span<const double> coeffs);

    /// Evaluated in extended precision; cancellation between large terms
    /// (far wells of the broken-SUSY families) otherwise costs digits.
    double operator()(double x) const;

    const std::vector<PolyTerm>& terms() const noexcept { return terms_; }
    double constant() const noexcept { return constant_; }
    std::optional<double> wall() const noexcept { return wall_; }
    Potential with_wall(double half_width) const;

    bool is_polynomial() const noexcept;
    bool is_even() const noexcept;
    bool has_absolute_terms() const noexcept { return !is_polynomial(); }

    /// Dense coefficients, index = power.  Only for is_polynomial().
    std::vector<double> coefficients() const;

    /// Highest-power term, if any.
    std::optional<PolyTerm> leading_term() const;

    /// True when a hard wall is present or V -> +inf as |x| -> inf.
    bool confining() const noexcept;

    Potential operator+(const Potential& other) const;
    Potential operator*(double s) const;

    /// Canonical terms, constant and wall; the evaluation form is ignored.
    friend bool operator==(const Potential& a, const Potential& b) noexcept {
        return a.terms_ == b.terms_ && a.constant_ == b.constant_ && a.wall_ == b.wall_;
    }

    std::string to_string() const;

private:
    friend struct PartnerPotentials partner_potentials(const class Superpotential& w);

    void canonicalize();
    void rebuild_cache();

    std::vector<PolyTerm> terms_;
    double constant_ = 0.0;
    std::optional<double> wall_;

    // Horner cache for integer-power terms (constant included at index 0).
    std::vector<long double> dense_;
    std::vector<PolyTerm> absolute_;
    // Partner potentials are evaluated as w^2 + slope_sign w' from w itself:
    // expanding the square cancels badly where w is small but x is large.
    std::vector<long double> factor_;
    long double slope_sign_ = 0.0L;
};

/// V(-x).
Potential mirror(const Potential& v);

/// w(x) = sum_k c_k x^k with integer k.  Trailing zero coefficients are
/// trimmed, so the zero superpotential has no coefficients.
class Superpotential {
public:
    Superpotential() = default;
    explicit Superpotential(std::vector<double> coeffs);

    static Superpotential monomial(double coeff, int power);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double coefficient(int k) const noexcept;
    double leading_coefficient() const noexcept;

    double operator()(double x) const;

    Superpotential operator-() const;
    Superpotential operator+(const Superpotential& other) const;
    Superpotential operator*(double s) const;
    Superpotential operator*(const Superpotential& other) const;

    friend bool operator==(const Superpotential&, const Superpotential&) = default;

    Potential as_potential() const;
    std::string to_string() const;

private:
    void trim();
    std::vector<double> coeffs_;
};

Superpotential derivative(const Superpotential& w);

/// phi(x) = int_0^x w, so the bosonic zero mode is exp(-phi).
Superpotential zero_mode_exponent(const Superpotential& w);

struct PartnerPotentials {
    Potential bosonic;    // w^2 - w'
    Potential fermionic;  // w^2 + w'
};

PartnerPotentials partner_potentials(const Superpotential& w);

/// V_B[w] == V_F[-w], coefficient by coefficient.
bool duality_holds(const Superpotential& w);

enum class SusyClass { ExactBosonic, ExactFermionic, Broken };

std::string_view to_string(SusyClass c);

/// Normalizability of exp(-phi) / exp(+phi).  Throws DomainError for w = 0.
SusyClass classify_susy(const Superpotential& w);

}  // namespace susyqm
