#include "susyqm/superpotential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "susyqm/errors.hpp"
#include "susyqm/format.hpp"

namespace susyqm {

namespace {

bool is_integer(double p) { return std::floor(p) == p; }

bool is_even_integer(double p) { return is_integer(p) && std::fmod(p, 2.0) == 0.0; }

// Appends "+ c*atom" / "- c*atom" using the expression grammar accepted by the
// parser, so printed potentials can be fed back to the CLI.
void append_term(std::string& out, double coeff, const std::string& atom) {
    const bool negative = std::signbit(coeff);
    const double mag = std::fabs(coeff);
    if (out.empty()) {
        if (negative) out += "-";
    } else {
        out += negative ? " - " : " + ";
    }
    if (atom.empty()) {
        out += format_shortest(mag);
    } else if (mag == 1.0) {
        out += atom;
    } else {
        out += format_shortest(mag) + "*" + atom;
    }
}

std::string int_atom(int k) { return k == 1 ? "x" : "x^" + std::to_string(k); }

}  // namespace

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(std::vector<PolyTerm> terms, double constant, std::optional<double> wall)
    : terms_(std::move(terms)), constant_(constant), wall_(wall) {
    if (!std::isfinite(constant_)) throw DomainError("potential constant must be finite");
    if (wall_ && !(*wall_ > 0.0 && std::isfinite(*wall_)))
        throw DomainError("hard-wall half-width must be positive and finite");
    canonicalize();
    rebuild_cache();
}

Potential Potential::polynomial(std::span<const double> coeffs) {
    std::vector<PolyTerm> terms;
    double c0 = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k == 0) {
            c0 = coeffs[0];
        } else {
            terms.push_back({coeffs[k], static_cast<double>(k), false});
        }
    }
    return Potential(std::move(terms), c0);
}

void Potential::canonicalize() {
    std::map<std::pair<double, bool>, double> merged;
    for (const auto& t : terms_) {
        if (!std::isfinite(t.coeff)) throw DomainError("potential coefficient must be finite");
        if (!(t.power >= 0.0) || !std::isfinite(t.power))
            throw DomainError("potential powers must be finite and non-negative");
        if (!t.absolute && !is_integer(t.power))
            throw DomainError("non-integer power requires an |x| term");
        if (t.power == 0.0) {
            constant_ += t.coeff;
            continue;
        }
        const bool absolute = t.absolute && !is_even_integer(t.power);
        merged[{t.power, absolute}] += t.coeff;
    }
    terms_.clear();
    for (const auto& [key, coeff] : merged) {
        if (coeff != 0.0) terms_.push_back({coeff, key.first, key.second});
    }
    std::sort(terms_.begin(), terms_.end(), [](const PolyTerm& a, const PolyTerm& b) {
        if (a.power != b.power) return a.power > b.power;
        return !a.absolute && b.absolute;
    });
}

void Potential::rebuild_cache() {
    dense_.clear();
    absolute_.clear();
    int max_power = 0;
    for (const auto& t : terms_) {
        if (!t.absolute) max_power = std::max(max_power, static_cast<int>(t.power));
    }
    dense_.assign(static_cast<std::size_t>(max_power) + 1, 0.0L);
    dense_[0] = constant_;
    for (const auto& t : terms_) {
        if (t.absolute) {
            absolute_.push_back(t);
        } else {
            dense_[static_cast<std::size_t>(t.power)] += t.coeff;
        }
    }
}

double Potential::operator()(double x) const {
    const long double xl = x;
    if (!factor_.empty()) {
        long double w = 0.0L, dw = 0.0L;
        for (auto it = factor_.rbegin(); it != factor_.rend(); ++it) {
            dw = dw * xl + w;
            w = w * xl + *it;
        }
        return static_cast<double>(w * w + slope_sign_ * dw);
    }
    long double acc = 0.0L;
    for (auto it = dense_.rbegin(); it != dense_.rend(); ++it) acc = acc * xl + *it;
    if (!absolute_.empty()) {
        const long double ax = std::fabs(xl);
        for (const auto& t : absolute_) acc += t.coeff * std::pow(ax, static_cast<long double>(t.power));
    }
    return static_cast<double>(acc);
}

Potential Potential::with_wall(double half_width) const {
    Potential out(terms_, constant_, half_width);
    out.factor_ = factor_;
    out.slope_sign_ = slope_sign_;
    return out;
}

bool Potential::is_polynomial() const noexcept {
    return std::none_of(terms_.begin(), terms_.end(), [](const PolyTerm& t) { return t.absolute; });
}

bool Potential::is_even() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const PolyTerm& t) { return t.absolute || is_even_integer(t.power); });
}

std::vector<double> Potential::coefficients() const {
    if (!is_polynomial()) throw DomainError("potential has |x|^m terms; no dense form");
    std::vector<double> out(dense_.size());
    std::transform(dense_.begin(), dense_.end(), out.begin(),
                   [](long double v) { return static_cast<double>(v); });
    return out;
}

std::optional<PolyTerm> Potential::leading_term() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front();
}

bool Potential::confining() const noexcept {
    if (wall_) return true;
    // Highest power with non-vanishing coefficient along each direction.
    auto asymptotic = [this](double sign) {
        std::map<double, double, std::greater<>> by_power;
        for (const auto& t : terms_) {
            const bool odd = !t.absolute && !is_even_integer(t.power);
            by_power[t.power] += (odd && sign < 0) ? -t.coeff : t.coeff;
        }
        for (const auto& [p, c] : by_power) {
            if (c != 0.0) return std::pair{p, c};
        }
        return std::pair{0.0, 0.0};
    };
    const auto [pp, cp] = asymptotic(1.0);
    const auto [pm, cm] = asymptotic(-1.0);
    return pp > 0.0 && cp > 0.0 && pm > 0.0 && cm > 0.0;
}

Potential Potential::operator+(const Potential& other) const {
    std::vector<PolyTerm> terms = terms_;
    terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
    std::optional<double> wall = wall_;
    if (other.wall_) wall = wall ? std::min(*wall, *other.wall_) : *other.wall_;
    return Potential(std::move(terms), constant_ + other.constant_, wall);
}

Potential Potential::operator*(double s) const {
    std::vector<PolyTerm> terms = terms_;
    for (auto& t : terms) t.coeff *= s;
    return Potential(std::move(terms), constant_ * s, wall_);
}

std::string Potential::to_string() const {
    std::string out;
    for (const auto& t : terms_) {
        const std::string atom = t.absolute ? "|x|^" + format_shortest(t.power)
                                            : int_atom(static_cast<int>(t.power));
        append_term(out, t.coeff, atom);
    }
    if (constant_ != 0.0 || out.empty()) append_term(out, constant_, "");
    if (wall_) out += " in [-" + format_shortest(*wall_) + ", " + format_shortest(*wall_) + "]";
    return out;
}

Potential mirror(const Potential& v) {
    std::vector<PolyTerm> terms = v.terms();
    for (auto& t : terms) {
        if (!t.absolute && !is_even_integer(t.power)) t.coeff = -t.coeff;
    }
    return Potential(std::move(terms), v.constant(), v.wall());
}

// ---------------------------------------------------------------------------
// Superpotential

Superpotential::Superpotential(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw DomainError("superpotential coefficient must be finite");
    }
    trim();
}

Superpotential Superpotential::monomial(double coeff, int power) {
    if (power < 0) throw DomainError("superpotential powers must be non-negative");
    std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = coeff;
    return Superpotential(std::move(c));
}

void Superpotential::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Superpotential::coefficient(int k) const noexcept {
    if (k < 0 || k > degree()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

double Superpotential::leading_coefficient() const noexcept {
    return coeffs_.empty() ? 0.0 : coeffs_.back();
}

double Superpotential::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Superpotential Superpotential::operator-() const { return *this * -1.0; }

Superpotential Superpotential::operator+(const Superpotential& other) const {
    std::vector<double> c(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) c[k] += other.coeffs_[k];
    return Superpotential(std::move(c));
}

Superpotential Superpotential::operator*(double s) const {
    std::vector<double> c = coeffs_;
    for (auto& v : c) v *= s;
    return Superpotential(std::move(c));
}

Superpotential Superpotential::operator*(const Superpotential& other) const {
    if (is_zero() || other.is_zero()) return {};
    std::vector<double> c(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
    }
    return Superpotential(std::move(c));
}

Potential Superpotential::as_potential() const { return Potential::polynomial(coeffs_); }

std::string Superpotential::to_string() const {
    std::string out;
    for (int k = degree(); k >= 1; --k) {
        const double c = coeffs_[static_cast<std::size_t>(k)];
        if (c != 0.0) append_term(out, c, int_atom(k));
    }
    if (coefficient(0) != 0.0 || out.empty()) append_term(out, coefficient(0), "");
    return out;
}

Superpotential derivative(const Superpotential& w) {
    if (w.degree() < 1) return {};
    std::vector<double> c(static_cast<std::size_t>(w.degree()));
    for (int k = 1; k <= w.degree(); ++k) c[static_cast<std::size_t>(k - 1)] = k * w.coefficient(k);
    return Superpotential(std::move(c));
}

Superpotential zero_mode_exponent(const Superpotential& w) {
    if (w.is_zero()) return {};
    std::vector<double> c(static_cast<std::size_t>(w.degree()) + 2, 0.0);
    for (int k = 0; k <= w.degree(); ++k) c[static_cast<std::size_t>(k + 1)] = w.coefficient(k) / (k + 1);
    return Superpotential(std::move(c));
}

PartnerPotentials partner_potentials(const Superpotential& w) {
    const Superpotential square = w * w;
    const Superpotential slope = derivative(w);
    PartnerPotentials out{(square + (-slope)).as_potential(), (square + slope).as_potential()};
    const auto c = w.coefficients();
    out.bosonic.factor_.assign(c.begin(), c.end());
    out.bosonic.slope_sign_ = -1.0L;
    out.fermionic.factor_.assign(c.begin(), c.end());
    out.fermionic.slope_sign_ = 1.0L;
    return out;
}

bool duality_holds(const Superpotential& w) {
    return partner_potentials(w).bosonic == partner_potentials(-w).fermionic;
}

std::string_view to_string(SusyClass c) {
    switch (c) {
        case SusyClass::ExactBosonic: return "ExactBosonic";
        case SusyClass::ExactFermionic: return "ExactFermionic";
        case SusyClass::Broken: return "Broken";
    }
    return "?";
}

SusyClass classify_susy(const Superpotential& w) {
    if (w.is_zero()) throw DomainError("w = 0 is the free particle; no discrete spectrum");
    // phi has degree deg(w) + 1; exp(-/+ phi) decays on both sides only when
    // that degree is even, with the sign of the leading coefficient deciding
    // which sector owns the zero mode.
    if (w.degree() % 2 == 0) return SusyClass::Broken;
    return w.leading_coefficient() > 0.0 ? SusyClass::ExactBosonic : SusyClass::ExactFermionic;
}

}  // namespace susyqm
