#include "susyqm/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "susyqm/errors.hpp"
#include "susyqm/format.hpp"

namespace susyqm {

namespace {

constexpr int kMaxPower = 128;

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    ExpressionAst run() {
        ExpressionAst ast;
        skip();
        double sign = 1.0;
        if (peek() == '-' || peek() == '+') {
            sign = take() == '-' ? -1.0 : 1.0;
        }
        ast.terms.push_back(term(sign));
        for (;;) {
            skip();
            if (at_end()) break;
            const char c = peek();
            if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
            take();
            ast.terms.push_back(term(c == '-' ? -1.0 : 1.0));
        }
        return ast;
    }

private:
    ExprTerm term(double sign) {
        skip();
        ExprTerm t;
        t.coeff = sign;
        bool have_number = false;
        if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
            t.coeff = sign * number();
            have_number = true;
            skip();
            if (peek() == '*') {
                take();
                skip();
                if (!atom_ahead()) fail(at_end() ? "expected x or |x| after '*'" : "expected x or |x| after '*'");
            }
        }
        if (atom_ahead()) {
            atom(t);
        } else if (!have_number) {
            if (at_end()) fail("expected a term");
            if (std::isalpha(static_cast<unsigned char>(peek()))) unknown_identifier();
            fail(std::string("unexpected '") + peek() + "'");
        }
        return t;
    }

    bool atom_ahead() {
        if (peek() == '|') return true;
        if (std::isalpha(static_cast<unsigned char>(peek()))) {
            if (peek() == 'x' && !std::isalnum(static_cast<unsigned char>(peek(1))) && peek(1) != '_') return true;
            unknown_identifier();
        }
        return false;
    }

    void atom(ExprTerm& t) {
        if (peek() == '|') {
            take();
            skip();
            if (peek() != 'x') {
                if (std::isalpha(static_cast<unsigned char>(peek()))) unknown_identifier();
                fail("expected x inside |...|");
            }
            take();
            skip();
            if (peek() != '|') fail("expected closing '|'");
            take();
            t.kind = FactorKind::AbsPower;
            t.power = 1.0;
            skip();
            if (peek() == '^') {
                take();
                skip();
                const std::size_t at = pos_;
                t.power = number();
                if (!(t.power > 0.0)) fail_at(at, "|x| exponent must be positive");
            }
            return;
        }
        take();  // x
        t.kind = FactorKind::Power;
        t.power = 1.0;
        skip();
        if (peek() == '^') {
            take();
            skip();
            const std::size_t at = pos_;
            if (peek() == '-') fail("x exponent must be a non-negative integer");
            const double k = number();
            if (k != std::floor(k) || k > kMaxPower)
                fail_at(at, "x exponent must be an integer in [0, " + std::to_string(kMaxPower) + "]");
            t.power = k;
        }
    }

    double number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                take();
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (peek() == '.') {
            take();
            n += digits();
        }
        if (n == 0) fail_at(start, "expected a number");
        if (peek() == 'e' || peek() == 'E') {
            const std::size_t mark = pos_;
            take();
            if (peek() == '+' || peek() == '-') take();
            if (digits() == 0) fail_at(mark, "malformed exponent");
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
        if (ec != std::errc{} || ptr != s_.data() + pos_ || !std::isfinite(value)) fail_at(start, "number out of range");
        return value;
    }

    [[noreturn]] void unknown_identifier() {
        const std::size_t start = pos_;
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') name += take();
        fail_at(start, "unknown identifier '" + name + "' (the only variable is x)");
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const { throw ParseError(msg, at); }

    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
    char take() { return s_[pos_++]; }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

ExpressionAst parse_expression(std::string_view text) { return Parser(text).run(); }

std::string print(const ExpressionAst& ast) {
    std::string out;
    for (std::size_t i = 0; i < ast.terms.size(); ++i) {
        const ExprTerm& t = ast.terms[i];
        const bool negative = std::signbit(t.coeff);
        const double mag = std::fabs(t.coeff);
        if (i == 0) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        std::string atom;
        if (t.kind == FactorKind::Power) {
            atom = t.power == 1.0 ? "x" : "x^" + format_shortest(t.power);
        } else if (t.kind == FactorKind::AbsPower) {
            atom = "|x|^" + format_shortest(t.power);
        }
        if (atom.empty()) {
            out += format_shortest(mag);
        } else if (mag == 1.0) {
            out += atom;
        } else {
            out += format_shortest(mag) + "*" + atom;
        }
    }
    return out;
}

Potential to_potential(const ExpressionAst& ast) {
    std::vector<PolyTerm> terms;
    double constant = 0.0;
    for (const auto& t : ast.terms) {
        if (t.kind == FactorKind::Literal || (t.kind == FactorKind::Power && t.power == 0.0)) {
            constant += t.coeff;
        } else {
            terms.push_back({t.coeff, t.power, t.kind == FactorKind::AbsPower});
        }
    }
    return Potential(std::move(terms), constant);
}

Superpotential to_superpotential(const ExpressionAst& ast) {
    std::vector<double> coeffs;
    for (const auto& t : ast.terms) {
        if (t.kind == FactorKind::AbsPower) throw DomainError("a superpotential cannot contain |x|^m terms");
        const auto k = t.kind == FactorKind::Literal ? std::size_t{0} : static_cast<std::size_t>(t.power);
        if (coeffs.size() <= k) coeffs.resize(k + 1, 0.0);
        coeffs[k] += t.coeff;
    }
    return Superpotential(std::move(coeffs));
}

Potential parse_potential(std::string_view text) { return to_potential(parse_expression(text)); }

Superpotential parse_superpotential(std::string_view text) { return to_superpotential(parse_expression(text)); }

}  // namespace susyqm
