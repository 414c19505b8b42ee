#pragma once

// Textual potentials and superpotentials.
//
//   expr   := sign? term (('+' | '-') term)*
//   term   := number ('*'? atom)? | atom
//   atom   := 'x' ('^' integer)? | '|x|' ('^' number)?
//
// Whitespace is ignored between tokens.  The only variable is x.

#include <string>
#include <string_view>
#include <vector>

#include "susyqm/superpotential.hpp"

namespace susyqm {

enum class FactorKind { Literal, Power, AbsPower };

struct ExprTerm {
    double coeff = 1.0;
    FactorKind kind = FactorKind::Literal;
    double power = 0.0;  // unused for literals

    friend bool operator==(const ExprTerm&, const ExprTerm&) = default;
};

/// Terms in source order, unmerged.
struct ExpressionAst {
    std::vector<ExprTerm> terms;

    friend bool operator==(const ExpressionAst&, const ExpressionAst&) = default;
};

/// Throws ParseError with the 0-based offset of the offending character.
ExpressionAst parse_expression(std::string_view text);

/// Shortest round-trip coefficients, so parse_expression(print(ast)) == ast.
std::string print(const ExpressionAst& ast);

Potential to_potential(const ExpressionAst& ast);

/// Only x^k terms and literals; DomainError on |x|^m.
Superpotential to_superpotential(const ExpressionAst& ast);

Potential parse_potential(std::string_view text);
Superpotential parse_superpotential(std::string_view text);

}  // namespace susyqm
