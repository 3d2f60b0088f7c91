#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vecr/term.hpp"
#include "vecr/type.hpp"

namespace vecr {

struct ParseError : Error {
    int line, col;
    ParseError(int l, int c, const std::string& msg)
        : Error("ParseError", std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          col(c) {}
};

struct SortError : Error {
    explicit SortError(const std::string& msg) : Error("SortError", msg) {}
};

// Concrete syntax (ASCII; the lexer also accepts the Unicode spellings
// of lambda, the scaling dot, forall and the arrow):
//
//   term   := sum
//   sum    := scaled ('+' scaled)*
//   scaled := [scalar '*'] chain          -- chain of juxtaposed atoms
//   atom   := var | '\' var [':' unit] '.' term | '(' term ')'
//
//   type   := tsum
//   tsum   := tscaled ('+' tscaled)*
//   tscaled:= [scalar '*'] tatom
//   tatom  := UNITVAR | %GENVAR | tatom '->' type
//           | 'forall' tvars '.' tatom | '(' type ')'
//
// Scalar literals cover n, n/m, sqrt2, n/sqrt2, n*sqrt2 and +/- and */
// combinations; a scalar expression is consumed greedily, so nested scaling
// must be written with parentheses: 2*(3*x).
//
// `prelude` maps names to closed terms (the CLI uses it for true/false/H
// and for repl let-bindings). A lambda binder in the input shadows a
// prelude name; otherwise the name parses to its definition.
using Prelude = std::vector<std::pair<std::string, TermPtr>>;

TermPtr parse_term(const std::string& text, const Prelude* prelude = nullptr);
TypePtr parse_type(const std::string& text);
UnitPtr parse_unit_type(const std::string& text);  // SortError if not a unit type

// '[a, b; c, d]' rows-by-columns and '(a, b)' literals used by the CLI.
std::vector<std::vector<Scalar>> parse_matrix_literal(const std::string& text);
std::vector<Scalar> parse_vector_literal(const std::string& text);

// True if the text uses any of the Unicode spellings the lexer accepts.
bool has_unicode_syntax(const std::string& text);

}  // namespace vecr
