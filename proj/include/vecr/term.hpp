#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vecr/type.hpp"

namespace vecr {

// Terms of the calculus: variables, abstractions, applications, scalar
// multiples and sums. There is deliberately no null-vector term and no
// automatic simplification: 0*t and 1*t are ordinary terms until a rewrite
// rule touches them. Sums are flattened multisets kept in a canonical order,
// and binders use de Bruijn indices (names are printing hints), so
// alpha-equivalence is structural equality.

struct TermNode;
using TermPtr = std::shared_ptr<const TermNode>;

enum class TermKind { BVar, FVar, Abs, App, Scale, Sum };

struct TermNode {
    TermKind kind;
    int index = 0;               // BVar
    std::string name;            // FVar; Abs binder hint
    UnitPtr ann;                 // Abs annotation, may be null
    TermPtr a;                   // Abs body; App function; Scale body
    TermPtr b;                   // App argument
    Scalar coeff;                // Scale
    std::vector<TermPtr> parts;  // Sum: flattened, sorted, size >= 2
};

TermPtr bvar(int index);
TermPtr fvar(std::string name);
TermPtr abs(std::string hint, UnitPtr ann, TermPtr body);
TermPtr app(TermPtr f, TermPtr arg);
TermPtr scale(Scalar k, TermPtr body);
TermPtr sum(std::vector<TermPtr> parts);  // flattens; singleton collapses

// Total order ignoring binder hints and annotations; 0 means alpha-equal.
int term_cmp(const TermPtr& a, const TermPtr& b);
inline bool alpha_eq(const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) == 0; }

// Free term variables in first-occurrence order.
std::vector<std::string> free_vars(const TermPtr& t);
bool mentions(const TermPtr& t, const std::string& name);

// Basis terms are variables and abstractions.
inline bool is_basis(const TermPtr& t) {
    return t->kind == TermKind::BVar || t->kind == TermKind::FVar || t->kind == TermKind::Abs;
}

TermPtr shift_term(const TermPtr& t, int d, int cutoff = 0);

// Capture-avoiding substitution of the free variable `name`. The replacement
// must be a standalone term; bound variables cannot capture its free names.
TermPtr subst_free(const TermPtr& t, const std::string& name, const TermPtr& repl);

// Beta-instantiation of an abstraction body: bound index 0 becomes `arg`
// (shifted as it moves under binders), outer indices shift down by one.
TermPtr open_binder(const TermPtr& body, const TermPtr& arg);

// Replaces free variable `name` by bound index `depth`.
TermPtr close_term(const TermPtr& t, const std::string& name, int depth);

int term_size(const TermPtr& t);
bool term_locally_closed(const TermPtr& t, int depth = 0);

}  // namespace vecr
