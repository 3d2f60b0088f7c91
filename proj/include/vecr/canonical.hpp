#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vecr/scalar.hpp"
#include "vecr/term.hpp"
#include "vecr/type.hpp"

namespace vecr {

// Typing context: term variables bound to unit types, innermost last.
using Context = std::vector<std::pair<std::string, UnitPtr>>;

// Innermost binding for `name`, or nullptr.
const UnitPtr* ctx_lookup(const Context& ctx, const std::string& name);

// Free type variables of all types in the context, first occurrence first.
std::vector<TyVar> ctx_free_type_vars(const Context& ctx);

bool ctx_mentions(const Context& ctx, const TyVar& v);

// Every type is equivalent to a sum of scaled distinct unit types plus scaled
// distinct general variables.  CanonicalType is that normal form: coefficients
// are explicit (including 1) and zero coefficients are kept, because the
// equivalence axioms provide no way to drop a 0-scaled summand.
struct CanonEntry {
    Scalar coeff;
    TypePtr core;  // TypeKind::Unit (with canonical subterms) or BGVar/FGVar
};

struct CanonicalType {
    std::vector<CanonEntry> units;  // distinct unit cores, sorted
    std::vector<CanonEntry> gvars;  // distinct general variables, sorted

    std::size_t size() const { return units.size() + gvars.size(); }
    bool has_gvars() const { return !gvars.empty(); }

    // All entries in canonical order (units first, then general variables).
    std::vector<CanonEntry> all() const;

    // Rebuilds the type: sum of explicit Scale entries in canonical order.
    TypePtr recon() const;

    Scalar total_weight() const;
};

// Normal form of a type under the equivalence axioms: scalars are multiplied
// through sums, nested scales are collapsed, syntactically equal cores are
// merged by adding coefficients, and unit subterms (arrow codomains, forall
// bodies) are normalized recursively.
CanonicalType canonicalize(const TypePtr& t);

// Unit type with all general-type positions inside it in canonical form.
UnitPtr canon_unit(const UnitPtr& u);

// recon(canonicalize(t)); idempotent up to structural equality.
TypePtr canonical_form(const TypePtr& t);

// Like canonical_form but drops explicit 1* coefficients, for display.
TypePtr display_form(const TypePtr& t);

// Decides the congruent equivalence generated by the scalar axioms
// (1*T = T, a*(b*T) = ab*T, a*T + a*R = a*(T+R), a*T + b*T = (a+b)*T)
// together with commutativity and associativity of +.
bool type_equiv(const TypePtr& a, const TypePtr& b);
bool unit_equiv(const UnitPtr& a, const UnitPtr& b);

// Weight of a type: unit types and general variables weigh 1, scaling
// multiplies, sums add.  Invariant under type equivalence.
Scalar weight_type(const TypePtr& t);

struct NotAValue : Error {
    explicit NotAValue(const std::string& msg) : Error("NotAValue", msg) {}
};

// Weight of a value-shaped term: basis terms (variables and abstractions)
// weigh 1, scaling multiplies, sums add.  Throws NotAValue on applications.
Scalar weight_value(const TermPtr& t);

}  // namespace vecr
