#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vecr/scalar.hpp"

namespace vecr {

// Types are two-sorted. Unit types U are the arguments functions take;
// general types T are linear combinations of unit types and general
// variables. Bound type variables are de Bruijn indices into the chain of
// enclosing foralls (each binder carries the sort it binds); free type
// variables are names. With sums kept flattened and sorted, structural
// equality is alpha-equivalence.

enum class VarSort { Unit, General };

struct UnitType;
struct Type;
using UnitPtr = std::shared_ptr<const UnitType>;
using TypePtr = std::shared_ptr<const Type>;

enum class UnitKind { BVar, FVar, Arrow, Forall };

struct UnitType {
    UnitKind kind;
    int index = 0;          // BVar
    std::string name;       // FVar; Forall binder hint
    UnitPtr dom;            // Arrow
    TypePtr cod;            // Arrow
    VarSort binder_sort{};  // Forall
    UnitPtr body;           // Forall
};

enum class TypeKind { Unit, BGVar, FGVar, Scale, Sum };

struct Type {
    TypeKind kind;
    UnitPtr unit;              // Unit
    int index = 0;             // BGVar
    std::string name;          // FGVar
    Scalar coeff;              // Scale
    TypePtr body;              // Scale
    std::vector<TypePtr> parts;  // Sum: flattened, sorted, size >= 2
};

UnitPtr ubvar(int index);
UnitPtr ufvar(std::string name);
UnitPtr arrow(UnitPtr dom, TypePtr cod);
UnitPtr forall(VarSort sort, std::string hint, UnitPtr body);

TypePtr tunit(UnitPtr u);
TypePtr tgvar_b(int index);
TypePtr tgvar_f(std::string name);
TypePtr tscale(Scalar k, TypePtr body);
TypePtr tsum(std::vector<TypePtr> parts);  // flattens; singleton collapses

// Total order ignoring binder hints; 0 means alpha-equal.
int unit_cmp(const UnitPtr& a, const UnitPtr& b);
int type_cmp(const TypePtr& a, const TypePtr& b);
inline bool unit_alpha_eq(const UnitPtr& a, const UnitPtr& b) { return unit_cmp(a, b) == 0; }
inline bool type_alpha_eq(const TypePtr& a, const TypePtr& b) { return type_cmp(a, b) == 0; }

// A free type variable reference (name + sort).
struct TyVar {
    std::string name;
    VarSort sort;
    bool operator==(const TyVar& o) const { return name == o.name && sort == o.sort; }
};

// Free variables in first-occurrence order (left to right, outside in).
std::vector<TyVar> free_type_vars(const TypePtr& t);
std::vector<TyVar> free_type_vars_unit(const UnitPtr& u);
bool type_mentions(const TypePtr& t, const TyVar& v);
bool unit_mentions(const UnitPtr& u, const TyVar& v);

// Shift dangling de Bruijn indices >= cutoff by d.
UnitPtr shift_unit(const UnitPtr& u, int d, int cutoff = 0);
TypePtr shift_type(const TypePtr& t, int d, int cutoff = 0);

// Capture-avoiding substitution of a free variable. The replacement must be
// a standalone type (no dangling indices), so no shifting of it is needed.
// Substituting a general type for a unit variable is a sort error the caller
// must rule out; these overloads keep the sorts straight by construction.
UnitPtr subst_unit_in_unit(const UnitPtr& u, const std::string& name, const UnitPtr& repl);
TypePtr subst_unit_in_type(const TypePtr& t, const std::string& name, const UnitPtr& repl);
UnitPtr subst_gen_in_unit(const UnitPtr& u, const std::string& name, const TypePtr& repl);
TypePtr subst_gen_in_type(const TypePtr& t, const std::string& name, const TypePtr& repl);

// Instantiation payload for opening a forall: exactly one of the two is set,
// matching the binder's sort.
struct TypeArg {
    VarSort sort;
    UnitPtr unit;   // sort == Unit
    TypePtr gen;    // sort == General
};
bool type_arg_eq(const TypeArg& a, const TypeArg& b);

// Opens the body of forall(sort, _, body): bound index 0 is replaced by the
// argument (which may itself contain dangling indices; they are shifted on
// the way down), remaining dangling indices are shifted down by one.
UnitPtr open_forall(const UnitPtr& body, const TypeArg& arg);

// Same, for a general type standing under the binder (e.g. the codomain of a
// quantified arrow whose dangling indices are being instantiated).
TypePtr open_forall_type(const TypePtr& t, const TypeArg& arg);

// Replaces free variable `name` by bound index `depth` (used when building
// binders from parsed names).
UnitPtr close_unit(const UnitPtr& u, const TyVar& v, int depth);
TypePtr close_type(const TypePtr& t, const TyVar& v, int depth);

// Size of the syntax tree (used to bound oracles and generators).
int type_size(const TypePtr& t);
int unit_size(const UnitPtr& u);

// True if no dangling de Bruijn index >= depth occurs.
bool unit_locally_closed(const UnitPtr& u, int depth = 0);
bool type_locally_closed(const TypePtr& t, int depth = 0);

}  // namespace vecr
