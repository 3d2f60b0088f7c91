#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vecr/canonical.hpp"
#include "vecr/printer.hpp"
#include "vecr/term.hpp"
#include "vecr/type.hpp"

namespace vecr {

// A typing derivation is an explicit proof tree.  Each node states one rule
// instance with its full conclusion, so `validate` can replay every step
// without re-running inference.  The nine rules:
//
//   Ax       Γ,x:U ⊢ x : U
//   Equiv    from Γ ⊢ t : T conclude Γ ⊢ t : R when R and T are equivalent
//   ArrowI   from Γ,x:U ⊢ t : T conclude Γ ⊢ λx.t : U→T
//   ArrowE   from Γ ⊢ t : Σᵢ αᵢ·∀X⃗.(U→Tᵢ) and Γ ⊢ r : Σⱼ βⱼ·U[A⃗ⱼ/X⃗]
//            conclude Γ ⊢ (t)r : ΣᵢΣⱼ αᵢβⱼ·Tᵢ[A⃗ⱼ/X⃗]
//   ForallI  from Γ ⊢ t : Σᵢ αᵢ·Uᵢ with X not free in Γ
//            conclude Γ ⊢ t : Σᵢ αᵢ·∀X.Uᵢ
//   ForallE  from Γ ⊢ t : Σᵢ αᵢ·∀X.Uᵢ conclude Γ ⊢ t : Σᵢ αᵢ·Uᵢ[A/X]
//   PlusI    from Γ ⊢ t : T and Γ ⊢ r : R conclude Γ ⊢ t+r : T+R
//   OneE     from Γ ⊢ 1·t : T conclude Γ ⊢ t : T
//   S        from Γ ⊢ t : Tᵢ for i=1..n conclude Γ ⊢ (Σαᵢ)·t : Σαᵢ·Tᵢ

enum class DerivRule { Ax, Equiv, ArrowI, ArrowE, ForallI, ForallE, PlusI, OneE, S };

const char* deriv_rule_name(DerivRule r);

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// Payload of an ArrowE node.  The function prefix X⃗ is recorded by its
// binder sorts; `dom` and `fn_cods` carry dangling indices into that prefix
// (index prefix.size()-1 is the outermost binder).  `arg_insts[j]` lists the
// instantiation A⃗ⱼ chosen for argument summand j, outermost binder first.
struct ArrowEPayload {
    std::vector<VarSort> prefix;
    UnitPtr dom;
    std::vector<Scalar> fn_coeffs;
    std::vector<TypePtr> fn_cods;
    std::vector<Scalar> arg_coeffs;
    std::vector<std::vector<TypeArg>> arg_insts;
};

struct Derivation {
    DerivRule rule;
    Context ctx;
    TermPtr term;
    TypePtr type;
    std::vector<DerivPtr> premises;

    std::string binder;            // ArrowI: name the body was opened with
    TyVar tyvar{};                 // ForallI: the variable being generalized
    TypeArg inst{};                // ForallE: the instantiation
    std::vector<Scalar> s_coeffs;  // S: one coefficient per premise
    ArrowEPayload arrow_e{};       // ArrowE
};

// Builders: each computes the conclusion from the premises and payload, so a
// derivation cannot drift out of sync with the rule it claims to apply.
DerivPtr d_ax(Context ctx, const std::string& name, UnitPtr u);
DerivPtr d_equiv(DerivPtr premise, TypePtr to);
// `conclusion` is the original abstraction node (keeps its annotation); the
// premise types the body opened with `binder`.
DerivPtr d_arrow_i(DerivPtr body, const std::string& binder, TermPtr conclusion);
DerivPtr d_arrow_e(DerivPtr fn, DerivPtr arg, ArrowEPayload payload);
DerivPtr d_forall_i(DerivPtr premise, const TyVar& v);
DerivPtr d_forall_e(DerivPtr premise, const TypeArg& a);
DerivPtr d_plus_i(DerivPtr left, DerivPtr right);
DerivPtr d_one_e(DerivPtr premise);
DerivPtr d_s(std::vector<DerivPtr> premises, std::vector<Scalar> coeffs);

// Instantiates a ∀-prefix: substitutes args (outermost binder first) for the
// dangling indices of a type peeled out of that prefix.
UnitPtr open_prefix_unit(const UnitPtr& u, const std::vector<TypeArg>& args);
TypePtr open_prefix_type(const TypePtr& t, const std::vector<TypeArg>& args);

struct ValidationResult {
    bool ok = true;
    std::string error;  // first failing node: rule name + reason
    explicit operator bool() const { return ok; }
};

// Replays every node against its literal rule: premise shapes, side
// conditions, payload consistency, and the stated conclusion.
ValidationResult validate(const DerivPtr& d);

// Indented tree, one node per line: "rule  Γ ⊢ term : type".
std::string render_derivation(const DerivPtr& d, const PrintOpts& opts = {});

}  // namespace vecr
