#pragma once

#include <optional>
#include <string>

#include "vecr/canonical.hpp"
#include "vecr/derivation.hpp"

namespace vecr {

enum class TypeFailKind {
    UnboundVariable,     // term variable not bound in the context
    SortMismatch,        // a general type where a unit type is required
    AnnotationRequired,  // a binder's type had to be guessed and then used
    NoDerivation,        // no rule combination fits the goal
    BudgetExceeded,      // a bounded search ran out of budget
};

const char* type_fail_kind_name(TypeFailKind k);

struct TypeFailure {
    TypeFailKind kind;
    std::string message;  // the first unsatisfiable obligation encountered
};

struct SynthResult {
    TypePtr type;    // canonical form; null on failure
    DerivPtr deriv;  // concludes exactly `type`
    std::optional<TypeFailure> failure;
    explicit operator bool() const { return deriv != nullptr; }
};

struct CheckResult {
    DerivPtr deriv;  // concludes exactly the goal as written
    std::optional<TypeFailure> failure;
    explicit operator bool() const { return deriv != nullptr; }
};

struct InferLimits {
    // Steps shared by all bounded searches of one call (summand partitions,
    // matcher backtracking); exhausting it reports BudgetExceeded.
    long budget = 500000;
    // Splitting searches are exhaustive only up to this many canonical goal
    // summands; larger goals report BudgetExceeded instead of guessing.
    std::size_t max_split_entries = 8;
};

// Annotation-driven type reconstruction.  Unannotated binders receive fresh
// unit variables; each maximal lambda chain is universally generalized over
// the type variables its arrow type introduces; applications are resolved by
// matching the argument's type against the function's domain (instantiating
// forall prefixes on either side as needed).  Deterministic: equal inputs
// give equal derivations.
SynthResult synthesize(const Context& ctx, const TermPtr& t, const InferLimits& limits = {});

// Goal-directed checking.  Binder annotations are ignored — the goal dictates
// every domain — so one term can be checked at each type it inhabits.  Sums
// and scaled terms search over goal splits (bounded by the limits).
CheckResult check(const Context& ctx, const TermPtr& t, const TypePtr& goal,
                  const InferLimits& limits = {});

}  // namespace vecr
