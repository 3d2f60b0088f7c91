#pragma once

// Randomized checks of the calculus's metatheory, runnable from tests and
// from the command line: every established judgment is exercised against the
// reduction relation (type preservation, progress, termination, weight
// preservation) and the type equivalence is exercised against its defining
// axioms.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vecr/canonical.hpp"
#include "vecr/derivation.hpp"
#include "vecr/term.hpp"
#include "vecr/type.hpp"

namespace vecr {

struct GenConfig {
    std::uint64_t seed = 20250822;
    int cases = 200;           // property instances to attempt
    int max_depth = 6;         // term generator depth bound
    long fuel = 100000;        // reduction fuel per case
    int random_strategies = 10;  // extra random-order reduction runs per case
    bool closed = false;       // generate closed terms only
    long infer_budget = 200000;
};

// A generated, machine-checked judgment: `deriv` concludes ctx |- term : type
// and has passed the derivation validator.
struct TypedTerm {
    Context ctx;
    TermPtr term;
    TypePtr type;
    DerivPtr deriv;
};

// Draws one well-typed term (by generate-and-filter: candidate shapes are
// proposed, the type synthesizer accepts or rejects them).  Returns nullopt
// when the drawn candidate does not type; callers loop.
class TypedGen {
  public:
    explicit TypedGen(const GenConfig& cfg);
    ~TypedGen();
    TypedGen(const TypedGen&) = delete;
    TypedGen& operator=(const TypedGen&) = delete;

    std::optional<TypedTerm> draw();

    // Terms proposed and terms accepted so far, for generator health checks.
    long proposed() const;
    long accepted() const;

  private:
    struct Impl;
    Impl* impl_;
};

struct PropertyReport {
    std::string property;
    std::uint64_t seed = 0;
    int cases = 0;      // property instances actually run
    int failures = 0;
    std::vector<std::string> counterexamples;  // shrunk, rendered
    bool ok() const { return failures == 0; }
};

// Every one-step reduct of a well-typed term checks at the original type.
PropertyReport run_subject_reduction(const GenConfig& cfg);

// A well-typed closed term is a value or has a reduction step.
PropertyReport run_progress(const GenConfig& cfg);

// Well-typed terms normalize within the fuel bound, under the deterministic
// strategy and under randomly ordered strategies.
PropertyReport run_normalization(const GenConfig& cfg);

// A well-typed closed term's normal form weighs exactly its type's weight.
PropertyReport run_weight_preservation(const GenConfig& cfg);

// The decided type equivalence agrees with random walks through the
// equivalence axioms, and canonicalization is idempotent.
PropertyReport run_equivalence(const GenConfig& cfg);

std::vector<PropertyReport> run_all_properties(const GenConfig& cfg);

std::string report_text(const std::vector<PropertyReport>& reports);
std::string report_json(const std::vector<PropertyReport>& reports);

}  // namespace vecr
