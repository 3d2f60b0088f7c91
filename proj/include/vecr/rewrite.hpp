#pragma once

#include <optional>
#include <vector>

#include "vecr/term.hpp"

namespace vecr {

// The eleven reduction rules. Group E moves scalars, group F merges
// alpha-equal summands, B is beta on basis arguments, group A distributes
// applications over sums and scalars.
enum class RuleId { E1, E2, E3, F1, F2, F3, B, A1, A2, A3, A4 };

const char* rule_name(RuleId r);

// One way to rewrite the whole term: the rule fired, the path to the node
// it fired at (child indices: Abs body = 0; App function = 0, argument = 1;
// Scale body = 0; Sum part = its index), and the full term after firing.
// For the F rules the path points at the sum node whose two summands merge.
struct RedexSite {
    RuleId rule;
    std::vector<int> path;
    TermPtr result;
    bool under_lambda;
};

// Every way to rewrite t in one step, complete modulo the multiset
// representation of sums. Deterministic enumeration order.
std::vector<RedexSite> step_candidates(const TermPtr& t);

// The deterministic strategy: scalar bookkeeping before merging before beta
// before distribution (E > F > B > A); within a group, sites not under a
// lambda come first, then leftmost-outermost.
std::optional<RedexSite> step(const TermPtr& t);

struct TraceEntry {
    RuleId rule;
    std::vector<int> path;
    TermPtr term;  // term after the step
};

struct NormalizeResult {
    TermPtr term;
    std::vector<TraceEntry> trace;  // only filled when want_trace
    long steps = 0;
    bool fuel_exhausted = false;
};

NormalizeResult normalize(const TermPtr& t, long fuel = 100000, bool want_trace = false);

bool is_normal_form(const TermPtr& t);

// Member of the value set: a sum of scaled and unscaled abstractions whose
// abstraction cores are pairwise alpha-distinct (single abstractions and
// single scaled abstractions included).
bool is_value(const TermPtr& t);

}  // namespace vecr
