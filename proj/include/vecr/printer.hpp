#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vecr/term.hpp"
#include "vecr/type.hpp"

namespace vecr {

struct PrintOpts {
    bool unicode = false;
    // Closed terms to print by name when a subterm is alpha-equal to one
    // (the CLI uses this for true/false/H).
    const std::vector<std::pair<std::string, TermPtr>>* aliases = nullptr;
};

// Emits concrete syntax that parses back to an alpha/multiset-equal tree.
std::string print_term(const TermPtr& t, const PrintOpts& opts = {});
std::string print_type(const TypePtr& t, const PrintOpts& opts = {});
std::string print_unit(const UnitPtr& u, const PrintOpts& opts = {});

}  // namespace vecr
