#include "vecr/infer.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <utility>

namespace vecr {

const char* type_fail_kind_name(TypeFailKind k) {
    switch (k) {
        case TypeFailKind::UnboundVariable: return "UnboundVariable";
        case TypeFailKind::SortMismatch: return "SortMismatch";
        case TypeFailKind::AnnotationRequired: return "AnnotationRequired";
        case TypeFailKind::NoDerivation: return "NoDerivation";
        case TypeFailKind::BudgetExceeded: return "BudgetExceeded";
    }
    return "?";
}

namespace {

// Thrown for failures that abort the whole query (or, for AnnotationRequired
// and NoDerivation, abort one synthesis attempt inside a checking search).
struct HardFail {
    TypeFailure f;
};

[[noreturn]] void hard(TypeFailKind k, const std::string& msg) { throw HardFail{{k, msg}}; }

bool canon_eq(const CanonicalType& a, const CanonicalType& b) {
    auto eq = [](const std::vector<CanonEntry>& x, const std::vector<CanonEntry>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].coeff != y[i].coeff || !type_alpha_eq(x[i].core, y[i].core)) return false;
        }
        return true;
    };
    return eq(a.units, b.units) && eq(a.gvars, b.gvars);
}

TypePtr recon_scaled(const CanonicalType& c, const Scalar& mult) {
    std::vector<TypePtr> parts;
    for (const CanonEntry& e : c.all()) parts.push_back(tscale(e.coeff * mult, e.core));
    return tsum(std::move(parts));
}

TypePtr recon_unit_coeffs(const std::vector<CanonEntry>& entries) {
    std::vector<TypePtr> parts;
    for (const CanonEntry& e : entries) parts.push_back(tscale(Scalar(1), e.core));
    return tsum(std::move(parts));
}

TypePtr recon_entries(const std::vector<CanonEntry>& entries) {
    std::vector<TypePtr> parts;
    for (const CanonEntry& e : entries) parts.push_back(tscale(e.coeff, e.core));
    return tsum(std::move(parts));
}

// Canonical types decompose into (coefficient, core) pairs; cores are unit
// types or general variables.
std::optional<std::vector<std::pair<Scalar, TypePtr>>> scale_entries(const TypePtr& t) {
    std::vector<std::pair<Scalar, TypePtr>> out;
    auto one = [&](const TypePtr& p) {
        if (p->kind == TypeKind::Scale && p->body->kind != TypeKind::Scale &&
            p->body->kind != TypeKind::Sum) {
            out.emplace_back(p->coeff, p->body);
            return true;
        }
        if (p->kind != TypeKind::Scale && p->kind != TypeKind::Sum) {
            out.emplace_back(Scalar(1), p);
            return true;
        }
        return false;
    };
    if (t->kind == TypeKind::Sum) {
        for (const TypePtr& p : t->parts) {
            if (!one(p)) return std::nullopt;
        }
    } else if (!one(t)) {
        return std::nullopt;
    }
    return out;
}

bool unit_has_dangling(const UnitPtr& u, int idx, int depth);
bool type_has_dangling(const TypePtr& t, int idx, int depth);

bool unit_has_dangling(const UnitPtr& u, int idx, int depth) {
    switch (u->kind) {
        case UnitKind::BVar: return u->index == idx + depth;
        case UnitKind::FVar: return false;
        case UnitKind::Arrow:
            return unit_has_dangling(u->dom, idx, depth) || type_has_dangling(u->cod, idx, depth);
        case UnitKind::Forall: return unit_has_dangling(u->body, idx, depth + 1);
    }
    return false;
}

bool type_has_dangling(const TypePtr& t, int idx, int depth) {
    switch (t->kind) {
        case TypeKind::Unit: return unit_has_dangling(t->unit, idx, depth);
        case TypeKind::BGVar: return t->index == idx + depth;
        case TypeKind::FGVar: return false;
        case TypeKind::Scale: return type_has_dangling(t->body, idx, depth);
        case TypeKind::Sum:
            for (const TypePtr& p : t->parts) {
                if (type_has_dangling(p, idx, depth)) return true;
            }
            return false;
    }
    return false;
}

// Identity type, used to fill instantiation slots the match left entirely
// unconstrained (the slot occurs nowhere, so any closed type would do).
TypeArg default_arg(VarSort s) {
    UnitPtr id = forall(VarSort::Unit, "Z", arrow(ubvar(0), tunit(ubvar(0))));
    if (s == VarSort::Unit) return TypeArg{VarSort::Unit, id, nullptr};
    return TypeArg{VarSort::General, nullptr, tunit(id)};
}

void collect_ann_names(const TermPtr& t, std::vector<std::string>& out) {
    switch (t->kind) {
        case TermKind::BVar:
        case TermKind::FVar: return;
        case TermKind::Abs:
            if (t->ann) {
                for (const TyVar& v : free_type_vars_unit(t->ann)) out.push_back(v.name);
            }
            collect_ann_names(t->a, out);
            return;
        case TermKind::App:
            collect_ann_names(t->a, out);
            collect_ann_names(t->b, out);
            return;
        case TermKind::Scale: collect_ann_names(t->a, out); return;
        case TermKind::Sum:
            for (const TermPtr& p : t->parts) collect_ann_names(p, out);
            return;
    }
}

class Infer {
  public:
    Infer(const InferLimits& limits, const Context& ctx, const TermPtr& t, const TypePtr* goal)
        : limits_(limits), budget_(limits.budget) {
        for (const TyVar& v : ctx_free_type_vars(ctx)) used_ty_names_.push_back(v.name);
        collect_ann_names(t, used_ty_names_);
        if (goal) {
            for (const TyVar& v : free_type_vars(*goal)) used_ty_names_.push_back(v.name);
        }
    }

    DerivPtr synth(const Context& ctx, const TermPtr& t);
    DerivPtr check_any(const Context& ctx, const TermPtr& t, const TypePtr& goal);

    TypeFailure recorded_failure() const {
        if (fail_depth_ >= 0) return {fail_kind_, fail_msg_};
        return {TypeFailKind::NoDerivation, "no derivation found"};
    }

  private:
    // --- bookkeeping -------------------------------------------------------

    InferLimits limits_;
    long budget_;
    int fresh_counter_ = 0;
    std::vector<std::string> used_ty_names_;
    std::map<std::string, std::string> guessed_binders_;  // fresh type var -> binder hint
    int depth_ = 0;
    int fail_depth_ = -1;
    TypeFailKind fail_kind_ = TypeFailKind::NoDerivation;
    std::string fail_msg_;

    void spend(long n = 1) {
        budget_ -= n;
        if (budget_ < 0) hard(TypeFailKind::BudgetExceeded, "search budget exceeded");
    }

    // Records the deepest obligation that could not be met; returns null so
    // failing paths read `return fail(...)`.
    DerivPtr fail(const std::string& msg, TypeFailKind kind = TypeFailKind::NoDerivation) {
        if (depth_ >= fail_depth_) {
            fail_depth_ = depth_;
            fail_kind_ = kind;
            fail_msg_ = msg;
        }
        return nullptr;
    }

    struct DepthGuard {
        Infer& inf;
        explicit DepthGuard(Infer& i) : inf(i) { ++inf.depth_; }
        ~DepthGuard() { --inf.depth_; }
    };

    bool ty_name_used(const std::string& n) const {
        return std::find(used_ty_names_.begin(), used_ty_names_.end(), n) != used_ty_names_.end();
    }

    std::string fresh_ty_name() {
        static const char* base[] = {"X", "Y", "Z"};
        for (;;) {
            int i = fresh_counter_++;
            std::string cand = base[i % 3];
            if (i / 3 > 0) cand += std::to_string(i / 3);
            if (!ty_name_used(cand)) {
                used_ty_names_.push_back(cand);
                return cand;
            }
        }
    }

    static std::string fresh_term_name(const std::string& hint, const Context& ctx,
                                       const TermPtr& body) {
        std::vector<std::string> used = free_vars(body);
        for (const auto& [n, ty] : ctx) {
            (void)ty;
            used.push_back(n);
        }
        std::string cand = hint.empty() ? "x" : hint;
        int i = 0;
        while (std::find(used.begin(), used.end(), cand) != used.end()) {
            cand = (hint.empty() ? "x" : hint) + std::to_string(++i);
        }
        return cand;
    }

    static DerivPtr ensure_type(DerivPtr d, const TypePtr& t) {
        if (type_alpha_eq(d->type, t)) return d;
        if (!type_equiv(d->type, t)) throw Error("Internal", "ensure_type: not equivalent");
        return d_equiv(std::move(d), t);
    }

    // --- the matcher -------------------------------------------------------

    // First-order, sort-respecting matching of one argument summand against
    // the function's domain.  Flexible positions are (a) the dangling indices
    // of the function's forall prefix and (b) the binders stripped off the
    // argument summand when the domain demands bare structure.  Solutions
    // must be standalone types (no index may escape its binder).
    struct Matcher {
        Infer& inf;
        std::vector<VarSort> fn_sorts_by_index;  // index 0 = innermost prefix binder
        std::vector<std::optional<TypeArg>> fn_sol;
        std::vector<VarSort> strip_sorts_by_index;
        std::vector<std::optional<TypeArg>> strip_sol;
        std::string why;

        Matcher(Infer& i, const std::vector<VarSort>& prefix_outermost_first) : inf(i) {
            fn_sorts_by_index.assign(prefix_outermost_first.rbegin(),
                                     prefix_outermost_first.rend());
            fn_sol.resize(fn_sorts_by_index.size());
        }

        bool miss(const std::string& m) {
            why = m;
            return false;
        }

        bool solve_fn(int slot, const TypeArg& val) {
            if (fn_sol[slot]) {
                if (!type_arg_eq(*fn_sol[slot], val)) return miss("conflicting instantiations");
                return true;
            }
            fn_sol[slot] = val;
            return true;
        }

        bool match_unit(UnitPtr p, UnitPtr s, int depth) {
            inf.spend();
            // Substitute or solve a stripped-binder variable on the subject side.
            if (s->kind == UnitKind::BVar && s->index >= depth) {
                int slot = s->index - depth;
                if (slot >= static_cast<int>(strip_sol.size())) return miss("subject index escapes");
                if (strip_sol[slot]) {
                    if (!strip_sol[slot]->unit) return miss("sort mismatch");
                    s = strip_sol[slot]->unit;
                } else {
                    if (p->kind == UnitKind::BVar && p->index >= depth) {
                        return miss("two instantiation unknowns meet");
                    }
                    if (!unit_locally_closed(p)) return miss("instantiation would capture a binder");
                    if (strip_sorts_by_index[slot] != VarSort::Unit) return miss("sort mismatch");
                    strip_sol[slot] = TypeArg{VarSort::Unit, p, nullptr};
                    return true;
                }
            }
            // Solve a prefix variable on the pattern side.
            if (p->kind == UnitKind::BVar && p->index >= depth) {
                int slot = p->index - depth;
                if (slot >= static_cast<int>(fn_sol.size())) return miss("pattern index escapes");
                if (fn_sorts_by_index[slot] != VarSort::Unit) return miss("sort mismatch");
                if (!unit_locally_closed(s)) return miss("instantiation would escape its binder");
                return solve_fn(slot, TypeArg{VarSort::Unit, s, nullptr});
            }
            switch (p->kind) {
                case UnitKind::BVar:
                    return (s->kind == UnitKind::BVar && s->index == p->index) ||
                           miss("bound variables differ");
                case UnitKind::FVar:
                    return (s->kind == UnitKind::FVar && s->name == p->name) ||
                           miss("type variables differ");
                case UnitKind::Arrow:
                    if (s->kind != UnitKind::Arrow) return miss("expected a function type");
                    return match_unit(p->dom, s->dom, depth) && match_type(p->cod, s->cod, depth);
                case UnitKind::Forall:
                    if (s->kind != UnitKind::Forall || s->binder_sort != p->binder_sort) {
                        return miss("quantifiers differ");
                    }
                    return match_unit(p->body, s->body, depth + 1);
            }
            return miss("unmatchable unit type");
        }

        // One canonical summand core against another.
        bool match_core(const TypePtr& p, const TypePtr& s, int depth) {
            if (p->kind == TypeKind::Unit) {
                if (s->kind != TypeKind::Unit) return miss("unit summand against a variable");
                return match_unit(p->unit, s->unit, depth);
            }
            if (p->kind == TypeKind::BGVar && p->index < depth) {
                return (s->kind == TypeKind::BGVar && s->index == p->index) ||
                       miss("bound general variables differ");
            }
            if (p->kind == TypeKind::FGVar) {
                return (s->kind == TypeKind::FGVar && s->name == p->name) ||
                       miss("general variables differ");
            }
            return miss("unmatchable summand");
        }

        bool match_type(const TypePtr& pt, const TypePtr& st, int depth) {
            inf.spend();
            auto pe = scale_entries(pt);
            auto se = scale_entries(st);
            if (!pe || !se) return miss("summand lists are not in canonical shape");

            // Substitute solved flexible general variables on both sides,
            // splicing their summands in.
            auto substitute = [&](std::vector<std::pair<Scalar, TypePtr>>& list,
                                  const std::vector<std::optional<TypeArg>>& sol) {
                std::vector<std::pair<Scalar, TypePtr>> out;
                for (auto& [c, core] : list) {
                    if (core->kind == TypeKind::BGVar && core->index >= depth) {
                        int slot = core->index - depth;
                        if (slot < static_cast<int>(sol.size()) && sol[slot] && sol[slot]->gen) {
                            auto inner = scale_entries(canonical_form(sol[slot]->gen));
                            for (auto& [ic, icore] : *inner) out.emplace_back(c * ic, icore);
                            continue;
                        }
                    }
                    out.emplace_back(c, core);
                }
                list = std::move(out);
            };
            substitute(*pe, fn_sol);
            substitute(*se, strip_sol);

            // Separate at most one absorbing flexible general variable per side.
            std::optional<std::pair<Scalar, int>> p_absorb, s_absorb;
            std::vector<std::pair<Scalar, TypePtr>> ps, ss;
            for (auto& [c, core] : *pe) {
                if (core->kind == TypeKind::BGVar && core->index >= depth) {
                    int slot = core->index - depth;
                    if (slot >= static_cast<int>(fn_sol.size())) return miss("pattern index escapes");
                    if (fn_sorts_by_index[slot] != VarSort::General) return miss("sort mismatch");
                    if (p_absorb) return miss("two flexible summands on one side");
                    p_absorb = {c, slot};
                } else {
                    ps.emplace_back(c, core);
                }
            }
            for (auto& [c, core] : *se) {
                if (core->kind == TypeKind::BGVar && core->index >= depth) {
                    int slot = core->index - depth;
                    if (slot >= static_cast<int>(strip_sol.size())) {
                        return miss("subject index escapes");
                    }
                    if (strip_sorts_by_index[slot] != VarSort::General) return miss("sort mismatch");
                    if (s_absorb) return miss("two flexible summands on one side");
                    s_absorb = {c, slot};
                } else {
                    ss.emplace_back(c, core);
                }
            }
            if (p_absorb && s_absorb) return miss("two instantiation unknowns meet");

            // Injective backtracking assignment.  With a flexible summand on
            // the subject side, every structured subject summand must be
            // matched by some pattern summand and the leftover pattern
            // summands feed the subject's unknown; otherwise every pattern
            // summand must match a distinct subject summand and the leftover
            // subject summands feed the pattern's unknown (or must be empty).
            const bool subject_absorbs = s_absorb.has_value();
            const auto& movers = subject_absorbs ? ss : ps;    // each must be matched
            const auto& pool = subject_absorbs ? ps : ss;      // drawn from, leftovers absorbed
            std::vector<bool> taken(pool.size(), false);
            std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
                inf.spend();
                if (i == movers.size()) return true;
                for (std::size_t j = 0; j < pool.size(); ++j) {
                    if (taken[j] || movers[i].first != pool[j].first) continue;
                    const TypePtr& pat = subject_absorbs ? pool[j].second : movers[i].second;
                    const TypePtr& sub = subject_absorbs ? movers[i].second : pool[j].second;
                    auto fn_snapshot = fn_sol;
                    auto strip_snapshot = strip_sol;
                    if (match_core(pat, sub, depth)) {
                        taken[j] = true;
                        if (assign(i + 1)) return true;
                        taken[j] = false;
                    }
                    fn_sol = std::move(fn_snapshot);
                    strip_sol = std::move(strip_snapshot);
                }
                return false;
            };
            if (!assign(0)) {
                if (why.empty()) why = "summands do not correspond";
                return false;
            }

            std::vector<std::pair<Scalar, TypePtr>> rest;
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (!taken[j]) rest.push_back(pool[j]);
            }
            if (p_absorb) return absorb(*p_absorb, rest, /*fn_side=*/true);
            if (s_absorb) return absorb(*s_absorb, rest, /*fn_side=*/false);
            return rest.empty() || miss("subject has summands the domain lacks");
        }

        bool absorb(const std::pair<Scalar, int>& ab, std::vector<std::pair<Scalar, TypePtr>>& rest,
                    bool fn_side) {
            const auto& [coeff, slot] = ab;
            if (rest.empty()) return miss("nothing left for the flexible summand");
            std::vector<TypePtr> parts;
            if (coeff.is_zero()) {
                for (auto& [c, core] : rest) {
                    if (!c.is_zero()) return miss("zero-scaled unknown cannot absorb weight");
                    parts.push_back(tscale(Scalar(1), core));
                }
            } else {
                for (auto& [c, core] : rest) parts.push_back(tscale(c / coeff, core));
            }
            TypePtr sol = tsum(std::move(parts));
            if (!type_locally_closed(sol)) return miss("instantiation would escape its binder");
            TypeArg val{VarSort::General, nullptr, sol};
            auto& table = fn_side ? fn_sol : strip_sol;
            if (table[slot]) {
                if (!type_arg_eq(*table[slot], val)) return miss("conflicting instantiations");
                return true;
            }
            table[slot] = val;
            return true;
        }
    };

    struct EntryMatch {
        bool ok = false;
        std::string why;
        std::vector<TypeArg> fn_args;     // outermost prefix binder first
        std::vector<TypeArg> strip_args;  // outermost stripped binder first
        std::vector<TyVar> introduced;    // fresh variables standing for free choices
    };

    EntryMatch match_entry(const std::vector<VarSort>& prefix, const UnitPtr& dom,
                           const UnitPtr& subject, const std::vector<TypePtr>& fn_cods) {
        Matcher m(*this, prefix);
        // Strip foralls off the argument summand while the domain demands
        // bare structure (an ordinary use of instantiation before applying).
        UnitPtr s = subject;
        std::vector<VarSort> strip_order;
        while (s->kind == UnitKind::Forall && dom->kind != UnitKind::Forall &&
               dom->kind != UnitKind::BVar) {
            strip_order.push_back(s->binder_sort);
            s = s->body;
        }
        m.strip_sorts_by_index.assign(strip_order.rbegin(), strip_order.rend());
        m.strip_sol.resize(strip_order.size());

        EntryMatch out;
        if (!m.match_unit(dom, s, 0)) {
            out.why = m.why;
            return out;
        }
        // Unsolved slots are free choices.  A slot occurring in a codomain is
        // filled with a fresh variable (the caller re-generalizes it after
        // the application); a slot occurring nowhere gets the identity type.
        const std::size_t k = prefix.size();
        for (std::size_t idx = 0; idx < k; ++idx) {
            if (m.fn_sol[idx]) continue;
            if (unit_has_dangling(dom, static_cast<int>(idx), 0)) {
                out.why = "cannot determine an instantiation for the function's quantifier";
                return out;
            }
            bool in_cod = false;
            for (const TypePtr& cod : fn_cods) {
                in_cod = in_cod || type_has_dangling(cod, static_cast<int>(idx), 0);
            }
            if (in_cod) {
                TyVar v{fresh_ty_name(), m.fn_sorts_by_index[idx]};
                out.introduced.push_back(v);
                m.fn_sol[idx] =
                    v.sort == VarSort::Unit
                        ? TypeArg{VarSort::Unit, ufvar(v.name), nullptr}
                        : TypeArg{VarSort::General, nullptr, tgvar_f(v.name)};
            } else {
                m.fn_sol[idx] = default_arg(m.fn_sorts_by_index[idx]);
            }
        }
        for (std::size_t idx = 0; idx < m.strip_sol.size(); ++idx) {
            if (m.strip_sol[idx]) continue;
            if (unit_has_dangling(s, static_cast<int>(idx), 0)) {
                out.why = "cannot determine an instantiation for the argument's quantifier";
                return out;
            }
            m.strip_sol[idx] = default_arg(m.strip_sorts_by_index[idx]);
        }
        for (std::size_t i = 0; i < k; ++i) out.fn_args.push_back(*m.fn_sol[k - 1 - i]);
        for (std::size_t i = 0; i < m.strip_sol.size(); ++i) {
            out.strip_args.push_back(*m.strip_sol[m.strip_sol.size() - 1 - i]);
        }
        // Both instantiations must now agree on the domain (up to the type
        // equivalence: substitution can leave differing unit coefficients);
        // anything else is a matcher defect, not an input error.
        if (!unit_equiv(open_prefix_unit(dom, out.fn_args),
                        open_prefix_unit(s, out.strip_args))) {
            throw Error("Internal", "matcher produced an inconsistent instantiation");
        }
        out.ok = true;
        return out;
    }

    // --- synthesis ---------------------------------------------------------

    DerivPtr synth_abs(const Context& ctx, const TermPtr& t, bool parent_is_abs) {
        std::string x = fresh_term_name(t->name, ctx, t->a);
        UnitPtr dom = t->ann;
        if (!dom) {
            std::string fresh = fresh_ty_name();
            guessed_binders_.emplace(fresh, t->name.empty() ? x : t->name);
            dom = ufvar(fresh);
        }
        Context inner = ctx;
        inner.emplace_back(x, dom);
        TermPtr opened = open_binder(t->a, fvar(x));
        DerivPtr sub = opened->kind == TermKind::Abs ? synth_abs(inner, opened, true)
                                                     : synth(inner, opened);
        DerivPtr d = d_arrow_i(std::move(sub), x, t);
        if (!parent_is_abs) d = generalize(ctx, std::move(d));
        return d;
    }

    DerivPtr generalize(const Context& ctx, DerivPtr d) {
        std::vector<TyVar> vars;
        for (const TyVar& v : free_type_vars(d->type)) {
            if (!ctx_mentions(ctx, v)) vars.push_back(v);
        }
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) d = d_forall_i(std::move(d), *it);
        return d;
    }

    // Shared by synthesis and checking: given derivations for the function
    // and argument parts, build the application's derivation.
    DerivPtr apply_arrow(DerivPtr fnD, DerivPtr argD) {
        CanonicalType fc = canonicalize(fnD->type);
        if (fc.has_gvars() || fc.units.empty()) {
            hard(TypeFailKind::NoDerivation, "the function part has a variable type");
        }
        std::vector<VarSort> prefix;
        UnitPtr dom;
        std::vector<Scalar> fn_coeffs;
        std::vector<TypePtr> fn_cods;
        for (std::size_t i = 0; i < fc.units.size(); ++i) {
            UnitPtr u = fc.units[i].core->unit;
            std::vector<VarSort> pre;
            while (u->kind == UnitKind::Forall) {
                pre.push_back(u->binder_sort);
                u = u->body;
            }
            if (u->kind != UnitKind::Arrow) {
                if (u->kind == UnitKind::FVar) {
                    auto hit = guessed_binders_.find(u->name);
                    if (hit != guessed_binders_.end()) {
                        hard(TypeFailKind::AnnotationRequired,
                             "binder '" + hit->second +
                                 "' needs a type annotation: its guessed type is applied");
                    }
                }
                hard(TypeFailKind::NoDerivation, "a summand of the function's type is not a "
                                                 "function type");
            }
            if (i == 0) {
                prefix = pre;
                dom = u->dom;
            } else if (pre != prefix || !unit_alpha_eq(u->dom, dom)) {
                hard(TypeFailKind::NoDerivation,
                     "the function's summands expect different argument types");
            }
            fn_coeffs.push_back(fc.units[i].coeff);
            fn_cods.push_back(u->cod);
        }

        CanonicalType ac = canonicalize(argD->type);
        if (ac.has_gvars()) {
            hard(TypeFailKind::NoDerivation, "the argument has a variable type");
        }
        std::vector<Scalar> arg_coeffs;
        std::vector<std::vector<TypeArg>> arg_insts;
        std::vector<std::vector<TypeArg>> strips;
        std::vector<TyVar> introduced;
        for (const CanonEntry& e : ac.units) {
            EntryMatch em = match_entry(prefix, dom, e.core->unit, fn_cods);
            if (!em.ok) {
                hard(TypeFailKind::NoDerivation,
                     "the argument's type does not fit the function's domain: " + em.why);
            }
            arg_coeffs.push_back(e.coeff);
            arg_insts.push_back(std::move(em.fn_args));
            strips.push_back(std::move(em.strip_args));
            introduced.insert(introduced.end(), em.introduced.begin(), em.introduced.end());
        }

        DerivPtr fn2 = ensure_type(std::move(fnD), fc.recon());
        DerivPtr arg2 = coerce_argument(std::move(argD), ac, strips);
        std::vector<TypePtr> arg_literal;
        for (std::size_t j = 0; j < arg_coeffs.size(); ++j) {
            arg_literal.push_back(
                tscale(arg_coeffs[j], tunit(open_prefix_unit(dom, arg_insts[j]))));
        }
        arg2 = ensure_type(std::move(arg2), tsum(std::move(arg_literal)));
        ArrowEPayload payload{prefix, dom, std::move(fn_coeffs), std::move(fn_cods),
                              std::move(arg_coeffs), std::move(arg_insts)};
        DerivPtr d = d_arrow_e(std::move(fn2), std::move(arg2), std::move(payload));
        if (!introduced.empty()) {
            // The free choices must be re-bound; this needs the result to be
            // a sum of (scaled) unit summands.
            CanonicalType cc = canonicalize(d->type);
            if (cc.has_gvars()) {
                hard(TypeFailKind::NoDerivation,
                     "cannot determine an instantiation for the function's quantifier");
            }
            d = ensure_type(std::move(d), cc.recon());
            for (auto it = introduced.rbegin(); it != introduced.rend(); ++it) {
                d = d_forall_i(std::move(d), *it);
            }
        }
        return d;
    }

    // Applies the per-summand instantiation chains to the argument's
    // derivation.  A uniform chain is one judgment-level instantiation run;
    // differing chains are pushed down through the sum structure.
    DerivPtr coerce_argument(DerivPtr argD, const CanonicalType& ac,
                             const std::vector<std::vector<TypeArg>>& strips) {
        bool any = false;
        bool uniform = true;
        for (const auto& c : strips) {
            any = any || !c.empty();
            uniform = uniform && chains_eq(c, strips[0]);
        }
        if (!any) return argD;
        if (uniform) return apply_chain(std::move(argD), strips[0]);
        std::vector<std::pair<TypePtr, const std::vector<TypeArg>*>> by_core;
        for (std::size_t j = 0; j < ac.units.size(); ++j) {
            by_core.emplace_back(ac.units[j].core, &strips[j]);
        }
        return coerce_rec(std::move(argD), by_core);
    }

    static bool chains_eq(const std::vector<TypeArg>& a, const std::vector<TypeArg>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!type_arg_eq(a[i], b[i])) return false;
        }
        return true;
    }

    DerivPtr apply_chain(DerivPtr d, const std::vector<TypeArg>& chain) {
        if (chain.empty()) return d;
        d = ensure_type(std::move(d), canonicalize(d->type).recon());
        for (const TypeArg& a : chain) d = d_forall_e(std::move(d), a);
        return d;
    }

    DerivPtr coerce_rec(DerivPtr d,
                        const std::vector<std::pair<TypePtr, const std::vector<TypeArg>*>>& map) {
        spend();
        CanonicalType c = canonicalize(d->type);
        if (c.has_gvars()) {
            hard(TypeFailKind::NoDerivation, "argument summands cannot be instantiated apart");
        }
        std::vector<const std::vector<TypeArg>*> chains;
        for (const CanonEntry& e : c.units) {
            const std::vector<TypeArg>* found = nullptr;
            for (const auto& [core, chain] : map) {
                if (type_alpha_eq(core, e.core)) {
                    found = chain;
                    break;
                }
            }
            if (!found) throw Error("Internal", "coercion lost track of a summand");
            chains.push_back(found);
        }
        bool uniform = true;
        for (const auto* ch : chains) uniform = uniform && chains_eq(*ch, *chains[0]);
        if (uniform) return apply_chain(std::move(d), *chains[0]);
        switch (d->rule) {
            case DerivRule::PlusI:
                return d_plus_i(coerce_rec(d->premises[0], map), coerce_rec(d->premises[1], map));
            case DerivRule::S: {
                std::vector<DerivPtr> ps;
                for (const DerivPtr& p : d->premises) ps.push_back(coerce_rec(p, map));
                return d_s(std::move(ps), d->s_coeffs);
            }
            case DerivRule::OneE: return d_one_e(coerce_rec(d->premises[0], map));
            case DerivRule::Equiv: return coerce_rec(d->premises[0], map);
            default:
                hard(TypeFailKind::NoDerivation,
                     "argument summands need different instantiations, but the argument is not "
                     "a sum that can be split");
        }
        return nullptr;  // unreachable
    }

    // --- checking ----------------------------------------------------------

    DerivPtr check_var(const Context& ctx, const TermPtr& t, const CanonicalType& cg) {
        const UnitPtr* bound = ctx_lookup(ctx, t->name);
        if (!bound) hard(TypeFailKind::UnboundVariable, "unbound variable " + t->name);
        if (cg.gvars.empty() && cg.units.size() == 1 && cg.units[0].coeff.is_one()) {
            return unit_coerce(d_ax(ctx, t->name, *bound), ctx, cg.units[0].core->unit, 16);
        }
        DerivPtr s = split_basis(ctx, t, Scalar(1), cg, /*allow_whole=*/false);
        if (!s) return nullptr;
        return d_one_e(std::move(s));
    }

    DerivPtr check_abs(const Context& ctx, const TermPtr& t, const CanonicalType& cg) {
        if (cg.gvars.empty() && cg.units.size() == 1 && cg.units[0].coeff.is_one()) {
            return check_abs_unit(ctx, t, cg.units[0].core->unit);
        }
        DerivPtr s = split_basis(ctx, t, Scalar(1), cg, /*allow_whole=*/false);
        if (!s) return nullptr;
        return d_one_e(std::move(s));
    }

    DerivPtr check_abs_unit(const Context& ctx, const TermPtr& t, const UnitPtr& goal) {
        std::vector<TyVar> opened;
        UnitPtr core = goal;
        while (core->kind == UnitKind::Forall) {
            TyVar v{fresh_ty_name(), core->binder_sort};
            opened.push_back(v);
            TypeArg a = v.sort == VarSort::Unit
                            ? TypeArg{VarSort::Unit, ufvar(v.name), nullptr}
                            : TypeArg{VarSort::General, nullptr, tgvar_f(v.name)};
            core = open_forall(core->body, a);
        }
        if (core->kind != UnitKind::Arrow) {
            return fail("an abstraction cannot have a variable type");
        }
        std::string x = fresh_term_name(t->name, ctx, t->a);
        Context inner = ctx;
        inner.emplace_back(x, core->dom);
        DerivPtr body = check_any(inner, open_binder(t->a, fvar(x)), core->cod);
        if (!body) return nullptr;
        DerivPtr d = d_arrow_i(std::move(body), x, t);
        for (auto it = opened.rbegin(); it != opened.rend(); ++it) {
            d = d_forall_i(std::move(d), *it);
        }
        return d;
    }

    DerivPtr check_app(const Context& ctx, const TermPtr& t, const TypePtr& goal) {
        DerivPtr d;
        try {
            d = synth(ctx, t);
        } catch (const HardFail& h) {
            if (h.f.kind == TypeFailKind::AnnotationRequired ||
                h.f.kind == TypeFailKind::NoDerivation) {
                return fail(h.f.message, h.f.kind);
            }
            throw;
        }
        if (type_equiv(d->type, goal)) return d;
        // The synthesized type may be more general (or more instantiated)
        // than the goal: try uniform instantiation toward the goal, then
        // uniform generalization.
        CanonicalType cg = canonicalize(goal);
        for (int round = 0; round < 8; ++round) {
            CanonicalType sc = canonicalize(d->type);
            if (sc.has_gvars() || sc.units.empty()) break;
            UnitPtr head = sc.units[0].core->unit;
            if (head->kind != UnitKind::Forall) break;
            bool all_forall = true;
            for (const CanonEntry& e : sc.units) {
                all_forall = all_forall && e.core->unit->kind == UnitKind::Forall &&
                             e.core->unit->binder_sort == head->binder_sort;
            }
            if (!all_forall) break;
            bool advanced = false;
            for (const CanonEntry& target : cg.units) {
                if (target.core->kind != TypeKind::Unit) continue;
                Matcher m(*this, {head->binder_sort});
                if (m.match_unit(head->body, target.core->unit, 0) && m.fn_sol[0]) {
                    DerivPtr d2 = apply_chain(d, {*m.fn_sol[0]});
                    if (!type_alpha_eq(d2->type, d->type)) {
                        d = std::move(d2);
                        advanced = true;
                        break;
                    }
                }
            }
            if (!advanced) break;
            if (type_equiv(d->type, goal)) return d;
        }
        DerivPtr g = generalize(ctx, d);
        if (type_equiv(g->type, goal)) return g;
        DerivPtr da = directed_apply(ctx, t, cg);
        if (da && type_equiv(da->type, goal)) return da;
        DerivPtr rs = resplit_apply(ctx, t, goal, cg);
        if (rs) return rs;
        return fail("the application's type does not match the goal");
    }

    // The goal may quantify positions a subterm's own type leaves elsewhere:
    // applying a function to a sum closes the result over every summand's
    // instantiation variables, so distributed copies meet goals padded with
    // quantifiers they never use, and a contracted redex re-synthesizes with
    // its lambda chain generalized at the outside rather than under an
    // arrow.  Checking against such a goal peels one shared binder off every
    // goal summand, checks underneath, and re-binds it.
    DerivPtr peel_goal(const Context& ctx, const TermPtr& t, const TypePtr& goal,
                       const CanonicalType& cg) {
        if (!cg.gvars.empty() || cg.units.empty()) return nullptr;
        VarSort sort = VarSort::Unit;
        for (std::size_t i = 0; i < cg.units.size(); ++i) {
            const TypePtr& core = cg.units[i].core;
            if (core->kind != TypeKind::Unit || core->unit->kind != UnitKind::Forall) {
                return nullptr;
            }
            if (i == 0) {
                sort = core->unit->binder_sort;
            } else if (core->unit->binder_sort != sort) {
                return nullptr;
            }
        }
        spend();
        TyVar v{fresh_ty_name(), sort};
        TypeArg a = sort == VarSort::Unit
                        ? TypeArg{VarSort::Unit, ufvar(v.name), nullptr}
                        : TypeArg{VarSort::General, nullptr, tgvar_f(v.name)};
        std::vector<CanonEntry> opened;
        for (const CanonEntry& e : cg.units) {
            CanonEntry e2 = e;
            e2.core = tunit(open_forall(e.core->unit->body, a));
            opened.push_back(std::move(e2));
        }
        DerivPtr sub = check_any(ctx, t, recon_entries(opened));
        if (!sub) return nullptr;
        CanonicalType sc = canonicalize(sub->type);
        if (sc.has_gvars()) return nullptr;
        sub = ensure_type(std::move(sub), sc.recon());
        DerivPtr closed = d_forall_i(std::move(sub), v);
        if (type_equiv(closed->type, goal)) return closed;
        return nullptr;
    }

    // Check-directed application: each goal summand dictates one choice of
    // the function's quantifier instantiations, and the argument is then
    // re-checked at the matching split of its coefficients.  Plain synthesis
    // cannot find these derivations: once a distributed argument's summands
    // re-merge under canonicalization, the per-summand choices recorded in
    // the goal are no longer visible in the argument's own type.
    DerivPtr directed_apply(const Context& ctx, const TermPtr& t, const CanonicalType& cg) {
        if (!cg.gvars.empty() || cg.units.empty()) return nullptr;
        DerivPtr fnD;
        try {
            fnD = synth(ctx, t->a);
        } catch (const HardFail& h) {
            if (h.f.kind == TypeFailKind::AnnotationRequired ||
                h.f.kind == TypeFailKind::NoDerivation) {
                return nullptr;
            }
            throw;
        }
        CanonicalType fc = canonicalize(fnD->type);
        if (fc.has_gvars() || fc.units.size() != 1) return nullptr;
        Scalar alpha = fc.units[0].coeff;
        if (alpha.is_zero()) return nullptr;
        std::vector<VarSort> prefix;
        UnitPtr u = fc.units[0].core->unit;
        while (u->kind == UnitKind::Forall) {
            prefix.push_back(u->binder_sort);
            u = u->body;
        }
        if (prefix.empty() || u->kind != UnitKind::Arrow) return nullptr;
        UnitPtr dom = u->dom;
        TypePtr cod = u->cod;
        // Slots that occur only in the function's domain are invisible to
        // the goal; the argument's own type fixes them.
        bool arg_known = false;
        std::vector<CanonEntry> arg_entries;
        UnitPtr arg_core;
        try {
            DerivPtr ad = synth(ctx, t->b);
            CanonicalType ac = canonicalize(ad->type);
            if (!ac.has_gvars()) {
                arg_known = true;
                arg_entries = ac.units;
                if (arg_entries.size() == 1 && arg_entries[0].core->kind == TypeKind::Unit) {
                    arg_core = arg_entries[0].core->unit;
                }
            }
        } catch (const HardFail& h) {
            if (h.f.kind != TypeFailKind::AnnotationRequired &&
                h.f.kind != TypeFailKind::NoDerivation) {
                throw;
            }
        }
        std::vector<Scalar> shares;
        std::vector<std::vector<TypeArg>> insts;
        std::vector<TypePtr> arg_literal;
        auto finish = [&]() -> DerivPtr {
            TypePtr arg_target = tsum(arg_literal);
            DerivPtr argD = check_any(ctx, t->b, arg_target);
            if (!argD) return nullptr;
            argD = ensure_type(std::move(argD), arg_target);
            DerivPtr fn2 = ensure_type(fnD, fc.recon());
            ArrowEPayload payload{prefix, dom, {alpha}, {cod}, shares, insts};
            return d_arrow_e(std::move(fn2), std::move(argD), std::move(payload));
        };
        // First attempt: one instantiation per goal summand, the argument
        // re-checked at the matching split of its coefficients.
        bool built = true;
        for (const CanonEntry& e : cg.units) {
            spend();
            Matcher m(*this, prefix);
            if (!m.match_type(cod, e.core, 0)) {
                built = false;
                break;
            }
            bool dom_unsolved = false;
            for (std::size_t k = 0; k < m.fn_sol.size(); ++k) {
                if (!m.fn_sol[k] && unit_has_dangling(dom, static_cast<int>(k), 0)) {
                    dom_unsolved = true;
                }
            }
            if (dom_unsolved && (!arg_core || !m.match_unit(dom, arg_core, 0))) {
                built = false;
                break;
            }
            std::vector<TypeArg> inst(prefix.size());
            bool solved = true;
            for (std::size_t k = 0; k < m.fn_sol.size(); ++k) {
                if (!m.fn_sol[k]) {
                    // slot k is the k-th innermost binder
                    if (unit_has_dangling(dom, static_cast<int>(k), 0) ||
                        type_has_dangling(cod, static_cast<int>(k), 0)) {
                        solved = false;
                        break;
                    }
                    m.fn_sol[k] = default_arg(m.fn_sorts_by_index[k]);
                }
                inst[prefix.size() - 1 - k] = *m.fn_sol[k];  // outermost first
            }
            if (!solved) {
                built = false;
                break;
            }
            shares.push_back(e.coeff / alpha);
            arg_literal.push_back(tscale(shares.back(), tunit(open_prefix_unit(dom, inst))));
            insts.push_back(std::move(inst));
        }
        if (built) {
            DerivPtr done = finish();
            if (done) return done;
        }
        // Second attempt: route each argument summand to one goal summand
        // instead.  This covers arguments whose summands pin the domain-only
        // slots differently, or whose coefficients are fixed (as under an
        // overall zero): the instantiation comes from matching the domain
        // against the summand, and the coefficients routed to each goal
        // summand must add up to its coefficient exactly.
        if (!arg_known || arg_entries.empty() ||
            arg_entries.size() > 2 * limits_.max_split_entries) {
            return nullptr;
        }
        shares.clear();
        insts.clear();
        arg_literal.clear();
        const std::size_t n_goal = cg.units.size();
        const std::size_t n_arg = arg_entries.size();
        std::vector<std::vector<std::optional<std::vector<TypeArg>>>> cell(
            n_goal, std::vector<std::optional<std::vector<TypeArg>>>(n_arg));
        bool any_cell = false;
        for (std::size_t i = 0; i < n_goal; ++i) {
            Matcher base(*this, prefix);
            if (!base.match_type(cod, cg.units[i].core, 0)) return nullptr;
            for (std::size_t j = 0; j < n_arg; ++j) {
                if (arg_entries[j].core->kind != TypeKind::Unit) continue;
                spend();
                Matcher m = base;
                if (!m.match_unit(dom, arg_entries[j].core->unit, 0)) continue;
                std::vector<TypeArg> inst(prefix.size());
                bool solved = true;
                for (std::size_t k = 0; k < m.fn_sol.size(); ++k) {
                    if (!m.fn_sol[k]) {
                        if (unit_has_dangling(dom, static_cast<int>(k), 0) ||
                            type_has_dangling(cod, static_cast<int>(k), 0)) {
                            solved = false;
                            break;
                        }
                        m.fn_sol[k] = default_arg(m.fn_sorts_by_index[k]);
                    }
                    inst[prefix.size() - 1 - k] = *m.fn_sol[k];
                }
                if (!solved) continue;
                cell[i][j] = std::move(inst);
                any_cell = true;
            }
        }
        if (!any_cell) return nullptr;
        std::vector<int> choice(n_arg, -1);
        std::vector<Scalar> got(n_goal, Scalar(0));
        std::vector<int> cnt(n_goal, 0);
        long nodes = 0;
        bool accepted = false;
        std::function<void(std::size_t)> assign = [&](std::size_t j) {
            if (accepted || ++nodes > 4096) return;
            if (j == n_arg) {
                for (std::size_t i = 0; i < n_goal; ++i) {
                    if (cnt[i] == 0 || alpha * got[i] != cg.units[i].coeff) return;
                }
                accepted = true;
                return;
            }
            for (std::size_t i = 0; i < n_goal && !accepted; ++i) {
                if (!cell[i][j]) continue;
                choice[j] = static_cast<int>(i);
                got[i] = got[i] + arg_entries[j].coeff;
                ++cnt[i];
                assign(j + 1);
                if (accepted) return;
                --cnt[i];
                got[i] = got[i] - arg_entries[j].coeff;
                choice[j] = -1;
            }
        };
        assign(0);
        if (!accepted) return nullptr;
        for (std::size_t j = 0; j < n_arg; ++j) {
            const std::vector<TypeArg>& inst = *cell[choice[j]][j];
            shares.push_back(arg_entries[j].coeff);
            arg_literal.push_back(tscale(shares.back(), tunit(open_prefix_unit(dom, inst))));
            insts.push_back(inst);
        }
        return finish();
    }

    // A merge inside the argument can collapse two function summands of
    // different types into one with their coefficients added (summands equal
    // up to binder annotations merge), leaving the function to synthesize a
    // codomain the goal still splits finer.  Rebuild a candidate function
    // type from the goal: keep a subset of the synthesized arrow summands,
    // divide what is left of the goal by the argument's coefficient, and
    // make that the codomain of one extra summand; re-checking the function
    // against the rebuilt type lets the checking rules un-merge.
    DerivPtr resplit_apply(const Context& ctx, const TermPtr& t, const TypePtr& goal,
                           const CanonicalType& cg) {
        if (!cg.gvars.empty() || cg.units.empty()) return nullptr;
        DerivPtr fnD, argD;
        try {
            fnD = synth(ctx, t->a);
            argD = synth(ctx, t->b);
        } catch (const HardFail& h) {
            if (h.f.kind == TypeFailKind::AnnotationRequired ||
                h.f.kind == TypeFailKind::NoDerivation) {
                return nullptr;
            }
            throw;
        }
        CanonicalType fc = canonicalize(fnD->type);
        CanonicalType ac = canonicalize(argD->type);
        if (fc.has_gvars() || fc.units.empty() || fc.units.size() > 3) return nullptr;
        if (ac.has_gvars() || ac.units.empty() || ac.units.size() > 4) return nullptr;
        std::vector<VarSort> prefix;
        UnitPtr dom;
        std::vector<Scalar> alphas;
        std::vector<TypePtr> cods;
        for (std::size_t i = 0; i < fc.units.size(); ++i) {
            UnitPtr u = fc.units[i].core->unit;
            std::vector<VarSort> pre;
            while (u->kind == UnitKind::Forall) {
                pre.push_back(u->binder_sort);
                u = u->body;
            }
            if (u->kind != UnitKind::Arrow) return nullptr;
            if (i == 0) {
                prefix = pre;
                dom = u->dom;
            } else if (pre != prefix || !unit_alpha_eq(u->dom, dom)) {
                return nullptr;
            }
            alphas.push_back(fc.units[i].coeff);
            cods.push_back(u->cod);
        }
        // Candidate argument derivations.  The synthesized one serves when its
        // type has a single component; otherwise the argument is re-checked
        // with its whole coefficient gathered onto one of its component cores
        // (distributing an application spreads one argument into copies whose
        // paddings no longer merge, while the goal reflects the merged
        // reading).
        struct ArgCand {
            Scalar beta;
            UnitPtr acore;
            DerivPtr d;
            bool rechecked;
        };
        std::vector<ArgCand> arg_cands;
        if (ac.units.size() == 1) {
            if (ac.units[0].core->kind != TypeKind::Unit) return nullptr;
            if (ac.units[0].coeff.is_zero()) return nullptr;
            arg_cands.push_back({ac.units[0].coeff, ac.units[0].core->unit, argD, false});
        } else {
            // Regathering a spread argument only pays off when the function
            // type itself is a sum; single-summand functions are already
            // covered by the direct application paths, and re-checking a
            // large argument here would just burn the search budget.
            if (fc.units.size() < 2) return nullptr;
            Scalar beta(0);
            for (const CanonEntry& e : ac.units) beta = beta + e.coeff;
            if (beta.is_zero()) return nullptr;
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < ac.units.size(); ++j) {
                if (ac.units[j].core->kind == TypeKind::Unit) idx.push_back(j);
            }
            // Larger cores first: the merged reading carries the padding.
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return unit_size(ac.units[a].core->unit) > unit_size(ac.units[b].core->unit);
            });
            for (std::size_t j : idx) {
                TypePtr at = tscale(beta, ac.units[j].core);
                DerivPtr d2 = check_any(ctx, t->b, at);
                if (!d2) continue;
                arg_cands.push_back(
                    {beta, ac.units[j].core->unit, ensure_type(std::move(d2), at), true});
            }
        }
        std::vector<unsigned> masks;
        for (unsigned mask = 0; mask < (1u << fc.units.size()); ++mask) masks.push_back(mask);
        std::sort(masks.begin(), masks.end(),
                  [](unsigned a, unsigned b) { return std::popcount(a) > std::popcount(b); });
        for (const ArgCand& acand : arg_cands) {
            if (acand.rechecked) {
                // A regathered argument may line up with the synthesized
                // function type as it stands.
                try {
                    DerivPtr out = apply_arrow(fnD, acand.d);
                    if (out && type_equiv(out->type, goal)) return out;
                } catch (const HardFail& h) {
                    if (h.f.kind != TypeFailKind::AnnotationRequired &&
                        h.f.kind != TypeFailKind::NoDerivation) {
                        throw;
                    }
                }
            }
            EntryMatch em = match_entry(prefix, dom, acand.acore, cods);
            if (!em.ok) continue;
            // What each synthesized summand contributes, per argument unit.
            std::vector<CanonicalType> contrib;
            bool usable = true;
            for (std::size_t i = 0; i < fc.units.size() && usable; ++i) {
                CanonicalType c =
                    canonicalize(tscale(alphas[i], open_prefix_type(cods[i], em.fn_args)));
                if (c.has_gvars()) usable = false;
                else contrib.push_back(std::move(c));
            }
            if (!usable) continue;
            TypePtr dom_inst = tunit(open_prefix_unit(dom, em.fn_args));
            for (unsigned mask : masks) {
                spend();
                struct Slot {
                    Scalar coeff;
                    TypePtr core;
                    bool touched = false;
                };
                std::vector<Slot> rem;
                for (const CanonEntry& e : cg.units) {
                    rem.push_back({e.coeff / acand.beta, e.core, false});
                }
                bool ok = true;
                for (std::size_t i = 0; i < fc.units.size() && ok; ++i) {
                    if (!(mask & (1u << i))) continue;
                    for (const CanonEntry& k : contrib[i].units) {
                        bool hit = false;
                        for (Slot& s : rem) {
                            if (type_alpha_eq(s.core, k.core)) {
                                s.coeff = s.coeff - k.coeff;
                                s.touched = true;
                                hit = true;
                                break;
                            }
                        }
                        if (!hit) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) continue;
                std::vector<CanonEntry> leftover;
                for (const Slot& s : rem) {
                    if (s.touched && s.coeff.is_zero()) continue;
                    leftover.push_back({s.coeff, s.core});
                }
                if (leftover.empty()) continue;
                // Two readings of the rebuilt codomain: a leftover component
                // equal to the instantiated domain may really be an occurrence
                // of the bound variable, so restoring it to the binder is
                // tried first.
                std::vector<std::vector<CanonEntry>> cod_cands;
                {
                    std::vector<CanonEntry> slotted;
                    bool any = false;
                    for (const CanonEntry& e : leftover) {
                        if (type_equiv(e.core, dom_inst)) {
                            slotted.push_back({e.coeff, tunit(dom)});
                            any = true;
                        } else {
                            slotted.push_back(e);
                        }
                    }
                    if (any) cod_cands.push_back(std::move(slotted));
                }
                cod_cands.push_back(std::move(leftover));
                for (const std::vector<CanonEntry>& codents : cod_cands) {
                    UnitPtr nu = arrow(dom, recon_entries(codents));
                    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
                        nu = forall(*it, "", nu);
                    }
                    std::vector<TypePtr> summands;
                    for (std::size_t i = 0; i < fc.units.size(); ++i) {
                        if (mask & (1u << i)) {
                            summands.push_back(tscale(alphas[i], fc.units[i].core));
                        }
                    }
                    summands.push_back(tscale(Scalar(1), tunit(nu)));
                    TypePtr f_alt = tsum(std::move(summands));
                    DerivPtr fn2 = check_any(ctx, t->a, f_alt);
                    if (!fn2) continue;
                    DerivPtr out;
                    try {
                        out = apply_arrow(fn2, acand.d);
                    } catch (const HardFail& h) {
                        if (h.f.kind == TypeFailKind::AnnotationRequired ||
                            h.f.kind == TypeFailKind::NoDerivation) {
                            continue;
                        }
                        throw;
                    }
                    if (out && type_equiv(out->type, goal)) return out;
                }
            }
        }
        return nullptr;
    }

    DerivPtr check_scale(const Context& ctx, const TermPtr& t, const CanonicalType& cg) {
        return split_basis(ctx, t->a, t->coeff, cg, /*allow_whole=*/true);
    }

    // Builds the scaled judgment sigma * b : goal through the splitting rule:
    // premises type b at several types whose scaled sum is the goal.
    DerivPtr split_basis(const Context& ctx, const TermPtr& b, const Scalar& sigma,
                         const CanonicalType& cg, bool allow_whole) {
        DepthGuard guard(*this);
        if (allow_whole) {
            spend();
            if (!sigma.is_zero()) {
                DerivPtr sub = check_any(ctx, b, recon_scaled(cg, Scalar(1) / sigma));
                if (sub) return d_s({std::move(sub)}, {sigma});
            } else {
                // Zero absorbs the body's own weight, so 0*b already matches
                // an all-zero goal whenever the summand cores agree with the
                // body's synthesized type.
                DerivPtr syn;
                try {
                    syn = synth(ctx, b);
                } catch (const HardFail& h) {
                    if (h.f.kind != TypeFailKind::AnnotationRequired &&
                        h.f.kind != TypeFailKind::NoDerivation) {
                        throw;
                    }
                }
                if (syn) {
                    DerivPtr z = d_s({syn}, {Scalar(0)});
                    if (type_equiv(z->type, cg.recon())) return z;
                }
                bool all_zero = true;
                for (const CanonEntry& e : cg.all()) all_zero = all_zero && e.coeff.is_zero();
                if (all_zero) {
                    // The body's own summand coefficients vanish under the
                    // zero, so they can be routed onto the goal's cores: pair
                    // each goal core with one synthesized summand (matching
                    // cores first, the rest in order) and re-check the body
                    // with those coefficients in place of the zeros.
                    if (syn && cg.gvars.empty() && !cg.units.empty()) {
                        CanonicalType bc = canonicalize(syn->type);
                        if (!bc.has_gvars() && bc.units.size() == cg.units.size()) {
                            std::vector<CanonEntry> target = cg.units;
                            std::vector<bool> used(bc.units.size(), false);
                            std::vector<std::size_t> leftover;
                            for (std::size_t i = 0; i < target.size(); ++i) {
                                bool paired = false;
                                for (std::size_t j = 0; j < bc.units.size(); ++j) {
                                    if (!used[j] &&
                                        type_alpha_eq(bc.units[j].core, target[i].core)) {
                                        target[i].coeff = bc.units[j].coeff;
                                        used[j] = true;
                                        paired = true;
                                        break;
                                    }
                                }
                                if (!paired) leftover.push_back(i);
                            }
                            for (std::size_t i : leftover) {
                                for (std::size_t j = 0; j < bc.units.size(); ++j) {
                                    if (!used[j]) {
                                        target[i].coeff = bc.units[j].coeff;
                                        used[j] = true;
                                        break;
                                    }
                                }
                            }
                            DerivPtr sub = check_any(ctx, b, recon_entries(target));
                            if (sub) return d_s({std::move(sub)}, {Scalar(0)});
                        }
                    }
                    DerivPtr sub = check_any(ctx, b, recon_unit_coeffs(cg.all()));
                    if (sub) return d_s({std::move(sub)}, {Scalar(0)});
                }
            }
        }
        if (!is_basis(b)) {
            return fail("only scalings of basis terms are split across goal summands");
        }
        if (!cg.gvars.empty()) {
            return fail("a basis term cannot inhabit a general-variable summand");
        }
        if (cg.total_weight() != sigma) {
            return fail("the goal's weight differs from the scalar " + sigma.show());
        }
        if (cg.units.size() > limits_.max_split_entries) {
            return fail("too many goal summands for the splitting search",
                        TypeFailKind::BudgetExceeded);
        }
        // Enumerate partitions of the goal summands into at least two groups
        // (one group is the whole-goal path above).
        const std::vector<CanonEntry>& entries = cg.units;
        std::vector<int> group_of(entries.size(), -1);
        DerivPtr found;
        std::function<void(std::size_t, int)> enumerate = [&](std::size_t i, int groups) {
            if (found) return;
            spend();
            if (i == entries.size()) {
                if (groups < 2) return;
                found = try_grouping(ctx, b, sigma, entries, group_of, groups);
                return;
            }
            for (int g = 0; g <= groups && !found; ++g) {
                group_of[i] = g;
                enumerate(i + 1, std::max(groups, g + 1));
            }
            group_of[i] = -1;
        };
        enumerate(0, 0);
        if (found) return found;
        return fail("no splitting of the goal types this term");
    }

    DerivPtr try_grouping(const Context& ctx, const TermPtr& b, const Scalar& sigma,
                          const std::vector<CanonEntry>& entries, const std::vector<int>& group_of,
                          int groups) {
        std::vector<std::vector<CanonEntry>> buckets(groups);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            buckets[group_of[i]].push_back(entries[i]);
        }
        std::vector<Scalar> coeffs;
        std::vector<DerivPtr> premises;
        for (const auto& bucket : buckets) {
            Scalar w = 0;
            for (const CanonEntry& e : bucket) w = w + e.coeff;
            TypePtr target;
            if (w.is_zero()) {
                if (bucket.size() != 1) return nullptr;
                target = recon_unit_coeffs(bucket);
            } else {
                std::vector<CanonEntry> scaled = bucket;
                for (CanonEntry& e : scaled) e.coeff = e.coeff / w;
                target = recon_entries(scaled);
            }
            DerivPtr p = check_any(ctx, b, target);
            if (!p) return nullptr;
            coeffs.push_back(w);
            premises.push_back(std::move(p));
        }
        (void)sigma;  // sum of the group weights equals sigma by the weight precheck
        return d_s(std::move(premises), std::move(coeffs));
    }

    DerivPtr check_sum(const Context& ctx, const TermPtr& t, const CanonicalType& cg,
                       const TypePtr& goal) {
        DepthGuard guard(*this);
        const std::vector<TermPtr>& parts = t->parts;

        // Synthesize each summand once up front; the passes below reuse these.
        std::vector<DerivPtr> part_synth(parts.size());
        bool all_synth = true;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            try {
                part_synth[p] = synth(ctx, parts[p]);
            } catch (const HardFail& h) {
                if (h.f.kind == TypeFailKind::AnnotationRequired ||
                    h.f.kind == TypeFailKind::NoDerivation) {
                    all_synth = false;
                    continue;
                }
                throw;
            }
        }

        // Pass 1: compare the combined synthesized type with the goal.
        if (all_synth) {
            std::vector<TypePtr> tys;
            for (const DerivPtr& d : part_synth) tys.push_back(d->type);
            if (canon_eq(canonicalize(tsum(tys)), cg)) {
                DerivPtr acc = part_synth[0];
                for (std::size_t i = 1; i < part_synth.size(); ++i) {
                    acc = d_plus_i(std::move(acc), part_synth[i]);
                }
                return acc;
            }
        }

        // Pass 2: assign each goal summand to one term summand.  Summands
        // whose synthesized components could plausibly cover a goal summand
        // are tried first, branches that can no longer reach every part are
        // cut, and the enumeration runs under its own node allowance so a
        // hopeless search leaves the main budget to the passes below.
        std::vector<CanonEntry> entries = cg.all();
        if (entries.size() <= limits_.max_split_entries && entries.size() >= parts.size()) {
            std::vector<std::vector<TypePtr>> cores(parts.size());
            std::vector<bool> open_part(parts.size(), false);
            for (std::size_t p = 0; p < parts.size(); ++p) {
                if (!part_synth[p]) {
                    open_part[p] = true;
                    continue;
                }
                CanonicalType c = canonicalize(part_synth[p]->type);
                if (c.has_gvars()) {
                    open_part[p] = true;
                    continue;
                }
                for (const CanonEntry& e : c.units) cores[p].push_back(e.core);
            }
            std::vector<std::vector<int>> order(entries.size());
            for (std::size_t i = 0; i < entries.size(); ++i) {
                std::vector<int> later;
                for (std::size_t p = 0; p < parts.size(); ++p) {
                    bool plausible = open_part[p];
                    for (std::size_t c = 0; c < cores[p].size() && !plausible; ++c) {
                        spend();
                        plausible = liftable_core(cores[p][c], entries[i].core);
                    }
                    if (plausible) order[i].push_back(static_cast<int>(p));
                    else later.push_back(static_cast<int>(p));
                }
                order[i].insert(order[i].end(), later.begin(), later.end());
            }
            std::vector<int> owner(entries.size(), -1);
            std::vector<int> load(parts.size(), 0);
            std::size_t unfilled = parts.size();
            long nodes = 0;
            DerivPtr found;
            std::function<void(std::size_t)> enumerate = [&](std::size_t i) {
                if (found || ++nodes > 20000) return;
                if (i == entries.size()) {
                    if (unfilled == 0) found = try_assignment(ctx, parts, entries, owner);
                    return;
                }
                if (entries.size() - i < unfilled) return;
                for (int p : order[i]) {
                    owner[i] = p;
                    if (load[p]++ == 0) --unfilled;
                    enumerate(i + 1);
                    if (--load[p] == 0) ++unfilled;
                    if (found) break;
                }
                owner[i] = -1;
            };
            enumerate(0);
            if (found) return found;
        }

        // Pass 2b: let each summand's synthesized type guide the split.
        // Every synthesized component is assigned to one goal summand it can
        // be coerced onto (a goal summand may carry extra, possibly vacuous,
        // quantifiers); the coefficients routed to each goal summand must add
        // up to its coefficient exactly.
        if (cg.gvars.empty() && !cg.units.empty() &&
            cg.units.size() <= limits_.max_split_entries) {
            DerivPtr found = lift_assignment(ctx, parts, part_synth, cg.units);
            if (found) return found;
        }

        // Pass 2c: when every summand is a value, its weight pins how much of
        // the goal it must carry.  Goal summands are assigned whole to term
        // summands, with one goal summand spread across them so that every
        // share weighs exactly its summand's weight (a merge step can fuse
        // term summands whose contributions the goal lists separately).
        if (cg.gvars.empty() && !entries.empty() && parts.size() >= 2 &&
            entries.size() <= limits_.max_split_entries) {
            std::vector<Scalar> ws;
            bool weighable = true;
            Scalar total(0);
            for (const TermPtr& p : parts) {
                try {
                    ws.push_back(weight_value(p));
                    total = total + ws.back();
                } catch (const NotAValue&) {
                    weighable = false;
                    break;
                }
            }
            if (weighable && total == cg.total_weight()) {
                DerivPtr found;
                long nodes = 0;
                std::vector<int> owner(entries.size(), -1);
                std::vector<Scalar> got(parts.size(), Scalar(0));
                for (std::size_t r = 0; r < entries.size() && !found; ++r) {
                    std::function<void(std::size_t)> go = [&](std::size_t i) {
                        if (found || ++nodes > 40000) return;
                        if (i >= entries.size()) {
                            std::vector<std::vector<CanonEntry>> buckets(parts.size());
                            for (std::size_t e = 0; e < entries.size(); ++e) {
                                if (e != r) buckets[owner[e]].push_back(entries[e]);
                            }
                            bool viable = true;
                            for (std::size_t p = 0; p < parts.size() && viable; ++p) {
                                Scalar deficit = ws[p] - got[p];
                                if (!deficit.is_zero()) {
                                    buckets[p].push_back({deficit, entries[r].core});
                                }
                                if (buckets[p].empty()) viable = false;
                            }
                            if (!viable) return;
                            std::vector<DerivPtr> ds;
                            for (std::size_t p = 0; p < parts.size(); ++p) {
                                DerivPtr d = check_any(ctx, parts[p], recon_entries(buckets[p]));
                                if (!d) return;
                                ds.push_back(std::move(d));
                            }
                            DerivPtr acc = ds[0];
                            for (std::size_t k = 1; k < ds.size(); ++k) {
                                acc = d_plus_i(std::move(acc), ds[k]);
                            }
                            found = std::move(acc);
                            return;
                        }
                        if (i == r) {
                            go(i + 1);
                            return;
                        }
                        for (std::size_t p = 0; p < parts.size() && !found; ++p) {
                            owner[i] = static_cast<int>(p);
                            got[p] = got[p] + entries[i].coeff;
                            go(i + 1);
                            got[p] = got[p] - entries[i].coeff;
                        }
                        owner[i] = -1;
                    };
                    go(0);
                }
                if (found) return found;
            }
        }

        // Pass 3: split the goal proportionally to the summands' weights.
        {
            std::vector<Scalar> ws;
            bool weighable = true;
            Scalar total = 0;
            for (const TermPtr& p : parts) {
                try {
                    ws.push_back(weight_value(p));
                    total = total + ws.back();
                } catch (const NotAValue&) {
                    weighable = false;
                    break;
                }
            }
            if (weighable && total == cg.total_weight()) {
                bool all_zero_goal = true;
                for (const CanonEntry& e : entries) all_zero_goal &= e.coeff.is_zero();
                std::vector<DerivPtr> ds;
                bool ok = true;
                for (std::size_t i = 0; i < parts.size() && ok; ++i) {
                    TypePtr share;
                    if (total.is_zero()) {
                        if (!all_zero_goal) {
                            ok = false;
                            break;
                        }
                        share = recon_entries(entries);
                    } else {
                        share = recon_scaled(cg, ws[i] / total);
                    }
                    DerivPtr d = check_any(ctx, parts[i], share);
                    if (!d) ok = false;
                    else ds.push_back(std::move(d));
                }
                if (ok) {
                    DerivPtr acc = ds[0];
                    for (std::size_t i = 1; i < ds.size(); ++i) {
                        acc = d_plus_i(std::move(acc), ds[i]);
                    }
                    return acc;
                }
            }
        }
        (void)goal;
        return fail("no splitting of the goal across the sum's summands types it");
    }

    DerivPtr try_assignment(const Context& ctx, const std::vector<TermPtr>& parts,
                            const std::vector<CanonEntry>& entries, const std::vector<int>& owner) {
        std::vector<std::vector<CanonEntry>> buckets(parts.size());
        for (std::size_t i = 0; i < entries.size(); ++i) buckets[owner[i]].push_back(entries[i]);
        for (const auto& b : buckets) {
            if (b.empty()) return nullptr;
        }
        std::vector<DerivPtr> ds;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            DerivPtr d = check_any(ctx, parts[p], recon_entries(buckets[p]));
            if (!d) return nullptr;
            ds.push_back(std::move(d));
        }
        DerivPtr acc = ds[0];
        for (std::size_t i = 1; i < ds.size(); ++i) acc = d_plus_i(std::move(acc), ds[i]);
        return acc;
    }

    // True when canonical unit core `a` can plausibly be coerced onto goal
    // core `b`: either they are equivalent, or instantiating a's quantifier
    // prefix can reach b's body once b's own prefix is opened with fresh
    // variables.  A cheap pre-filter; the real check decides.
    bool liftable_core(const TypePtr& a, const TypePtr& b) {
        if (type_equiv(a, b)) return true;
        if (a->kind != TypeKind::Unit || b->kind != TypeKind::Unit) return false;
        std::vector<VarSort> a_sorts;  // outermost first, as Matcher expects
        UnitPtr pa = a->unit;
        while (pa->kind == UnitKind::Forall) {
            a_sorts.push_back(pa->binder_sort);
            pa = pa->body;
        }
        UnitPtr pb = b->unit;
        std::vector<TypeArg> opens;
        while (pb->kind == UnitKind::Forall) {
            opens.push_back(pb->binder_sort == VarSort::Unit
                                ? TypeArg{VarSort::Unit, ufvar(fresh_ty_name()), nullptr}
                                : TypeArg{VarSort::General, nullptr, tgvar_f(fresh_ty_name())});
            pb = pb->body;
        }
        if (!opens.empty()) pb = open_prefix_unit(pb, opens);
        Matcher m(*this, a_sorts);
        return m.match_unit(pa, pb, 0);
    }

    // Assigns each summand's synthesized components to goal summands so the
    // per-summand coefficients add up, then checks every summand against the
    // share it was assigned.
    DerivPtr lift_assignment(const Context& ctx, const std::vector<TermPtr>& parts,
                             const std::vector<DerivPtr>& part_synth,
                             const std::vector<CanonEntry>& entries) {
        struct Component {
            std::size_t part;
            Scalar coeff;
            TypePtr core;
        };
        std::vector<Component> comps;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            if (!part_synth[p]) return nullptr;
            CanonicalType c = canonicalize(part_synth[p]->type);
            if (c.has_gvars()) return nullptr;
            for (const CanonEntry& e : c.units) comps.push_back({p, e.coeff, e.core});
        }
        if (comps.size() > 3 * limits_.max_split_entries) return nullptr;
        std::vector<std::vector<std::size_t>> cand(comps.size());
        int widened = 0;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (std::size_t e = 0; e < entries.size(); ++e) {
                spend();
                if (liftable_core(comps[i].core, entries[e].core)) cand[i].push_back(e);
            }
            if (cand[i].empty()) {
                // The pre-filter misses coercions that move a quantifier
                // across an arrow (a contracted redex re-synthesizes with its
                // chain generalized at the outside): let the real check try
                // every goal summand, within a small combinatorial allowance.
                if (++widened > 2) return nullptr;
                for (std::size_t e = 0; e < entries.size(); ++e) cand[i].push_back(e);
            }
        }
        std::vector<std::vector<bool>> in_cand(comps.size(),
                                               std::vector<bool>(entries.size(), false));
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (std::size_t e : cand[i]) in_cand[i][e] = true;
        }
        std::vector<std::size_t> pick(comps.size(), 0);
        DerivPtr found;
        long split_nodes = 0;
        // `split` designates one component whose coefficient may spread over
        // several goal summands: a merge step can fuse copies whose
        // contributions the goal still lists separately.  -1 means none.
        for (int split = -1; split < static_cast<int>(comps.size()) && !found; ++split) {
            const std::size_t s = static_cast<std::size_t>(split);
            if (split >= 0 && cand[s].size() < 2) continue;
            std::function<void(std::size_t)> enumerate = [&](std::size_t i) {
                if (found) return;
                if (split >= 0 && ++split_nodes > 40000) return;
                spend();
                if (i < comps.size()) {
                    if (split >= 0 && i == s) {
                        enumerate(i + 1);
                        return;
                    }
                    for (std::size_t c = 0; c < cand[i].size() && !found; ++c) {
                        pick[i] = cand[i][c];
                        enumerate(i + 1);
                    }
                    return;
                }
                std::vector<Scalar> sums(entries.size(), Scalar(0));
                std::vector<bool> covered(entries.size(), false);
                for (std::size_t k = 0; k < comps.size(); ++k) {
                    if (split >= 0 && k == s) continue;
                    sums[pick[k]] = sums[pick[k]] + comps[k].coeff;
                    covered[pick[k]] = true;
                }
                std::vector<Scalar> extra(entries.size(), Scalar(0));
                std::vector<bool> takes(entries.size(), false);
                if (split >= 0) {
                    Scalar left = comps[s].coeff;
                    for (std::size_t e = 0; e < entries.size(); ++e) {
                        Scalar r = entries[e].coeff - sums[e];
                        if (r.is_zero() && covered[e]) continue;
                        if (!in_cand[s][e]) return;
                        extra[e] = r;
                        takes[e] = true;
                        left = left - r;
                    }
                    if (!left.is_zero()) return;
                } else {
                    for (std::size_t e = 0; e < entries.size(); ++e) {
                        if (!covered[e] || sums[e] != entries[e].coeff) return;
                    }
                }
                std::vector<DerivPtr> ds;
                for (std::size_t p = 0; p < parts.size(); ++p) {
                    std::vector<CanonEntry> share;
                    for (std::size_t e = 0; e < entries.size(); ++e) {
                        Scalar w(0);
                        bool present = false;
                        for (std::size_t k = 0; k < comps.size(); ++k) {
                            if (split >= 0 && k == s) continue;
                            if (comps[k].part == p && pick[k] == e) {
                                w = w + comps[k].coeff;
                                present = true;
                            }
                        }
                        if (split >= 0 && comps[s].part == p && takes[e]) {
                            w = w + extra[e];
                            present = true;
                        }
                        if (present) share.push_back({w, entries[e].core});
                    }
                    if (share.empty()) return;
                    DerivPtr d = check_any(ctx, parts[p], recon_entries(share));
                    if (!d) return;
                    ds.push_back(std::move(d));
                }
                DerivPtr acc = ds[0];
                for (std::size_t k = 1; k < ds.size(); ++k) acc = d_plus_i(std::move(acc), ds[k]);
                found = std::move(acc);
            };
            enumerate(0);
        }
        return found;
    }

    // From x's declared type to the goal unit, through instantiations and
    // generalizations.
    DerivPtr unit_coerce(DerivPtr d, const Context& ctx, const UnitPtr& target, int fuel) {
        spend();
        if (d->type->kind != TypeKind::Unit) throw Error("Internal", "unit_coerce shape");
        UnitPtr from = d->type->unit;
        if (unit_equiv(from, target)) return ensure_type(std::move(d), tunit(target));
        if (fuel == 0) return fail("instantiation search gave out");
        if (from->kind == UnitKind::Forall) {
            Matcher m(*this, {from->binder_sort});
            if (m.match_unit(from->body, target, 0)) {
                TypeArg a = m.fn_sol[0] ? *m.fn_sol[0] : default_arg(from->binder_sort);
                DerivPtr d2 = d_forall_e(d, a);
                DerivPtr done = unit_coerce(std::move(d2), ctx, target, fuel - 1);
                if (done) return done;
            }
        }
        if (target->kind == UnitKind::Forall) {
            TyVar v{fresh_ty_name(), target->binder_sort};
            TypeArg a = v.sort == VarSort::Unit
                            ? TypeArg{VarSort::Unit, ufvar(v.name), nullptr}
                            : TypeArg{VarSort::General, nullptr, tgvar_f(v.name)};
            UnitPtr opened = open_forall(target->body, a);
            DerivPtr sub = unit_coerce(d, ctx, opened, fuel - 1);
            if (sub && !ctx_mentions(ctx, v)) return d_forall_i(std::move(sub), v);
        }
        return fail("the variable's declared type cannot reach the goal");
    }

};

DerivPtr Infer::synth(const Context& ctx, const TermPtr& t) {
    spend();
    switch (t->kind) {
        case TermKind::FVar: {
            const UnitPtr* u = ctx_lookup(ctx, t->name);
            if (!u) hard(TypeFailKind::UnboundVariable, "unbound variable " + t->name);
            return d_ax(ctx, t->name, *u);
        }
        case TermKind::BVar:
            throw Error("Internal", "synth reached a dangling bound variable");
        case TermKind::Abs:
            return synth_abs(ctx, t, false);
        case TermKind::App: {
            DerivPtr fn = synth(ctx, t->a);
            DerivPtr arg = synth(ctx, t->b);
            return apply_arrow(std::move(fn), std::move(arg));
        }
        case TermKind::Scale:
            return d_s({synth(ctx, t->a)}, {t->coeff});
        case TermKind::Sum: {
            DerivPtr acc = synth(ctx, t->parts[0]);
            for (std::size_t i = 1; i < t->parts.size(); ++i) {
                acc = d_plus_i(std::move(acc), synth(ctx, t->parts[i]));
            }
            return acc;
        }
    }
    throw Error("Internal", "synth: unknown term kind");
}

DerivPtr Infer::check_any(const Context& ctx, const TermPtr& t, const TypePtr& goal) {
    spend();
    DepthGuard guard(*this);
    CanonicalType cg = canonicalize(goal);
    DerivPtr d;
    switch (t->kind) {
        case TermKind::FVar: d = check_var(ctx, t, cg); break;
        case TermKind::Abs: d = check_abs(ctx, t, cg); break;
        case TermKind::App: d = check_app(ctx, t, goal); break;
        case TermKind::Scale: d = check_scale(ctx, t, cg); break;
        case TermKind::Sum: d = check_sum(ctx, t, cg, goal); break;
        case TermKind::BVar:
            throw Error("Internal", "check reached a dangling bound variable");
    }
    if (d) return d;
    return peel_goal(ctx, t, goal, cg);
}

}  // namespace

SynthResult synthesize(const Context& ctx, const TermPtr& t, const InferLimits& limits) {
    Infer inf(limits, ctx, t, nullptr);
    try {
        DerivPtr d = inf.synth(ctx, t);
        TypePtr ct = canonical_form(d->type);
        if (!type_alpha_eq(d->type, ct)) d = d_equiv(std::move(d), ct);
        return {ct, std::move(d), std::nullopt};
    } catch (const HardFail& h) {
        return {nullptr, nullptr, h.f};
    }
}

CheckResult check(const Context& ctx, const TermPtr& t, const TypePtr& goal,
                  const InferLimits& limits) {
    Infer inf(limits, ctx, t, &goal);
    try {
        DerivPtr d = inf.check_any(ctx, t, goal);
        if (!d) return {nullptr, inf.recorded_failure()};
        if (!type_alpha_eq(d->type, goal)) d = d_equiv(std::move(d), goal);
        return {std::move(d), std::nullopt};
    } catch (const HardFail& h) {
        return {nullptr, h.f};
    }
}

}  // namespace vecr
