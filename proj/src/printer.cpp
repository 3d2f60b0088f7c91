#include "vecr/printer.hpp"

#include <algorithm>
#include <set>

namespace vecr {

namespace {

std::string fresh_name(const std::string& hint, const std::set<std::string>& avoid) {
    std::string base = hint.empty() ? "x" : hint;
    if (!avoid.count(base)) return base;
    for (int i = 1;; i++) {
        std::string cand = base + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

struct TermPrinter {
    const PrintOpts& opts;
    std::vector<std::string> scope;  // binder names, innermost last

    std::string star() const { return opts.unicode ? "\xc2\xb7" : "*"; }
    std::string lam() const { return opts.unicode ? "\xce\xbb" : "\\"; }

    const std::string* alias_for(const TermPtr& t) const {
        if (!opts.aliases || t->kind == TermKind::BVar || t->kind == TermKind::FVar)
            return nullptr;
        for (auto& [name, def] : *opts.aliases) {
            if (alpha_eq(t, def)) return &name;
        }
        return nullptr;
    }

    // Anything that re-parses as a single atom (or scaled atom) without
    // needing parentheses in argument/sum/scale positions.
    std::string var_ref(const TermPtr& t) const {
        return scope[scope.size() - 1 - static_cast<size_t>(t->index)];
    }

    std::string print(const TermPtr& t) {
        if (const std::string* a = alias_for(t)) return *a;
        switch (t->kind) {
            case TermKind::BVar:
                return var_ref(t);
            case TermKind::FVar:
                return t->name;
            case TermKind::Abs: {
                std::set<std::string> avoid(scope.begin(), scope.end());
                for (auto& v : free_vars(t->a)) avoid.insert(v);
                std::string name = fresh_name(t->name, avoid);
                scope.push_back(name);
                std::string body = print(t->a);
                scope.pop_back();
                std::string ann =
                    t->ann ? ": " + print_unit_with_scope(t->ann) + ". " : ".";
                return lam() + name + ann + body;
            }
            case TermKind::App: {
                std::string f = print(t->a);
                std::string arg = atomized(t->b);
                return "(" + f + ") " + arg;
            }
            case TermKind::Scale:
                return t->coeff.show() + star() + atomized(t->a);
            case TermKind::Sum: {
                std::string out;
                for (size_t i = 0; i < t->parts.size(); i++) {
                    if (i) out += " + ";
                    const TermPtr& p = t->parts[i];
                    bool needs_parens =
                        p->kind == TermKind::Abs && alias_for(p) == nullptr;
                    out += needs_parens ? "(" + print(p) + ")" : print(p);
                }
                return out;
            }
        }
        return "?";
    }

    std::string atomized(const TermPtr& t) {
        if (const std::string* a = alias_for(t)) return *a;
        switch (t->kind) {
            case TermKind::BVar:
            case TermKind::FVar:
                return print(t);
            default:
                return "(" + print(t) + ")";
        }
    }

    std::string print_unit_with_scope(const UnitPtr& u);
};

struct TypePrinter {
    const PrintOpts& opts;
    std::vector<TyVar> scope;

    std::string star() const { return opts.unicode ? "\xc2\xb7" : "*"; }
    std::string arrow_tok() const { return opts.unicode ? " \xe2\x86\x92 " : " -> "; }
    std::string forall_tok() const { return opts.unicode ? "\xe2\x88\x80" : "forall "; }

    std::string show_var(const TyVar& v) const {
        return v.sort == VarSort::General ? "%" + v.name : v.name;
    }

    std::string bound_ref(int index) const {
        return show_var(scope[scope.size() - 1 - static_cast<size_t>(index)]);
    }

    std::string pick_binder(const std::string& hint, VarSort sort, const UnitPtr& body) {
        std::set<std::string> avoid;
        for (auto& v : scope)
            if (v.sort == sort) avoid.insert(v.name);
        for (auto& v : free_type_vars_unit(body))
            if (v.sort == sort) avoid.insert(v.name);
        return fresh_name(hint.empty() ? (sort == VarSort::Unit ? "X" : "Y") : hint, avoid);
    }

    std::string print_unit(const UnitPtr& u) {
        switch (u->kind) {
            case UnitKind::BVar:
                return bound_ref(u->index);
            case UnitKind::FVar:
                return u->name;
            case UnitKind::Arrow: {
                std::string d = print_unit(u->dom);
                if (u->dom->kind == UnitKind::Arrow || u->dom->kind == UnitKind::Forall)
                    d = "(" + d + ")";
                return d + arrow_tok() + print_type(u->cod);
            }
            case UnitKind::Forall: {
                // Collapse a run of binders into one forall.
                std::string binders;
                const UnitType* cur = u.get();
                size_t pushed = 0;
                while (cur->kind == UnitKind::Forall) {
                    UnitPtr body = cur->body;
                    std::string name = pick_binder(cur->name, cur->binder_sort, body);
                    if (!binders.empty()) binders += " ";
                    binders += show_var({name, cur->binder_sort});
                    scope.push_back({name, cur->binder_sort});
                    pushed++;
                    cur = body.get();
                }
                std::string body = print_unit_raw(cur);
                for (size_t i = 0; i < pushed; i++) scope.pop_back();
                return forall_tok() + binders + "." + body;
            }
        }
        return "?";
    }

    std::string print_unit_raw(const UnitType* u) {
        UnitPtr tmp(u, [](const UnitType*) {});  // non-owning view
        return print_unit(tmp);
    }

    std::string print_type(const TypePtr& t) {
        switch (t->kind) {
            case TypeKind::Unit:
                return print_unit(t->unit);
            case TypeKind::BGVar:
                return bound_ref(t->index);
            case TypeKind::FGVar:
                return "%" + t->name;
            case TypeKind::Scale:
                return t->coeff.show() + star() + atomized(t->body);
            case TypeKind::Sum: {
                std::string out;
                for (size_t i = 0; i < t->parts.size(); i++) {
                    if (i) out += " + ";
                    const TypePtr& p = t->parts[i];
                    bool parens = p->kind == TypeKind::Unit &&
                                  (p->unit->kind == UnitKind::Arrow ||
                                   p->unit->kind == UnitKind::Forall);
                    out += parens ? "(" + print_type(p) + ")" : print_type(p);
                }
                return out;
            }
        }
        return "?";
    }

    std::string atomized(const TypePtr& t) {
        switch (t->kind) {
            case TypeKind::BGVar:
            case TypeKind::FGVar:
                return print_type(t);
            case TypeKind::Unit:
                if (t->unit->kind == UnitKind::BVar || t->unit->kind == UnitKind::FVar)
                    return print_type(t);
                return "(" + print_type(t) + ")";
            default:
                return "(" + print_type(t) + ")";
        }
    }
};

std::string TermPrinter::print_unit_with_scope(const UnitPtr& u) {
    TypePrinter tp{opts, {}};
    return tp.print_unit(u);
}

}  // namespace

std::string print_term(const TermPtr& t, const PrintOpts& opts) {
    TermPrinter p{opts, {}};
    return p.print(t);
}

std::string print_type(const TypePtr& t, const PrintOpts& opts) {
    TypePrinter p{opts, {}};
    return p.print_type(t);
}

std::string print_unit(const UnitPtr& u, const PrintOpts& opts) {
    TypePrinter p{opts, {}};
    return p.print_unit(u);
}

}  // namespace vecr
