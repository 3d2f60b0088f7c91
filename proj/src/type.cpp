#include "vecr/type.hpp"

#include <algorithm>

namespace vecr {

UnitPtr ubvar(int index) {
    auto n = std::make_shared<UnitType>();
    n->kind = UnitKind::BVar;
    n->index = index;
    return n;
}

UnitPtr ufvar(std::string name) {
    auto n = std::make_shared<UnitType>();
    n->kind = UnitKind::FVar;
    n->name = std::move(name);
    return n;
}

UnitPtr arrow(UnitPtr dom, TypePtr cod) {
    auto n = std::make_shared<UnitType>();
    n->kind = UnitKind::Arrow;
    n->dom = std::move(dom);
    n->cod = std::move(cod);
    return n;
}

UnitPtr forall(VarSort sort, std::string hint, UnitPtr body) {
    auto n = std::make_shared<UnitType>();
    n->kind = UnitKind::Forall;
    n->binder_sort = sort;
    n->name = std::move(hint);
    n->body = std::move(body);
    return n;
}

TypePtr tunit(UnitPtr u) {
    auto n = std::make_shared<Type>();
    n->kind = TypeKind::Unit;
    n->unit = std::move(u);
    return n;
}

TypePtr tgvar_b(int index) {
    auto n = std::make_shared<Type>();
    n->kind = TypeKind::BGVar;
    n->index = index;
    return n;
}

TypePtr tgvar_f(std::string name) {
    auto n = std::make_shared<Type>();
    n->kind = TypeKind::FGVar;
    n->name = std::move(name);
    return n;
}

TypePtr tscale(Scalar k, TypePtr body) {
    auto n = std::make_shared<Type>();
    n->kind = TypeKind::Scale;
    n->coeff = std::move(k);
    n->body = std::move(body);
    return n;
}

TypePtr tsum(std::vector<TypePtr> parts) {
    std::vector<TypePtr> flat;
    for (auto& p : parts) {
        if (p->kind == TypeKind::Sum) {
            flat.insert(flat.end(), p->parts.begin(), p->parts.end());
        } else {
            flat.push_back(p);
        }
    }
    if (flat.empty()) throw Error("Invariant", "empty type sum");
    if (flat.size() == 1) return flat[0];
    // Stable, like the term sum: equal-comparing parts keep construction order.
    std::stable_sort(flat.begin(), flat.end(),
                     [](const TypePtr& a, const TypePtr& b) { return type_cmp(a, b) < 0; });
    auto n = std::make_shared<Type>();
    n->kind = TypeKind::Sum;
    n->parts = std::move(flat);
    return n;
}

static int cmp_int(int a, int b) { return a == b ? 0 : (a < b ? -1 : 1); }

int unit_cmp(const UnitPtr& a, const UnitPtr& b) {
    if (a.get() == b.get()) return 0;
    int ra = static_cast<int>(a->kind), rb = static_cast<int>(b->kind);
    if (ra != rb) return cmp_int(ra, rb);
    switch (a->kind) {
        case UnitKind::BVar:
            return cmp_int(b->index, a->index);  // higher index first
        case UnitKind::FVar:
            return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
        case UnitKind::Arrow: {
            int c = unit_cmp(a->dom, b->dom);
            return c != 0 ? c : type_cmp(a->cod, b->cod);
        }
        case UnitKind::Forall: {
            int c = cmp_int(static_cast<int>(a->binder_sort), static_cast<int>(b->binder_sort));
            return c != 0 ? c : unit_cmp(a->body, b->body);
        }
    }
    return 0;
}

int type_cmp(const TypePtr& a, const TypePtr& b) {
    if (a.get() == b.get()) return 0;
    int ra = static_cast<int>(a->kind), rb = static_cast<int>(b->kind);
    if (ra != rb) return cmp_int(ra, rb);
    switch (a->kind) {
        case TypeKind::Unit:
            return unit_cmp(a->unit, b->unit);
        case TypeKind::BGVar:
            return cmp_int(b->index, a->index);
        case TypeKind::FGVar:
            return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
        case TypeKind::Scale: {
            // Body before coefficient, mirroring the term order: sums of
            // scaled unit types sort by the unit type itself.
            int c = type_cmp(a->body, b->body);
            return c != 0 ? c : a->coeff.cmp(b->coeff);
        }
        case TypeKind::Sum: {
            int c = cmp_int(static_cast<int>(a->parts.size()), static_cast<int>(b->parts.size()));
            if (c != 0) return c;
            for (size_t i = 0; i < a->parts.size(); i++) {
                c = type_cmp(a->parts[i], b->parts[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

namespace {

void collect_unit(const UnitPtr& u, std::vector<TyVar>& out);

void collect_type(const TypePtr& t, std::vector<TyVar>& out) {
    switch (t->kind) {
        case TypeKind::Unit:
            collect_unit(t->unit, out);
            break;
        case TypeKind::BGVar:
            break;
        case TypeKind::FGVar: {
            TyVar v{t->name, VarSort::General};
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
            break;
        }
        case TypeKind::Scale:
            collect_type(t->body, out);
            break;
        case TypeKind::Sum:
            for (auto& p : t->parts) collect_type(p, out);
            break;
    }
}

void collect_unit(const UnitPtr& u, std::vector<TyVar>& out) {
    switch (u->kind) {
        case UnitKind::BVar:
            break;
        case UnitKind::FVar: {
            TyVar v{u->name, VarSort::Unit};
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
            break;
        }
        case UnitKind::Arrow:
            collect_unit(u->dom, out);
            collect_type(u->cod, out);
            break;
        case UnitKind::Forall:
            collect_unit(u->body, out);
            break;
    }
}

}  // namespace

std::vector<TyVar> free_type_vars(const TypePtr& t) {
    std::vector<TyVar> out;
    collect_type(t, out);
    return out;
}

std::vector<TyVar> free_type_vars_unit(const UnitPtr& u) {
    std::vector<TyVar> out;
    collect_unit(u, out);
    return out;
}

bool type_mentions(const TypePtr& t, const TyVar& v) {
    auto vs = free_type_vars(t);
    return std::find(vs.begin(), vs.end(), v) != vs.end();
}

bool unit_mentions(const UnitPtr& u, const TyVar& v) {
    auto vs = free_type_vars_unit(u);
    return std::find(vs.begin(), vs.end(), v) != vs.end();
}

UnitPtr shift_unit(const UnitPtr& u, int d, int cutoff) {
    if (d == 0) return u;
    switch (u->kind) {
        case UnitKind::BVar:
            return u->index >= cutoff ? ubvar(u->index + d) : u;
        case UnitKind::FVar:
            return u;
        case UnitKind::Arrow:
            return arrow(shift_unit(u->dom, d, cutoff), shift_type(u->cod, d, cutoff));
        case UnitKind::Forall:
            return forall(u->binder_sort, u->name, shift_unit(u->body, d, cutoff + 1));
    }
    return u;
}

TypePtr shift_type(const TypePtr& t, int d, int cutoff) {
    if (d == 0) return t;
    switch (t->kind) {
        case TypeKind::Unit:
            return tunit(shift_unit(t->unit, d, cutoff));
        case TypeKind::BGVar:
            return t->index >= cutoff ? tgvar_b(t->index + d) : t;
        case TypeKind::FGVar:
            return t;
        case TypeKind::Scale:
            return tscale(t->coeff, shift_type(t->body, d, cutoff));
        case TypeKind::Sum: {
            std::vector<TypePtr> ps;
            ps.reserve(t->parts.size());
            for (auto& p : t->parts) ps.push_back(shift_type(p, d, cutoff));
            return tsum(std::move(ps));
        }
    }
    return t;
}

namespace {

// One engine for free-variable substitution; exactly one of repl_unit /
// repl_gen is set, matching the substituted variable's sort.
struct Subst {
    const std::string& name;
    VarSort sort;
    const UnitPtr* repl_unit;
    const TypePtr* repl_gen;

    UnitPtr on_unit(const UnitPtr& u) const {
        switch (u->kind) {
            case UnitKind::BVar:
                return u;
            case UnitKind::FVar:
                if (sort == VarSort::Unit && u->name == name) return *repl_unit;
                return u;
            case UnitKind::Arrow:
                return arrow(on_unit(u->dom), on_type(u->cod));
            case UnitKind::Forall:
                return forall(u->binder_sort, u->name, on_unit(u->body));
        }
        return u;
    }

    TypePtr on_type(const TypePtr& t) const {
        switch (t->kind) {
            case TypeKind::Unit:
                return tunit(on_unit(t->unit));
            case TypeKind::BGVar:
                return t;
            case TypeKind::FGVar:
                if (sort == VarSort::General && t->name == name) return *repl_gen;
                return t;
            case TypeKind::Scale:
                return tscale(t->coeff, on_type(t->body));
            case TypeKind::Sum: {
                std::vector<TypePtr> ps;
                ps.reserve(t->parts.size());
                for (auto& p : t->parts) ps.push_back(on_type(p));
                return tsum(std::move(ps));
            }
        }
        return t;
    }
};

}  // namespace

UnitPtr subst_unit_in_unit(const UnitPtr& u, const std::string& name, const UnitPtr& repl) {
    return Subst{name, VarSort::Unit, &repl, nullptr}.on_unit(u);
}
TypePtr subst_unit_in_type(const TypePtr& t, const std::string& name, const UnitPtr& repl) {
    return Subst{name, VarSort::Unit, &repl, nullptr}.on_type(t);
}
UnitPtr subst_gen_in_unit(const UnitPtr& u, const std::string& name, const TypePtr& repl) {
    return Subst{name, VarSort::General, nullptr, &repl}.on_unit(u);
}
TypePtr subst_gen_in_type(const TypePtr& t, const std::string& name, const TypePtr& repl) {
    return Subst{name, VarSort::General, nullptr, &repl}.on_type(t);
}

bool type_arg_eq(const TypeArg& a, const TypeArg& b) {
    if (a.sort != b.sort) return false;
    return a.sort == VarSort::Unit ? unit_alpha_eq(a.unit, b.unit) : type_alpha_eq(a.gen, b.gen);
}

namespace {

struct Opener {
    const TypeArg& arg;

    UnitPtr on_unit(const UnitPtr& u, int depth) const {
        switch (u->kind) {
            case UnitKind::BVar:
                if (u->index == depth) {
                    if (arg.sort != VarSort::Unit)
                        throw Error("SortError", "general binder used in unit position");
                    return shift_unit(arg.unit, depth);
                }
                return u->index > depth ? ubvar(u->index - 1) : u;
            case UnitKind::FVar:
                return u;
            case UnitKind::Arrow:
                return arrow(on_unit(u->dom, depth), on_type(u->cod, depth));
            case UnitKind::Forall:
                return forall(u->binder_sort, u->name, on_unit(u->body, depth + 1));
        }
        return u;
    }

    TypePtr on_type(const TypePtr& t, int depth) const {
        switch (t->kind) {
            case TypeKind::Unit:
                return tunit(on_unit(t->unit, depth));
            case TypeKind::BGVar:
                if (t->index == depth) {
                    if (arg.sort != VarSort::General)
                        throw Error("SortError", "unit binder used in general position");
                    return shift_type(arg.gen, depth);
                }
                return t->index > depth ? tgvar_b(t->index - 1) : t;
            case TypeKind::FGVar:
                return t;
            case TypeKind::Scale:
                return tscale(t->coeff, on_type(t->body, depth));
            case TypeKind::Sum: {
                std::vector<TypePtr> ps;
                ps.reserve(t->parts.size());
                for (auto& p : t->parts) ps.push_back(on_type(p, depth));
                return tsum(std::move(ps));
            }
        }
        return t;
    }
};

struct Closer {
    const TyVar& v;

    UnitPtr on_unit(const UnitPtr& u, int depth) const {
        switch (u->kind) {
            case UnitKind::BVar:
                return u;
            case UnitKind::FVar:
                if (v.sort == VarSort::Unit && u->name == v.name) return ubvar(depth);
                return u;
            case UnitKind::Arrow:
                return arrow(on_unit(u->dom, depth), on_type(u->cod, depth));
            case UnitKind::Forall:
                return forall(u->binder_sort, u->name, on_unit(u->body, depth + 1));
        }
        return u;
    }

    TypePtr on_type(const TypePtr& t, int depth) const {
        switch (t->kind) {
            case TypeKind::Unit:
                return tunit(on_unit(t->unit, depth));
            case TypeKind::BGVar:
                return t;
            case TypeKind::FGVar:
                if (v.sort == VarSort::General && t->name == v.name) return tgvar_b(depth);
                return t;
            case TypeKind::Scale:
                return tscale(t->coeff, on_type(t->body, depth));
            case TypeKind::Sum: {
                std::vector<TypePtr> ps;
                ps.reserve(t->parts.size());
                for (auto& p : t->parts) ps.push_back(on_type(p, depth));
                return tsum(std::move(ps));
            }
        }
        return t;
    }
};

}  // namespace

UnitPtr open_forall(const UnitPtr& body, const TypeArg& arg) {
    return Opener{arg}.on_unit(body, 0);
}

TypePtr open_forall_type(const TypePtr& t, const TypeArg& arg) {
    return Opener{arg}.on_type(t, 0);
}

UnitPtr close_unit(const UnitPtr& u, const TyVar& v, int depth) {
    return Closer{v}.on_unit(u, depth);
}
TypePtr close_type(const TypePtr& t, const TyVar& v, int depth) {
    return Closer{v}.on_type(t, depth);
}

int unit_size(const UnitPtr& u) {
    switch (u->kind) {
        case UnitKind::BVar:
        case UnitKind::FVar:
            return 1;
        case UnitKind::Arrow:
            return 1 + unit_size(u->dom) + type_size(u->cod);
        case UnitKind::Forall:
            return 1 + unit_size(u->body);
    }
    return 1;
}

int type_size(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Unit:
            return unit_size(t->unit);
        case TypeKind::BGVar:
        case TypeKind::FGVar:
            return 1;
        case TypeKind::Scale:
            return 1 + type_size(t->body);
        case TypeKind::Sum: {
            int n = 1;
            for (auto& p : t->parts) n += type_size(p);
            return n;
        }
    }
    return 1;
}

bool unit_locally_closed(const UnitPtr& u, int depth) {
    switch (u->kind) {
        case UnitKind::BVar:
            return u->index < depth;
        case UnitKind::FVar:
            return true;
        case UnitKind::Arrow:
            return unit_locally_closed(u->dom, depth) && type_locally_closed(u->cod, depth);
        case UnitKind::Forall:
            return unit_locally_closed(u->body, depth + 1);
    }
    return true;
}

bool type_locally_closed(const TypePtr& t, int depth) {
    switch (t->kind) {
        case TypeKind::Unit:
            return unit_locally_closed(t->unit, depth);
        case TypeKind::BGVar:
            return t->index < depth;
        case TypeKind::FGVar:
            return true;
        case TypeKind::Scale:
            return type_locally_closed(t->body, depth);
        case TypeKind::Sum:
            for (auto& p : t->parts)
                if (!type_locally_closed(p, depth)) return false;
            return true;
    }
    return true;
}

}  // namespace vecr
