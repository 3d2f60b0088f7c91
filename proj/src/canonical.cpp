#include "vecr/canonical.hpp"

#include <algorithm>

namespace vecr {

const UnitPtr* ctx_lookup(const Context& ctx, const std::string& name) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
        if (it->first == name) return &it->second;
    }
    return nullptr;
}

std::vector<TyVar> ctx_free_type_vars(const Context& ctx) {
    std::vector<TyVar> out;
    for (const auto& [name, ty] : ctx) {
        (void)name;
        for (const TyVar& v : free_type_vars_unit(ty)) {
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
    }
    return out;
}

bool ctx_mentions(const Context& ctx, const TyVar& v) {
    for (const auto& [name, ty] : ctx) {
        (void)name;
        if (unit_mentions(ty, v)) return true;
    }
    return false;
}

std::vector<CanonEntry> CanonicalType::all() const {
    std::vector<CanonEntry> out = units;
    out.insert(out.end(), gvars.begin(), gvars.end());
    return out;
}

TypePtr CanonicalType::recon() const {
    std::vector<TypePtr> parts;
    for (const CanonEntry& e : all()) parts.push_back(tscale(e.coeff, e.core));
    return tsum(std::move(parts));
}

Scalar CanonicalType::total_weight() const {
    Scalar w = 0;
    for (const CanonEntry& e : units) w = w + e.coeff;
    for (const CanonEntry& e : gvars) w = w + e.coeff;
    return w;
}

namespace {

// Multiplies scalars down through scales and sums, emitting one entry per
// unit or general-variable leaf.
void gather_entries(const TypePtr& t, const Scalar& scale, std::vector<CanonEntry>& out) {
    switch (t->kind) {
        case TypeKind::Unit:
            out.push_back({scale, tunit(canon_unit(t->unit))});
            return;
        case TypeKind::BGVar:
        case TypeKind::FGVar:
            out.push_back({scale, t});
            return;
        case TypeKind::Scale:
            gather_entries(t->body, scale * t->coeff, out);
            return;
        case TypeKind::Sum:
            for (const TypePtr& p : t->parts) gather_entries(p, scale, out);
            return;
    }
}

}  // namespace

UnitPtr canon_unit(const UnitPtr& u) {
    switch (u->kind) {
        case UnitKind::BVar:
        case UnitKind::FVar:
            return u;
        case UnitKind::Arrow:
            return arrow(canon_unit(u->dom), canonical_form(u->cod));
        case UnitKind::Forall:
            return forall(u->binder_sort, u->name, canon_unit(u->body));
    }
    return u;  // unreachable
}

CanonicalType canonicalize(const TypePtr& t) {
    std::vector<CanonEntry> raw;
    gather_entries(t, Scalar(1), raw);
    std::stable_sort(raw.begin(), raw.end(), [](const CanonEntry& x, const CanonEntry& y) {
        return type_cmp(x.core, y.core) < 0;
    });
    CanonicalType result;
    for (CanonEntry& e : raw) {
        auto& bucket = (e.core->kind == TypeKind::Unit) ? result.units : result.gvars;
        if (!bucket.empty() && type_cmp(bucket.back().core, e.core) == 0) {
            bucket.back().coeff = bucket.back().coeff + e.coeff;
        } else {
            bucket.push_back(std::move(e));
        }
    }
    return result;
}

TypePtr canonical_form(const TypePtr& t) { return canonicalize(t).recon(); }

TypePtr display_form(const TypePtr& t) {
    std::vector<TypePtr> parts;
    for (const CanonEntry& e : canonicalize(t).all()) {
        parts.push_back(e.coeff.is_one() ? e.core : tscale(e.coeff, e.core));
    }
    return tsum(std::move(parts));
}

bool type_equiv(const TypePtr& a, const TypePtr& b) {
    return type_alpha_eq(canonical_form(a), canonical_form(b));
}

bool unit_equiv(const UnitPtr& a, const UnitPtr& b) {
    return unit_alpha_eq(canon_unit(a), canon_unit(b));
}

Scalar weight_type(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Unit:
        case TypeKind::BGVar:
        case TypeKind::FGVar:
            return Scalar(1);
        case TypeKind::Scale:
            return t->coeff * weight_type(t->body);
        case TypeKind::Sum: {
            Scalar w = 0;
            for (const TypePtr& p : t->parts) w = w + weight_type(p);
            return w;
        }
    }
    return Scalar(0);  // unreachable
}

Scalar weight_value(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::FVar:
        case TermKind::BVar:
        case TermKind::Abs:
            return Scalar(1);
        case TermKind::Scale:
            return t->coeff * weight_value(t->a);
        case TermKind::Sum: {
            Scalar w = 0;
            for (const TermPtr& p : t->parts) w = w + weight_value(p);
            return w;
        }
        case TermKind::App:
            throw NotAValue("weight is only defined on sums of scaled basis terms");
    }
    throw NotAValue("weight is only defined on sums of scaled basis terms");
}

}  // namespace vecr
