#include "vecr/derivation.hpp"

#include <optional>
#include <sstream>

namespace vecr {

const char* deriv_rule_name(DerivRule r) {
    switch (r) {
        case DerivRule::Ax: return "ax";
        case DerivRule::Equiv: return "equiv";
        case DerivRule::ArrowI: return "arrowI";
        case DerivRule::ArrowE: return "arrowE";
        case DerivRule::ForallI: return "forallI";
        case DerivRule::ForallE: return "forallE";
        case DerivRule::PlusI: return "plusI";
        case DerivRule::OneE: return "oneE";
        case DerivRule::S: return "S";
    }
    return "?";
}

namespace {

DerivPtr mk(Derivation&& d) { return std::make_shared<const Derivation>(std::move(d)); }

// The sum-shaped rules (forallI, forallE, S) read their subject as a list of
// possibly scaled unit summands; a bare unit counts as coefficient 1 and is
// rebuilt bare so the replay stays syntactically exact.
struct UnitSummand {
    Scalar coeff;
    UnitPtr unit;
    bool bare;
};

std::optional<std::vector<UnitSummand>> unit_summands(const TypePtr& t) {
    std::vector<UnitSummand> out;
    auto one = [&](const TypePtr& p) {
        if (p->kind == TypeKind::Unit) {
            out.push_back({Scalar(1), p->unit, true});
            return true;
        }
        if (p->kind == TypeKind::Scale && p->body->kind == TypeKind::Unit) {
            out.push_back({p->coeff, p->body->unit, false});
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

TypePtr rebuild_summands(const std::vector<UnitSummand>& ss) {
    std::vector<TypePtr> parts;
    parts.reserve(ss.size());
    for (const UnitSummand& s : ss) {
        parts.push_back(s.bare ? tunit(s.unit) : tscale(s.coeff, tunit(s.unit)));
    }
    return tsum(std::move(parts));
}

UnitPtr wrap_prefix(const std::vector<VarSort>& prefix, UnitPtr core) {
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
        core = forall(*it, *it == VarSort::Unit ? "X" : "%X", std::move(core));
    }
    return core;
}

[[noreturn]] void builder_bug(const std::string& what) {
    throw Error("Internal", "derivation builder misuse: " + what);
}

}  // namespace

DerivPtr d_ax(Context ctx, const std::string& name, UnitPtr u) {
    Derivation d;
    d.rule = DerivRule::Ax;
    d.term = fvar(name);
    d.type = tunit(std::move(u));
    d.ctx = std::move(ctx);
    return mk(std::move(d));
}

DerivPtr d_equiv(DerivPtr premise, TypePtr to) {
    Derivation d;
    d.rule = DerivRule::Equiv;
    d.ctx = premise->ctx;
    d.term = premise->term;
    d.type = std::move(to);
    d.premises = {std::move(premise)};
    return mk(std::move(d));
}

DerivPtr d_arrow_i(DerivPtr body, const std::string& binder, TermPtr conclusion) {
    if (body->ctx.empty() || body->ctx.back().first != binder) builder_bug("arrowI binder");
    if (conclusion->kind != TermKind::Abs) builder_bug("arrowI conclusion");
    Derivation d;
    d.rule = DerivRule::ArrowI;
    d.ctx = Context(body->ctx.begin(), body->ctx.end() - 1);
    d.term = std::move(conclusion);
    d.type = tunit(arrow(body->ctx.back().second, body->type));
    d.binder = binder;
    d.premises = {std::move(body)};
    return mk(std::move(d));
}

DerivPtr d_arrow_e(DerivPtr fn, DerivPtr arg, ArrowEPayload payload) {
    Derivation d;
    d.rule = DerivRule::ArrowE;
    d.ctx = fn->ctx;
    d.term = app(fn->term, arg->term);
    std::vector<TypePtr> entries;
    for (std::size_t i = 0; i < payload.fn_coeffs.size(); ++i) {
        for (std::size_t j = 0; j < payload.arg_coeffs.size(); ++j) {
            entries.push_back(tscale(payload.fn_coeffs[i] * payload.arg_coeffs[j],
                                     open_prefix_type(payload.fn_cods[i], payload.arg_insts[j])));
        }
    }
    d.type = tsum(std::move(entries));
    d.arrow_e = std::move(payload);
    d.premises = {std::move(fn), std::move(arg)};
    return mk(std::move(d));
}

DerivPtr d_forall_i(DerivPtr premise, const TyVar& v) {
    auto ss = unit_summands(premise->type);
    if (!ss) builder_bug("forallI premise shape");
    for (UnitSummand& s : *ss) s.unit = forall(v.sort, v.name, close_unit(s.unit, v, 0));
    Derivation d;
    d.rule = DerivRule::ForallI;
    d.ctx = premise->ctx;
    d.term = premise->term;
    d.type = rebuild_summands(*ss);
    d.tyvar = v;
    d.premises = {std::move(premise)};
    return mk(std::move(d));
}

DerivPtr d_forall_e(DerivPtr premise, const TypeArg& a) {
    auto ss = unit_summands(premise->type);
    if (!ss) builder_bug("forallE premise shape");
    for (UnitSummand& s : *ss) {
        if (s.unit->kind != UnitKind::Forall || s.unit->binder_sort != a.sort) {
            builder_bug("forallE premise summand");
        }
        s.unit = open_forall(s.unit->body, a);
    }
    Derivation d;
    d.rule = DerivRule::ForallE;
    d.ctx = premise->ctx;
    d.term = premise->term;
    d.type = rebuild_summands(*ss);
    d.inst = a;
    d.premises = {std::move(premise)};
    return mk(std::move(d));
}

DerivPtr d_plus_i(DerivPtr left, DerivPtr right) {
    Derivation d;
    d.rule = DerivRule::PlusI;
    d.ctx = left->ctx;
    d.term = sum({left->term, right->term});
    d.type = tsum({left->type, right->type});
    d.premises = {std::move(left), std::move(right)};
    return mk(std::move(d));
}

DerivPtr d_one_e(DerivPtr premise) {
    if (premise->term->kind != TermKind::Scale || !premise->term->coeff.is_one()) {
        builder_bug("oneE premise term");
    }
    Derivation d;
    d.rule = DerivRule::OneE;
    d.ctx = premise->ctx;
    d.term = premise->term->a;
    d.type = premise->type;
    d.premises = {std::move(premise)};
    return mk(std::move(d));
}

DerivPtr d_s(std::vector<DerivPtr> premises, std::vector<Scalar> coeffs) {
    if (premises.empty() || premises.size() != coeffs.size()) builder_bug("S arity");
    Scalar total = 0;
    std::vector<TypePtr> entries;
    for (std::size_t i = 0; i < premises.size(); ++i) {
        total = total + coeffs[i];
        entries.push_back(tscale(coeffs[i], premises[i]->type));
    }
    Derivation d;
    d.rule = DerivRule::S;
    d.ctx = premises[0]->ctx;
    d.term = scale(total, premises[0]->term);
    d.type = tsum(std::move(entries));
    d.s_coeffs = std::move(coeffs);
    d.premises = std::move(premises);
    return mk(std::move(d));
}

UnitPtr open_prefix_unit(const UnitPtr& u, const std::vector<TypeArg>& args) {
    UnitPtr out = u;
    for (auto it = args.rbegin(); it != args.rend(); ++it) out = open_forall(out, *it);
    return out;
}

TypePtr open_prefix_type(const TypePtr& t, const std::vector<TypeArg>& args) {
    TypePtr out = t;
    for (auto it = args.rbegin(); it != args.rend(); ++it) out = open_forall_type(out, *it);
    return out;
}

namespace {

bool ctx_eq(const Context& a, const Context& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first || !unit_alpha_eq(a[i].second, b[i].second)) return false;
    }
    return true;
}

bool type_arg_closed(const TypeArg& a) {
    if (a.sort == VarSort::Unit) return a.unit && unit_locally_closed(a.unit);
    return a.gen && type_locally_closed(a.gen);
}

// One node's local obligations; premises are assumed to state what they state.
std::optional<std::string> check_node(const Derivation& d) {
    auto premise_count = [&](std::size_t n) -> std::optional<std::string> {
        if (d.premises.size() != n) return std::string("wrong premise count");
        for (const DerivPtr& p : d.premises) {
            if (!ctx_eq(p->ctx, d.ctx)) return std::string("premise context differs");
        }
        return std::nullopt;
    };

    switch (d.rule) {
        case DerivRule::Ax: {
            if (auto e = premise_count(0)) return e;
            if (d.term->kind != TermKind::FVar) return std::string("subject is not a variable");
            if (d.type->kind != TypeKind::Unit) return std::string("type is not a unit type");
            const UnitPtr* bound = ctx_lookup(d.ctx, d.term->name);
            if (!bound) return std::string("variable not in context");
            if (!unit_alpha_eq(*bound, d.type->unit)) return std::string("type differs from context");
            return std::nullopt;
        }
        case DerivRule::Equiv: {
            if (auto e = premise_count(1)) return e;
            if (!alpha_eq(d.term, d.premises[0]->term)) return std::string("term changed");
            if (!type_equiv(d.type, d.premises[0]->type)) return std::string("types not equivalent");
            return std::nullopt;
        }
        case DerivRule::ArrowI: {
            if (d.premises.size() != 1) return std::string("wrong premise count");
            const Derivation& body = *d.premises[0];
            if (d.term->kind != TermKind::Abs) return std::string("subject is not an abstraction");
            if (d.binder.empty()) return std::string("missing binder name");
            if (ctx_lookup(d.ctx, d.binder)) return std::string("binder shadows the context");
            if (mentions(d.term, d.binder)) return std::string("binder name free in subject");
            if (body.ctx.size() != d.ctx.size() + 1 ||
                !ctx_eq(Context(body.ctx.begin(), body.ctx.end() - 1), d.ctx) ||
                body.ctx.back().first != d.binder) {
                return std::string("premise context is not an extension by the binder");
            }
            const UnitPtr& dom = body.ctx.back().second;
            if (!alpha_eq(open_binder(d.term->a, fvar(d.binder)), body.term)) {
                return std::string("premise term is not the opened body");
            }
            if (d.type->kind != TypeKind::Unit || d.type->unit->kind != UnitKind::Arrow ||
                !unit_alpha_eq(d.type->unit->dom, dom) ||
                !type_alpha_eq(d.type->unit->cod, body.type)) {
                return std::string("conclusion is not dom -> body type");
            }
            return std::nullopt;
        }
        case DerivRule::ArrowE: {
            if (auto e = premise_count(2)) return e;
            const ArrowEPayload& p = d.arrow_e;
            const std::size_t k = p.prefix.size();
            const std::size_t n = p.fn_coeffs.size();
            const std::size_t m = p.arg_coeffs.size();
            if (n == 0 || p.fn_cods.size() != n) return std::string("bad function payload");
            if (m == 0 || p.arg_insts.size() != m) return std::string("bad argument payload");
            if (!p.dom || !unit_locally_closed(p.dom, static_cast<int>(k))) {
                return std::string("domain escapes the prefix");
            }
            for (const TypePtr& cod : p.fn_cods) {
                if (!type_locally_closed(cod, static_cast<int>(k))) {
                    return std::string("codomain escapes the prefix");
                }
            }
            for (const auto& insts : p.arg_insts) {
                if (insts.size() != k) return std::string("instantiation arity differs from prefix");
                for (std::size_t l = 0; l < k; ++l) {
                    if (insts[l].sort != p.prefix[l] || !type_arg_closed(insts[l])) {
                        return std::string("ill-sorted or open instantiation");
                    }
                }
            }
            if (d.term->kind != TermKind::App || !alpha_eq(d.term->a, d.premises[0]->term) ||
                !alpha_eq(d.term->b, d.premises[1]->term)) {
                return std::string("subject is not the application of the premises");
            }
            std::vector<TypePtr> fn_entries;
            for (std::size_t i = 0; i < n; ++i) {
                fn_entries.push_back(
                    tscale(p.fn_coeffs[i], tunit(wrap_prefix(p.prefix, arrow(p.dom, p.fn_cods[i])))));
            }
            if (!type_alpha_eq(d.premises[0]->type, tsum(std::move(fn_entries)))) {
                return std::string("function premise shape differs from payload");
            }
            std::vector<TypePtr> arg_entries;
            for (std::size_t j = 0; j < m; ++j) {
                arg_entries.push_back(
                    tscale(p.arg_coeffs[j], tunit(open_prefix_unit(p.dom, p.arg_insts[j]))));
            }
            if (!type_alpha_eq(d.premises[1]->type, tsum(std::move(arg_entries)))) {
                return std::string("argument premise shape differs from payload");
            }
            std::vector<TypePtr> out;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    out.push_back(tscale(p.fn_coeffs[i] * p.arg_coeffs[j],
                                         open_prefix_type(p.fn_cods[i], p.arg_insts[j])));
                }
            }
            if (!type_alpha_eq(d.type, tsum(std::move(out)))) {
                return std::string("conclusion differs from the combined codomains");
            }
            return std::nullopt;
        }
        case DerivRule::ForallI: {
            if (auto e = premise_count(1)) return e;
            if (!alpha_eq(d.term, d.premises[0]->term)) return std::string("term changed");
            if (d.tyvar.name.empty()) return std::string("missing generalized variable");
            if (ctx_mentions(d.ctx, d.tyvar)) return std::string("variable is free in the context");
            auto ss = unit_summands(d.premises[0]->type);
            if (!ss) return std::string("premise is not a sum of scaled unit types");
            for (UnitSummand& s : *ss) {
                s.unit = forall(d.tyvar.sort, d.tyvar.name, close_unit(s.unit, d.tyvar, 0));
            }
            if (!type_alpha_eq(d.type, rebuild_summands(*ss))) {
                return std::string("conclusion does not quantify each summand");
            }
            return std::nullopt;
        }
        case DerivRule::ForallE: {
            if (auto e = premise_count(1)) return e;
            if (!alpha_eq(d.term, d.premises[0]->term)) return std::string("term changed");
            if (!type_arg_closed(d.inst)) return std::string("ill-formed instantiation");
            auto ss = unit_summands(d.premises[0]->type);
            if (!ss) return std::string("premise is not a sum of scaled unit types");
            for (UnitSummand& s : *ss) {
                if (s.unit->kind != UnitKind::Forall || s.unit->binder_sort != d.inst.sort) {
                    return std::string("summand is not a forall of the instantiated sort");
                }
                s.unit = open_forall(s.unit->body, d.inst);
            }
            if (!type_alpha_eq(d.type, rebuild_summands(*ss))) {
                return std::string("conclusion does not instantiate each summand");
            }
            return std::nullopt;
        }
        case DerivRule::PlusI: {
            if (auto e = premise_count(2)) return e;
            if (!alpha_eq(d.term, sum({d.premises[0]->term, d.premises[1]->term}))) {
                return std::string("subject is not the sum of the premises");
            }
            if (!type_alpha_eq(d.type, tsum({d.premises[0]->type, d.premises[1]->type}))) {
                return std::string("conclusion is not the sum of the premise types");
            }
            return std::nullopt;
        }
        case DerivRule::OneE: {
            if (auto e = premise_count(1)) return e;
            const TermPtr& pt = d.premises[0]->term;
            if (pt->kind != TermKind::Scale || !pt->coeff.is_one() || !alpha_eq(pt->a, d.term)) {
                return std::string("premise term is not 1 * subject");
            }
            if (!type_alpha_eq(d.type, d.premises[0]->type)) return std::string("type changed");
            return std::nullopt;
        }
        case DerivRule::S: {
            const std::size_t n = d.s_coeffs.size();
            if (n == 0 || d.premises.size() != n) return std::string("bad coefficient count");
            for (const DerivPtr& p : d.premises) {
                if (!ctx_eq(p->ctx, d.ctx)) return std::string("premise context differs");
                if (!alpha_eq(p->term, d.premises[0]->term)) {
                    return std::string("premises type different terms");
                }
            }
            Scalar total = 0;
            std::vector<TypePtr> entries;
            for (std::size_t i = 0; i < n; ++i) {
                total = total + d.s_coeffs[i];
                entries.push_back(tscale(d.s_coeffs[i], d.premises[i]->type));
            }
            if (d.term->kind != TermKind::Scale || d.term->coeff != total ||
                !alpha_eq(d.term->a, d.premises[0]->term)) {
                return std::string("subject is not the summed scale of the premise term");
            }
            if (!type_alpha_eq(d.type, tsum(std::move(entries)))) {
                return std::string("conclusion is not the matching sum of scaled premise types");
            }
            return std::nullopt;
        }
    }
    return std::string("unknown rule");
}

std::optional<std::string> validate_walk(const DerivPtr& d) {
    for (const DerivPtr& p : d->premises) {
        if (!p) return std::string("null premise");
        if (auto e = validate_walk(p)) return e;
    }
    if (auto e = check_node(*d)) {
        return std::string(deriv_rule_name(d->rule)) + ": " + *e;
    }
    return std::nullopt;
}

void render_walk(const DerivPtr& d, const PrintOpts& opts, int depth, std::ostringstream& out) {
    for (int i = 0; i < depth; ++i) out << "  ";
    out << deriv_rule_name(d->rule);
    switch (d->rule) {
        case DerivRule::ArrowI:
            out << "[" << d->binder << "]";
            break;
        case DerivRule::ForallI:
            out << "[" << (d->tyvar.sort == VarSort::General ? "%" : "") << d->tyvar.name << "]";
            break;
        case DerivRule::ForallE:
            out << "["
                << (d->inst.sort == VarSort::Unit ? print_unit(d->inst.unit, opts)
                                                  : print_type(d->inst.gen, opts))
                << "]";
            break;
        case DerivRule::S: {
            out << "[";
            for (std::size_t i = 0; i < d->s_coeffs.size(); ++i) {
                if (i > 0) out << ", ";
                out << d->s_coeffs[i].show();
            }
            out << "]";
            break;
        }
        default:
            break;
    }
    out << "  ";
    for (std::size_t i = 0; i < d->ctx.size(); ++i) {
        if (i > 0) out << ", ";
        out << d->ctx[i].first << ": " << print_unit(d->ctx[i].second, opts);
    }
    out << (d->ctx.empty() ? "" : " ") << (opts.unicode ? "\xe2\x8a\xa2 " : "|- ");
    out << print_term(d->term, opts) << " : " << print_type(d->type, opts) << "\n";
    for (const DerivPtr& p : d->premises) render_walk(p, opts, depth + 1, out);
}

}  // namespace

ValidationResult validate(const DerivPtr& d) {
    if (!d) return {false, "empty derivation"};
    if (auto e = validate_walk(d)) return {false, *e};
    return {};
}

std::string render_derivation(const DerivPtr& d, const PrintOpts& opts) {
    std::ostringstream out;
    if (d) render_walk(d, opts, 0, out);
    return out.str();
}

}  // namespace vecr
