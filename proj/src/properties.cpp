#include "vecr/properties.hpp"

#include <random>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "vecr/encodings.hpp"
#include "vecr/infer.hpp"
#include "vecr/printer.hpp"
#include "vecr/rewrite.hpp"

namespace vecr {

namespace {

struct R {
    std::mt19937_64 eng;
    explicit R(std::uint64_t seed) : eng(seed) {}
    int upto(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
    bool coin(double p = 0.5) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng) < p;
    }
    Scalar scal(bool allow_zero = true) {
        static const std::vector<Scalar> pool = [] {
            Scalar r2 = Scalar::sqrt2();
            return std::vector<Scalar>{Scalar(1),          Scalar(-1),
                                       Scalar(2),          Scalar(3),
                                       Scalar::rat(1, 2),  Scalar::rat(-1, 2),
                                       r2,                 Scalar(1) / r2,
                                       Scalar(1) + r2,     Scalar(2) - r2};
        }();
        if (allow_zero && upto(8) == 0) return Scalar(0);
        return pool[static_cast<std::size_t>(upto(static_cast<int>(pool.size())))];
    }
};

std::string show_ctx(const Context& ctx) {
    std::string out;
    for (const auto& [n, u] : ctx) {
        if (!out.empty()) out += ", ";
        out += n + ": " + print_unit(u);
    }
    return out;
}

std::string show_judgment(const Context& ctx, const TermPtr& t, const TypePtr& ty) {
    std::string out = show_ctx(ctx);
    if (!out.empty()) out += " ";
    return out + "|- " + print_term(t) + " : " + print_type(ty);
}

}  // namespace

// ---- the typed-term generator -------------------------------------------

struct TypedGen::Impl {
    GenConfig cfg;
    R rng;
    Context base;
    std::vector<UnitPtr> unit_pool;
    long proposed = 0;
    long accepted = 0;
    int fresh = 0;

    explicit Impl(const GenConfig& c) : cfg(c), rng(c.seed) {
        if (!cfg.closed) {
            base.emplace_back("u", ufvar("U"));
            base.emplace_back("v", ufvar("V"));
            base.emplace_back("h", arrow(ufvar("U"), tunit(ufvar("V"))));
            base.emplace_back("p", identity_type());
        }
        unit_pool = {ufvar("U"), ufvar("V"), arrow(ufvar("U"), tunit(ufvar("V"))),
                     identity_type(), type_true()};
    }

    TermPtr constant() {
        switch (rng.upto(5)) {
            case 0: return term_true();
            case 1: return term_false();
            case 2: return term_id();
            case 3: return basis_term(static_cast<std::size_t>(1 + rng.upto(3)), 3);
            default: return basis_term(static_cast<std::size_t>(1 + rng.upto(2)), 2);
        }
    }

    TermPtr leaf(const std::vector<std::pair<std::string, UnitPtr>>& scope) {
        if (!scope.empty() && rng.coin(0.55)) {
            return fvar(scope[static_cast<std::size_t>(
                                 rng.upto(static_cast<int>(scope.size())))]
                            .first);
        }
        return constant();
    }

    TermPtr gen(int d, std::vector<std::pair<std::string, UnitPtr>>& scope) {
        if (d <= 0) return leaf(scope);
        switch (rng.upto(12)) {
            case 0:
            case 1:
                return leaf(scope);
            case 2:
            case 3:
            case 4: {  // annotated or bare abstraction
                UnitPtr dom = unit_pool[static_cast<std::size_t>(
                    rng.upto(static_cast<int>(unit_pool.size())))];
                std::string x = "a" + std::to_string(fresh++);
                scope.emplace_back(x, dom);
                TermPtr body = gen(d - 1, scope);
                scope.pop_back();
                return abs(x, rng.coin(0.8) ? dom : nullptr, close_term(body, x, 0));
            }
            case 5:
            case 6: {  // application, biased toward heads that accept anything
                TermPtr fn = rng.coin(0.6) ? constant() : gen(d - 1, scope);
                return app(fn, gen(d - 1, scope));
            }
            case 7:
            case 8:
                return scale(rng.scal(), gen(d - 1, scope));
            default: {  // sums, with duplicated summands sometimes
                TermPtr a = gen(d - 1, scope);
                if (rng.coin(0.35)) {
                    return sum({a, scale(rng.scal(), a)});
                }
                TermPtr b = gen(d - 1, scope);
                if (rng.coin(0.2)) return sum({a, b, gen(d - 1, scope)});
                return sum({a, b});
            }
        }
    }

    std::optional<TypedTerm> draw() {
        ++proposed;
        auto scope = base;
        TermPtr cand = gen(cfg.max_depth, scope);
        InferLimits lim;
        lim.budget = cfg.infer_budget;
        SynthResult s = synthesize(base, cand, lim);
        if (!s.type) return std::nullopt;
        ValidationResult v = validate(s.deriv);
        if (!v.ok) {
            throw Error("Internal", "synthesized derivation failed validation: " + v.error);
        }
        ++accepted;
        return TypedTerm{base, cand, s.type, s.deriv};
    }
};

TypedGen::TypedGen(const GenConfig& cfg) : impl_(new Impl(cfg)) {}
TypedGen::~TypedGen() { delete impl_; }
std::optional<TypedTerm> TypedGen::draw() { return impl_->draw(); }
long TypedGen::proposed() const { return impl_->proposed; }
long TypedGen::accepted() const { return impl_->accepted; }

// ---- the property suites ------------------------------------------------

namespace {

constexpr long kProposalFactor = 400;  // proposals allowed per requested case

InferLimits limits_of(const GenConfig& cfg) {
    InferLimits lim;
    lim.budget = cfg.infer_budget;
    return lim;
}

// First reduct of (ctx |- term : type) that fails to re-check, if any.
std::optional<std::string> preservation_failure(const Context& ctx, const TermPtr& term,
                                                const TypePtr& type, const InferLimits& lim) {
    for (const RedexSite& site : step_candidates(term)) {
        CheckResult r = check(ctx, site.result, type, lim);
        if (!r.deriv) {
            std::string why = r.failure ? r.failure->message : "no derivation";
            return std::string(rule_name(site.rule)) + " step to " + print_term(site.result) +
                   " no longer checks (" + why + ")";
        }
    }
    return std::nullopt;
}

std::vector<TermPtr> shrink_children(const TermPtr& t) {
    std::vector<TermPtr> out;
    switch (t->kind) {
        case TermKind::Scale: out.push_back(t->a); break;
        case TermKind::Sum:
            for (const TermPtr& p : t->parts) out.push_back(p);
            for (std::size_t i = 0; i < t->parts.size(); ++i) {
                std::vector<TermPtr> rest;
                for (std::size_t k = 0; k < t->parts.size(); ++k) {
                    if (k != i) rest.push_back(t->parts[k]);
                }
                out.push_back(sum(std::move(rest)));
            }
            break;
        case TermKind::App:
            out.push_back(t->a);
            out.push_back(t->b);
            break;
        default: break;
    }
    return out;
}

// Shrinks a preservation counterexample: keeps replacing the term by a
// structural child that still types and still breaks preservation.
void shrink_preservation(const Context& ctx, TermPtr& term, TypePtr& type,
                         const InferLimits& lim) {
    for (int round = 0; round < 12; ++round) {
        bool moved = false;
        for (const TermPtr& c : shrink_children(term)) {
            SynthResult s = synthesize(ctx, c, lim);
            if (!s.type) continue;
            if (preservation_failure(ctx, c, s.type, lim)) {
                term = c;
                type = s.type;
                moved = true;
                break;
            }
        }
        if (!moved) return;
    }
}

void record(PropertyReport& rep, const std::string& counterexample) {
    ++rep.failures;
    if (rep.counterexamples.size() < 5) rep.counterexamples.push_back(counterexample);
}

template <typename PerCase>
PropertyReport drive(const char* name, const GenConfig& cfg, PerCase per_case) {
    PropertyReport rep;
    rep.property = name;
    rep.seed = cfg.seed;
    TypedGen gen(cfg);
    while (rep.cases < cfg.cases &&
           gen.proposed() < static_cast<long>(cfg.cases) * kProposalFactor) {
        std::optional<TypedTerm> tt = gen.draw();
        if (!tt) continue;
        ++rep.cases;
        per_case(*tt, rep);
    }
    return rep;
}

}  // namespace

PropertyReport run_subject_reduction(const GenConfig& cfg) {
    InferLimits lim = limits_of(cfg);
    return drive("subject-reduction", cfg, [&](const TypedTerm& tt, PropertyReport& rep) {
        std::optional<std::string> bad =
            preservation_failure(tt.ctx, tt.term, tt.type, lim);
        if (!bad) return;
        TermPtr term = tt.term;
        TypePtr type = tt.type;
        shrink_preservation(tt.ctx, term, type, lim);
        std::optional<std::string> why = preservation_failure(tt.ctx, term, type, lim);
        record(rep, show_judgment(tt.ctx, term, type) + " — " + why.value_or(*bad));
    });
}

PropertyReport run_progress(const GenConfig& cfg) {
    GenConfig closed = cfg;
    closed.closed = true;
    return drive("progress", closed, [&](const TypedTerm& tt, PropertyReport& rep) {
        if (is_normal_form(tt.term) && !is_value(tt.term)) {
            record(rep, show_judgment(tt.ctx, tt.term, tt.type) +
                            " — normal form but not a value");
        }
    });
}

PropertyReport run_normalization(const GenConfig& cfg) {
    R strategy_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    return drive("normalization", cfg, [&](const TypedTerm& tt, PropertyReport& rep) {
        NormalizeResult det = normalize(tt.term, cfg.fuel);
        if (det.fuel_exhausted) {
            record(rep, show_judgment(tt.ctx, tt.term, tt.type) +
                            " — deterministic reduction ran out of fuel");
            return;
        }
        for (int k = 0; k < cfg.random_strategies; ++k) {
            TermPtr cur = tt.term;
            long left = cfg.fuel;
            bool done = false;
            while (left-- > 0) {
                std::vector<RedexSite> sites = step_candidates(cur);
                if (sites.empty()) {
                    done = true;
                    break;
                }
                cur = sites[static_cast<std::size_t>(
                                strategy_rng.upto(static_cast<int>(sites.size())))]
                          .result;
            }
            if (!done) {
                record(rep, show_judgment(tt.ctx, tt.term, tt.type) +
                                " — a random strategy ran out of fuel");
                return;
            }
        }
    });
}

PropertyReport run_weight_preservation(const GenConfig& cfg) {
    GenConfig closed = cfg;
    closed.closed = true;
    return drive("weight-preservation", closed, [&](const TypedTerm& tt, PropertyReport& rep) {
        NormalizeResult r = normalize(tt.term, cfg.fuel);
        if (r.fuel_exhausted) {
            record(rep, show_judgment(tt.ctx, tt.term, tt.type) + " — ran out of fuel");
            return;
        }
        if (!is_value(r.term)) {
            record(rep, show_judgment(tt.ctx, tt.term, tt.type) + " — normal form " +
                            print_term(r.term) + " is not a value");
            return;
        }
        Scalar got = weight_value(r.term);
        Scalar want = weight_type(tt.type);
        if (got != want) {
            record(rep, show_judgment(tt.ctx, tt.term, tt.type) + " — normal form " +
                            print_term(r.term) + " weighs " + got.show() + ", type weighs " +
                            want.show());
        }
    });
}

// ---- the equivalence suite ----------------------------------------------

namespace {

UnitPtr rand_unit(R& rng, int d, std::vector<VarSort>& env);

TypePtr rand_type(R& rng, int d, std::vector<VarSort>& env) {
    if (d <= 0 || rng.coin(0.4)) {
        if (rng.coin(0.25)) {
            for (std::size_t i = 0; i < env.size(); ++i) {
                std::size_t idx = env.size() - 1 - static_cast<std::size_t>(rng.upto(
                                                      static_cast<int>(env.size())));
                if (env[idx] == VarSort::General) {
                    return tgvar_b(static_cast<int>(env.size() - 1 - idx));
                }
            }
            return tgvar_f(rng.coin() ? "A" : "B");
        }
        return tunit(rand_unit(rng, d, env));
    }
    switch (rng.upto(4)) {
        case 0: return tunit(rand_unit(rng, d, env));
        case 1: return tscale(rng.scal(), rand_type(rng, d - 1, env));
        default: {
            std::vector<TypePtr> ps;
            int n = 2 + rng.upto(2);
            for (int i = 0; i < n; ++i) ps.push_back(rand_type(rng, d - 1, env));
            return tsum(std::move(ps));
        }
    }
}

UnitPtr rand_unit(R& rng, int d, std::vector<VarSort>& env) {
    if (d <= 0 || rng.coin(0.4)) {
        for (std::size_t i = 0; i < env.size() && rng.coin(0.5); ++i) {
            std::size_t k = static_cast<std::size_t>(rng.upto(static_cast<int>(env.size())));
            if (env[env.size() - 1 - k] == VarSort::Unit) {
                return ubvar(static_cast<int>(k));
            }
        }
        return ufvar(rng.coin() ? "U" : "V");
    }
    if (rng.coin(0.6)) {
        return arrow(rand_unit(rng, d - 1, env), rand_type(rng, d - 1, env));
    }
    VarSort s = rng.coin(0.7) ? VarSort::Unit : VarSort::General;
    env.push_back(s);
    UnitPtr body = rand_unit(rng, d - 1, env);
    env.pop_back();
    return forall(s, s == VarSort::Unit ? "X" : "Y", body);
}

// One random equivalence-axiom application at the root.
TypePtr axiom_root(R& rng, const TypePtr& t) {
    std::vector<TypePtr> cands;
    cands.push_back(tscale(Scalar(1), t));
    if (t->kind == TypeKind::Scale) {
        if (t->coeff.is_one()) cands.push_back(t->body);
        if (t->body->kind == TypeKind::Scale) {
            cands.push_back(tscale(t->coeff * t->body->coeff, t->body->body));
        }
        Scalar f = rng.scal(false);
        cands.push_back(tscale(f, tscale(t->coeff / f, t->body)));
        if (t->body->kind == TypeKind::Sum) {
            std::vector<TypePtr> ps;
            for (const TypePtr& p : t->body->parts) ps.push_back(tscale(t->coeff, p));
            cands.push_back(tsum(std::move(ps)));
        }
    }
    if (t->kind == TypeKind::Sum) {
        auto coeff_of = [](const TypePtr& p) {
            return p->kind == TypeKind::Scale ? p->coeff : Scalar(1);
        };
        auto core_of = [](const TypePtr& p) {
            return p->kind == TypeKind::Scale ? p->body : p;
        };
        for (std::size_t i = 0; i < t->parts.size(); ++i) {
            for (std::size_t j = i + 1; j < t->parts.size(); ++j) {
                std::vector<TypePtr> rest;
                for (std::size_t k = 0; k < t->parts.size(); ++k) {
                    if (k != i && k != j) rest.push_back(t->parts[k]);
                }
                if (coeff_of(t->parts[i]) == coeff_of(t->parts[j])) {
                    auto ps = rest;
                    ps.push_back(tscale(coeff_of(t->parts[i]),
                                        tsum({core_of(t->parts[i]), core_of(t->parts[j])})));
                    cands.push_back(tsum(std::move(ps)));
                }
                if (type_alpha_eq(core_of(t->parts[i]), core_of(t->parts[j]))) {
                    auto ps = rest;
                    ps.push_back(tscale(coeff_of(t->parts[i]) + coeff_of(t->parts[j]),
                                        core_of(t->parts[i])));
                    cands.push_back(tsum(std::move(ps)));
                }
            }
        }
        std::size_t i =
            static_cast<std::size_t>(rng.upto(static_cast<int>(t->parts.size())));
        Scalar d = rng.scal();
        std::vector<TypePtr> ps;
        for (std::size_t k = 0; k < t->parts.size(); ++k) {
            if (k != i) ps.push_back(t->parts[k]);
        }
        ps.push_back(tscale(d, core_of(t->parts[i])));
        ps.push_back(tscale(coeff_of(t->parts[i]) - d, core_of(t->parts[i])));
        cands.push_back(tsum(std::move(ps)));
    }
    return cands[static_cast<std::size_t>(rng.upto(static_cast<int>(cands.size())))];
}

UnitPtr axiom_in_unit(R& rng, const UnitPtr& u, int fuel);

TypePtr axiom_somewhere(R& rng, const TypePtr& t, int fuel) {
    if (fuel <= 0) return t;
    if (rng.upto(3) == 0) return axiom_root(rng, t);
    switch (t->kind) {
        case TypeKind::Unit: return tunit(axiom_in_unit(rng, t->unit, fuel - 1));
        case TypeKind::Scale: return tscale(t->coeff, axiom_somewhere(rng, t->body, fuel - 1));
        case TypeKind::Sum: {
            auto parts = t->parts;
            std::size_t i =
                static_cast<std::size_t>(rng.upto(static_cast<int>(parts.size())));
            parts[i] = axiom_somewhere(rng, parts[i], fuel - 1);
            return tsum(std::move(parts));
        }
        default: return axiom_root(rng, t);
    }
}

UnitPtr axiom_in_unit(R& rng, const UnitPtr& u, int fuel) {
    if (fuel <= 0) return u;
    switch (u->kind) {
        case UnitKind::Arrow:
            if (rng.coin()) return arrow(axiom_in_unit(rng, u->dom, fuel - 1), u->cod);
            return arrow(u->dom, axiom_somewhere(rng, u->cod, fuel - 1));
        case UnitKind::Forall:
            return forall(u->binder_sort, u->name, axiom_in_unit(rng, u->body, fuel - 1));
        default: return u;
    }
}

}  // namespace

PropertyReport run_equivalence(const GenConfig& cfg) {
    PropertyReport rep;
    rep.property = "type-equivalence";
    rep.seed = cfg.seed;
    R rng(cfg.seed);
    for (int c = 0; c < cfg.cases; ++c) {
        ++rep.cases;
        std::vector<VarSort> env;
        TypePtr t = rand_type(rng, 3, env);
        TypePtr r = t;
        for (int s = 0; s < 6; ++s) r = axiom_somewhere(rng, r, 6);
        if (!type_equiv(t, r)) {
            record(rep, "axiom rewrite escaped its equivalence class: " + print_type(t) +
                            "  vs  " + print_type(r));
            continue;
        }
        if (weight_type(t) != weight_type(r)) {
            record(rep, "weight not invariant under axioms: " + print_type(t));
            continue;
        }
        TypePtr c1 = canonical_form(t);
        if (!type_alpha_eq(c1, canonical_form(c1))) {
            record(rep, "canonicalization is not idempotent on " + print_type(t));
            continue;
        }
        env.clear();
        TypePtr other = rand_type(rng, 3, env);
        if (!type_equiv(t, other) && type_equiv(r, axiom_somewhere(rng, other, 6))) {
            record(rep, "distinct classes merged under rewriting: " + print_type(t) +
                            "  vs  " + print_type(other));
        }
    }
    return rep;
}

std::vector<PropertyReport> run_all_properties(const GenConfig& cfg) {
    return {run_subject_reduction(cfg), run_progress(cfg), run_normalization(cfg),
            run_weight_preservation(cfg), run_equivalence(cfg)};
}

std::string report_text(const std::vector<PropertyReport>& reports) {
    std::ostringstream out;
    for (const PropertyReport& r : reports) {
        out << (r.ok() ? "PASS" : "FAIL") << "  " << r.property << "  (" << r.cases
            << " cases, " << r.failures << " failures, seed " << r.seed << ")\n";
        for (const std::string& ce : r.counterexamples) {
            out << "      counterexample: " << ce << "\n";
        }
    }
    return out.str();
}

std::string report_json(const std::vector<PropertyReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PropertyReport& r : reports) {
        arr.push_back({{"property", r.property},
                       {"seed", r.seed},
                       {"cases", r.cases},
                       {"failures", r.failures},
                       {"ok", r.ok()},
                       {"counterexamples", r.counterexamples}});
    }
    return arr.dump(2);
}

}  // namespace vecr
