#include "doctest.h"

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "test_util.hpp"
#include "vecr/parser.hpp"
#include "vecr/printer.hpp"
#include "vecr/rewrite.hpp"
#include "vecr/term.hpp"

using namespace vecr;
using vecr::testing::Rng;
using vecr::testing::TermGenOpts;

namespace {

const Prelude& booleans() {
    static Prelude pre{{"true", parse_term("\\x. \\y. x")},
                       {"false", parse_term("\\x. \\y. y")}};
    return pre;
}

TermPtr T(const std::string& s) { return parse_term(s, &booleans()); }

std::string show(const TermPtr& t) {
    PrintOpts o;
    o.aliases = &booleans();
    return print_term(t, o);
}

std::vector<RuleId> trace_rules(const NormalizeResult& r) {
    std::vector<RuleId> out;
    for (auto& e : r.trace) out.push_back(e.rule);
    return out;
}

// ---- an independent brute-force enumeration of one-step rewrites ------
//
// Recomputes, directly from the rule schemas, every way to rewrite a term
// in one step, and where in the term it happens. Used to cross-check
// step_candidates for completeness and correctness.

struct OSite {
    RuleId rule;
    std::vector<int> path;
    TermPtr result;  // full term after rewriting
};

void oracle_here(const TermPtr& t, std::vector<std::pair<RuleId, TermPtr>>& out) {
    if (t->kind == TermKind::Scale) {
        if (t->coeff.is_one()) out.push_back({RuleId::E1, t->a});
        if (t->a->kind == TermKind::Scale)
            out.push_back({RuleId::E2, scale(t->coeff * t->a->coeff, t->a->a)});
        if (t->a->kind == TermKind::Sum) {
            std::vector<TermPtr> ps;
            for (auto& p : t->a->parts) ps.push_back(scale(t->coeff, p));
            out.push_back({RuleId::E3, sum(std::move(ps))});
        }
    } else if (t->kind == TermKind::Sum) {
        auto parts = t->parts;
        auto coeff_of = [](const TermPtr& p) -> std::optional<Scalar> {
            if (p->kind == TermKind::Scale) return p->coeff;
            return std::nullopt;
        };
        auto core_of = [](const TermPtr& p) -> TermPtr {
            return p->kind == TermKind::Scale ? p->a : p;
        };
        for (size_t i = 0; i < parts.size(); i++) {
            for (size_t j = i + 1; j < parts.size(); j++) {
                if (!alpha_eq(core_of(parts[i]), core_of(parts[j]))) continue;
                auto ci = coeff_of(parts[i]), cj = coeff_of(parts[j]);
                RuleId r = ci && cj ? RuleId::F1 : ((ci || cj) ? RuleId::F2 : RuleId::F3);
                Scalar merged = ci.value_or(Scalar(1)) + cj.value_or(Scalar(1));
                std::vector<TermPtr> rest;
                for (size_t k = 0; k < parts.size(); k++)
                    if (k != i && k != j) rest.push_back(parts[k]);
                rest.push_back(scale(merged, core_of(parts[i])));
                out.push_back({r, sum(std::move(rest))});
            }
        }
    } else if (t->kind == TermKind::App) {
        const TermPtr& f = t->a;
        const TermPtr& v = t->b;
        if (f->kind == TermKind::Abs && is_basis(v))
            out.push_back({RuleId::B, open_binder(f->a, v)});
        if (f->kind == TermKind::Sum) {
            std::vector<TermPtr> ps;
            for (auto& p : f->parts) ps.push_back(app(p, v));
            out.push_back({RuleId::A1, sum(std::move(ps))});
        }
        if (v->kind == TermKind::Sum) {
            std::vector<TermPtr> ps;
            for (auto& p : v->parts) ps.push_back(app(f, p));
            out.push_back({RuleId::A2, sum(std::move(ps))});
        }
        if (f->kind == TermKind::Scale)
            out.push_back({RuleId::A3, scale(f->coeff, app(f->a, v))});
        if (v->kind == TermKind::Scale)
            out.push_back({RuleId::A4, scale(v->coeff, app(f, v->a))});
    }
}

TermPtr oracle_plug(const TermPtr& t, const std::vector<int>& path, size_t at,
                    const TermPtr& sub) {
    if (at == path.size()) return sub;
    int i = path[at];
    switch (t->kind) {
        case TermKind::Abs:
            return abs(t->name, t->ann, oracle_plug(t->a, path, at + 1, sub));
        case TermKind::App:
            return i == 0 ? app(oracle_plug(t->a, path, at + 1, sub), t->b)
                          : app(t->a, oracle_plug(t->b, path, at + 1, sub));
        case TermKind::Scale:
            return scale(t->coeff, oracle_plug(t->a, path, at + 1, sub));
        case TermKind::Sum: {
            std::vector<TermPtr> ps = t->parts;
            ps[static_cast<size_t>(i)] = oracle_plug(ps[static_cast<size_t>(i)], path, at + 1, sub);
            return sum(std::move(ps));
        }
        default:
            throw Error("Invariant", "oracle_plug walked into a leaf");
    }
}

void oracle_walk(const TermPtr& root, const TermPtr& t, std::vector<int>& path,
                 std::vector<OSite>& out) {
    std::vector<std::pair<RuleId, TermPtr>> here;
    oracle_here(t, here);
    for (auto& [r, local] : here) out.push_back({r, path, oracle_plug(root, path, 0, local)});
    auto recur = [&](int idx, const TermPtr& child) {
        path.push_back(idx);
        oracle_walk(root, child, path, out);
        path.pop_back();
    };
    switch (t->kind) {
        case TermKind::Abs:
            recur(0, t->a);
            break;
        case TermKind::App:
            recur(0, t->a);
            recur(1, t->b);
            break;
        case TermKind::Scale:
            recur(0, t->a);
            break;
        case TermKind::Sum:
            for (size_t i = 0; i < t->parts.size(); i++)
                recur(static_cast<int>(i), t->parts[i]);
            break;
        default:
            break;
    }
}

std::vector<OSite> oracle_candidates(const TermPtr& t) {
    std::vector<OSite> out;
    std::vector<int> path;
    oracle_walk(t, t, path, out);
    return out;
}

// True if the path passes through an abstraction body in `t`.
bool path_under_lambda(const TermPtr& t, const std::vector<int>& path) {
    const TermNode* cur = t.get();
    for (int i : path) {
        if (cur->kind == TermKind::Abs) return true;
        switch (cur->kind) {
            case TermKind::App:
                cur = (i == 0 ? cur->a : cur->b).get();
                break;
            case TermKind::Scale:
                cur = cur->a.get();
                break;
            case TermKind::Sum:
                cur = cur->parts[static_cast<size_t>(i)].get();
                break;
            default:
                return false;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("each rule fires on its textbook shape") {
    auto fires = [](const std::string& src, RuleId r, const std::string& expect) {
        TermPtr t = T(src);
        auto s = step(t);
        REQUIRE(s.has_value());
        CHECK(s->rule == r);
        CHECK(alpha_eq(s->result, T(expect)));
    };
    fires("1*x", RuleId::E1, "x");
    fires("2*(3*x)", RuleId::E2, "6*x");
    fires("2*(x + y)", RuleId::E3, "2*x + 2*y");
    fires("2*x + 3*x", RuleId::F1, "5*x");
    fires("2*x + x", RuleId::F2, "3*x");
    fires("x + x", RuleId::F3, "2*x");
    fires("(\\x. x) y", RuleId::B, "y");
    fires("(\\x. x) (\\y. y)", RuleId::B, "\\y. y");
    fires("(x + y) z", RuleId::A1, "(x) z + (y) z");
    fires("(x) (y + z)", RuleId::A2, "(x) y + (x) z");
    fires("(2*x) y", RuleId::A3, "2*((x) y)");
    fires("(x) (2*y)", RuleId::A4, "2*((x) y)");
}

TEST_CASE("beta only substitutes basis arguments") {
    // Sums and scaled terms are distributed first, not substituted.
    auto s = step(T("(\\x. x x) (y + z)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::A2);

    s = step(T("(\\x. x x) (2*y)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::A4);

    // An application argument is not a basis term either.
    TermPtr t = T("(\\x. x) ((y) z)");
    CHECK(is_normal_form(t));
}

TEST_CASE("substitution in beta is capture-avoiding") {
    TermPtr t = T("(\\x. \\y. x) y");
    auto s = step(t);
    REQUIRE(s.has_value());
    REQUIRE(s->rule == RuleId::B);
    // The result binds a fresh variable; the substituted y stays free.
    CHECK(alpha_eq(s->result, parse_term("\\q. y")));
    REQUIRE(s->result->kind == TermKind::Abs);
    CHECK(s->result->a->kind == TermKind::FVar);

    // Inner binders shadow: the substituted body keeps its own x.
    s = step(T("(\\x. \\x. x) z"));
    REQUIRE(s.has_value());
    CHECK(alpha_eq(s->result, parse_term("\\x. x")));
}

TEST_CASE("scalar rules outrank merging, beta and distribution") {
    // E1 under a lambda still beats a top-level beta.
    TermPtr t = T("(\\x. 1*x) ((\\y. y) z)");
    NormalizeResult r = normalize(t, 100, true);
    CHECK(trace_rules(r) == std::vector<RuleId>{RuleId::E1, RuleId::B, RuleId::B});
    CHECK(alpha_eq(r.term, T("z")));

    // F before B.
    auto s = step(T("(\\x. x) (\\w. w + w)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::F3);

    // B before A.
    s = step(T("((\\x. x) y) (z + w)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::B);
    CHECK(s->path == std::vector<int>{0});
}

TEST_CASE("within a group, sites not under a lambda come first") {
    TermPtr t = T("(\\x. 1*x) (1*z)");
    auto s = step(t);
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::E1);
    CHECK(s->path == std::vector<int>{1});  // the argument, not the body
    CHECK(!s->under_lambda);
}

TEST_CASE("within a group, outer and leftmost sites come first") {
    // Outer before inner on a nested scale.
    NormalizeResult r = normalize(T("2*(3*(4*x))"), 10, true);
    CHECK(trace_rules(r) == std::vector<RuleId>{RuleId::E2, RuleId::E2});
    CHECK(r.trace[0].path == std::vector<int>{});
    CHECK(r.trace[1].path == std::vector<int>{});
    CHECK(alpha_eq(r.term, T("24*x")));

    // Leftmost summand first.
    r = normalize(T("1*x + 1*y"), 10, true);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].path == std::vector<int>{0});
    CHECK(r.trace[1].path == std::vector<int>{1});
    CHECK(alpha_eq(r.term, T("x + y")));
}

TEST_CASE("rule order breaks ties at the same site") {
    // A1 before A2 when both sides are sums.
    auto s = step(T("(x + y) (z + w)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::A1);

    // A2 before A3 on a scaled function with a sum argument.
    s = step(T("(2*x) (z + w)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::A2);

    // E1 before E2 on 1*(2*x).
    s = step(T("1*(2*x)"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::E1);
}

TEST_CASE("application distributes to a bilinear normal form") {
    NormalizeResult r = normalize(T("(x + y) (z + w)"), 100, true);
    CHECK(alpha_eq(r.term, T("(x) z + (x) w + (y) z + (y) w")));
    CHECK(trace_rules(r) ==
          std::vector<RuleId>{RuleId::A1, RuleId::A2, RuleId::A2});

    r = normalize(T("(2*x) (3*y)"), 100, true);
    CHECK(alpha_eq(r.term, T("6*((x) y)")));
}

TEST_CASE("zero coefficients are preserved verbatim") {
    CHECK(is_normal_form(T("0*x")));
    CHECK(is_normal_form(T("0*(\\x. x)")));
    CHECK(is_normal_form(T("x + 0*y")));

    // 0*x + 0*x still merges, to 0*x with the coefficients added.
    auto s = step(T("0*x + 0*x"));
    REQUIRE(s.has_value());
    CHECK(s->rule == RuleId::F1);
    CHECK(alpha_eq(s->result, T("0*x")));

    // 0*(x + y) distributes like any other coefficient.
    NormalizeResult r = normalize(T("0*(x + y)"), 10, false);
    CHECK(alpha_eq(r.term, T("0*x + 0*y")));
}

TEST_CASE("normal forms and values") {
    CHECK(is_normal_form(T("x")));
    CHECK(is_normal_form(T("\\x. x")));
    CHECK(is_normal_form(T("2*(\\x. x)")));
    CHECK(is_normal_form(T("(x) (\\y. y)")));
    CHECK(is_normal_form(T("x + 2*y")));
    CHECK(!is_normal_form(T("\\x. (\\y. y) x")));
    CHECK(!is_normal_form(T("1*x")));

    CHECK(is_value(T("\\x. x")));
    CHECK(is_value(T("2*(\\x. x)")));
    CHECK(is_value(T("0*(\\x. x)")));
    CHECK(is_value(T("true + 2*false")));
    CHECK(is_value(T("1/sqrt2*true + -1/sqrt2*false")));
    CHECK(!is_value(T("x")));
    CHECK(!is_value(T("(x) y")));
    CHECK(!is_value(T("true + true")));       // cores must be distinct
    CHECK(!is_value(T("true + 2*true")));
    CHECK(!is_value(T("(\\x. x) + (y) z")));  // every part must be a lambda
}

TEST_CASE("matrix application reduces by four substitutions") {
    // A 2x2 map applied to a basis vector: freeze both columns, select one
    // with the boolean, thaw it. The whole run is exactly four beta steps.
    std::string m =
        "\\x. (((x) (\\f. 1/sqrt2*true + 1/sqrt2*false))"
        " (\\f. 1/sqrt2*true + -1/sqrt2*false)) (\\z. z)";
    TermPtr t = app(T(m), T("true"));
    NormalizeResult r = normalize(t, 100, true);

    CHECK(trace_rules(r) ==
          std::vector<RuleId>{RuleId::B, RuleId::B, RuleId::B, RuleId::B});
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace[0].path == std::vector<int>{});
    CHECK(r.trace[1].path == std::vector<int>{0, 0});
    CHECK(r.trace[2].path == std::vector<int>{0});
    CHECK(r.trace[3].path == std::vector<int>{});

    CHECK(alpha_eq(r.term, T("1/sqrt2*true + 1/sqrt2*false")));
    CHECK(show(r.term) == "1/sqrt2*true + 1/sqrt2*false");
    CHECK(is_value(r.term));
}

TEST_CASE("balanced-to-basis interference cancels one component") {
    // The same 2x2 map applied to the balanced superposition: the two
    // contributions to the second component cancel to an explicit 0*false.
    std::string m =
        "\\x. (((x) (\\f. 1/sqrt2*true + 1/sqrt2*false))"
        " (\\f. 1/sqrt2*true + -1/sqrt2*false)) (\\z. z)";
    TermPtr in = T("1/sqrt2*true + 1/sqrt2*false");
    TermPtr t = app(T(m), in);
    NormalizeResult r = normalize(t, 1000, true);

    CHECK(!r.fuel_exhausted);
    CHECK(alpha_eq(r.term, T("true + 0*false")));
    CHECK(show(r.term) == "true + 0*false");
    CHECK(is_value(r.term));

    // The run leads by distributing the argument sum, and every recorded
    // step re-applies cleanly.
    REQUIRE(!r.trace.empty());
    CHECK(r.trace[0].rule == RuleId::A2);
    TermPtr cur = t;
    for (auto& e : r.trace) {
        auto s = step(cur);
        REQUIRE(s.has_value());
        CHECK(s->rule == e.rule);
        CHECK(s->path == e.path);
        CHECK(alpha_eq(s->result, e.term));
        cur = e.term;
    }
    CHECK(alpha_eq(cur, r.term));
}

TEST_CASE("self-application diverges and exhausts fuel") {
    TermPtr omega = T("(\\x. x x) (\\x. x x)");
    NormalizeResult r = normalize(omega, 500, false);
    CHECK(r.fuel_exhausted);
    CHECK(r.steps == 500);
    CHECK(alpha_eq(r.term, omega));  // it loops in place
}

TEST_CASE("candidate enumeration matches a brute-force oracle") {
    Rng rng(20260801);
    TermGenOpts o;
    o.max_depth = 4;
    int nonempty = 0;
    for (int i = 0; i < 300; i++) {
        TermPtr t = vecr::testing::random_term(rng, o);
        auto got = step_candidates(t);
        auto want = oracle_candidates(t);
        REQUIRE(got.size() == want.size());
        if (!want.empty()) nonempty++;

        std::vector<bool> used(want.size(), false);
        for (auto& g : got) {
            bool found = false;
            for (size_t k = 0; k < want.size(); k++) {
                if (used[k]) continue;
                if (want[k].rule == g.rule && want[k].path == g.path &&
                    alpha_eq(want[k].result, g.result)) {
                    used[k] = true;
                    found = true;
                    break;
                }
            }
            if (!found) {
                CAPTURE(print_term(t));
                CAPTURE(rule_name(g.rule));
                FAIL_CHECK("engine candidate not produced by the oracle");
            }
            CHECK(g.under_lambda == path_under_lambda(t, g.path));
        }
        CHECK(is_normal_form(t) == want.empty());
    }
    CHECK(nonempty > 100);  // the generator exercises real redexes
}

TEST_CASE("converging strategies agree on the normal form") {
    Rng rng(7);
    TermGenOpts o;
    o.max_depth = 4;
    o.closed = true;
    int compared = 0;
    for (int i = 0; i < 150; i++) {
        TermPtr t = vecr::testing::random_term(rng, o);

        auto run_random = [&](uint64_t seed) -> TermPtr {
            Rng local(seed);
            TermPtr cur = t;
            for (int steps = 0; steps < 2000; steps++) {
                auto cands = step_candidates(cur);
                if (cands.empty()) return cur;
                cur = cands[static_cast<size_t>(local.upto(static_cast<int>(cands.size())))]
                          .result;
                if (term_size(cur) > 2000) return nullptr;
            }
            return nullptr;
        };

        NormalizeResult det = normalize(t, 2000, false);
        if (det.fuel_exhausted) continue;
        for (uint64_t s = 0; s < 6; s++) {
            TermPtr nf = run_random(1000 * static_cast<uint64_t>(i) + s);
            if (!nf) continue;
            compared++;
            CAPTURE(print_term(t));
            CHECK(alpha_eq(nf, det.term));
        }
        // A closed normal form is a value.
        CHECK(is_value(det.term));
    }
    CHECK(compared > 300);
}
