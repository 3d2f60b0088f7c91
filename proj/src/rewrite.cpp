#include "vecr/rewrite.hpp"

#include <algorithm>
#include <functional>

namespace vecr {

const char* rule_name(RuleId r) {
    switch (r) {
        case RuleId::E1: return "E1";
        case RuleId::E2: return "E2";
        case RuleId::E3: return "E3";
        case RuleId::F1: return "F1";
        case RuleId::F2: return "F2";
        case RuleId::F3: return "F3";
        case RuleId::B: return "B";
        case RuleId::A1: return "A1";
        case RuleId::A2: return "A2";
        case RuleId::A3: return "A3";
        case RuleId::A4: return "A4";
    }
    return "?";
}

namespace {

// Local rewrites whose redex root is this node (not inside children).
void local_rewrites(const TermPtr& t, std::vector<std::pair<RuleId, TermPtr>>& out) {
    switch (t->kind) {
        case TermKind::Scale: {
            const TermPtr& body = t->a;
            if (t->coeff.is_one()) out.push_back({RuleId::E1, body});
            if (body->kind == TermKind::Scale)
                out.push_back({RuleId::E2, scale(t->coeff * body->coeff, body->a)});
            if (body->kind == TermKind::Sum) {
                std::vector<TermPtr> ps;
                ps.reserve(body->parts.size());
                for (auto& p : body->parts) ps.push_back(scale(t->coeff, p));
                out.push_back({RuleId::E3, sum(std::move(ps))});
            }
            break;
        }
        case TermKind::Sum: {
            // Merging rules act on an unordered pair of summands whose
            // cores (the term under an optional explicit coefficient) are
            // alpha-equal.
            auto decompose = [](const TermPtr& p) {
                if (p->kind == TermKind::Scale) return std::pair<const TermPtr*, bool>{&p->a, true};
                return std::pair<const TermPtr*, bool>{&p, false};
            };
            size_t n = t->parts.size();
            for (size_t i = 0; i < n; i++) {
                auto [core_i, expl_i] = decompose(t->parts[i]);
                for (size_t j = i + 1; j < n; j++) {
                    auto [core_j, expl_j] = decompose(t->parts[j]);
                    if (!alpha_eq(*core_i, *core_j)) continue;
                    RuleId rule;
                    TermPtr merged;
                    if (expl_i && expl_j) {
                        rule = RuleId::F1;
                        merged = scale(t->parts[i]->coeff + t->parts[j]->coeff, *core_i);
                    } else if (expl_i || expl_j) {
                        rule = RuleId::F2;
                        const TermPtr& scaled = expl_i ? t->parts[i] : t->parts[j];
                        merged = scale(scaled->coeff + Scalar(1), *core_i);
                    } else {
                        rule = RuleId::F3;
                        merged = scale(Scalar(1) + Scalar(1), *core_i);
                    }
                    std::vector<TermPtr> rest;
                    rest.reserve(n - 1);
                    for (size_t k = 0; k < n; k++)
                        if (k != i && k != j) rest.push_back(t->parts[k]);
                    rest.push_back(merged);
                    out.push_back({rule, sum(std::move(rest))});
                }
            }
            break;
        }
        case TermKind::App: {
            const TermPtr& f = t->a;
            const TermPtr& arg = t->b;
            if (f->kind == TermKind::Abs && is_basis(arg))
                out.push_back({RuleId::B, open_binder(f->a, arg)});
            if (f->kind == TermKind::Sum) {
                std::vector<TermPtr> ps;
                ps.reserve(f->parts.size());
                for (auto& p : f->parts) ps.push_back(app(p, arg));
                out.push_back({RuleId::A1, sum(std::move(ps))});
            }
            if (arg->kind == TermKind::Sum) {
                std::vector<TermPtr> ps;
                ps.reserve(arg->parts.size());
                for (auto& p : arg->parts) ps.push_back(app(f, p));
                out.push_back({RuleId::A2, sum(std::move(ps))});
            }
            if (f->kind == TermKind::Scale)
                out.push_back({RuleId::A3, scale(f->coeff, app(f->a, arg))});
            if (arg->kind == TermKind::Scale)
                out.push_back({RuleId::A4, scale(arg->coeff, app(f, arg->a))});
            break;
        }
        default:
            break;
    }
}

struct Child {
    int index;
    TermPtr term;
};

std::vector<Child> children_of(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Abs:
            return {{0, t->a}};
        case TermKind::App:
            return {{0, t->a}, {1, t->b}};
        case TermKind::Scale:
            return {{0, t->a}};
        case TermKind::Sum: {
            std::vector<Child> cs;
            for (size_t i = 0; i < t->parts.size(); i++)
                cs.push_back({static_cast<int>(i), t->parts[i]});
            return cs;
        }
        default:
            return {};
    }
}

TermPtr replace_child(const TermPtr& t, int index, const TermPtr& sub) {
    switch (t->kind) {
        case TermKind::Abs:
            return abs(t->name, t->ann, sub);
        case TermKind::App:
            return index == 0 ? app(sub, t->b) : app(t->a, sub);
        case TermKind::Scale:
            return scale(t->coeff, sub);
        case TermKind::Sum: {
            std::vector<TermPtr> ps = t->parts;
            ps[static_cast<size_t>(index)] = sub;
            return sum(std::move(ps));
        }
        default:
            throw Error("Invariant", "replace_child on a leaf");
    }
}

void gather(const TermPtr& t, bool under_lambda, std::vector<int>& path,
            const std::function<TermPtr(const TermPtr&)>& rebuild,
            std::vector<RedexSite>& out) {
    std::vector<std::pair<RuleId, TermPtr>> local;
    local_rewrites(t, local);
    for (auto& [rule, repl] : local) out.push_back({rule, path, rebuild(repl), under_lambda});
    for (auto& c : children_of(t)) {
        path.push_back(c.index);
        bool ul = under_lambda || t->kind == TermKind::Abs;
        auto rebuild_child = [&](const TermPtr& sub) { return rebuild(replace_child(t, c.index, sub)); };
        gather(c.term, ul, path, rebuild_child, out);
        path.pop_back();
    }
}

int group_rank(RuleId r) {
    switch (r) {
        case RuleId::E1:
        case RuleId::E2:
        case RuleId::E3:
            return 0;
        case RuleId::F1:
        case RuleId::F2:
        case RuleId::F3:
            return 1;
        case RuleId::B:
            return 2;
        default:
            return 3;
    }
}

// Leftmost-outermost: element-wise; a prefix (outer position) comes first.
int path_cmp(const std::vector<int>& a, const std::vector<int>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; i++) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

bool site_before(const RedexSite& a, const RedexSite& b) {
    int ga = group_rank(a.rule), gb = group_rank(b.rule);
    if (ga != gb) return ga < gb;
    if (a.under_lambda != b.under_lambda) return !a.under_lambda;
    int pc = path_cmp(a.path, b.path);
    if (pc != 0) return pc < 0;
    return static_cast<int>(a.rule) < static_cast<int>(b.rule);
}

}  // namespace

std::vector<RedexSite> step_candidates(const TermPtr& t) {
    std::vector<RedexSite> out;
    std::vector<int> path;
    gather(t, false, path, [](const TermPtr& x) { return x; }, out);
    return out;
}

std::optional<RedexSite> step(const TermPtr& t) {
    std::vector<RedexSite> cands = step_candidates(t);
    if (cands.empty()) return std::nullopt;
    const RedexSite* best = &cands[0];
    for (const RedexSite& c : cands) {
        if (site_before(c, *best)) best = &c;
    }
    return *best;
}

NormalizeResult normalize(const TermPtr& t, long fuel, bool want_trace) {
    NormalizeResult res;
    res.term = t;
    while (res.steps < fuel) {
        auto s = step(res.term);
        if (!s) return res;
        res.term = s->result;
        res.steps++;
        if (want_trace) res.trace.push_back({s->rule, s->path, s->result});
    }
    res.fuel_exhausted = step(res.term).has_value();
    return res;
}

bool is_normal_form(const TermPtr& t) { return step_candidates(t).empty(); }

bool is_value(const TermPtr& t) {
    auto core_abs = [](const TermPtr& p) -> const TermPtr* {
        if (p->kind == TermKind::Abs) return &p;
        if (p->kind == TermKind::Scale && p->a->kind == TermKind::Abs) return &p->a;
        return nullptr;
    };
    if (t->kind == TermKind::Sum) {
        std::vector<const TermPtr*> cores;
        for (auto& p : t->parts) {
            const TermPtr* c = core_abs(p);
            if (!c) return false;
            cores.push_back(c);
        }
        for (size_t i = 0; i < cores.size(); i++)
            for (size_t j = i + 1; j < cores.size(); j++)
                if (alpha_eq(*cores[i], *cores[j])) return false;
        return true;
    }
    return core_abs(t) != nullptr;
}

}  // namespace vecr
