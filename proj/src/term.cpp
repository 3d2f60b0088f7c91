#include "vecr/term.hpp"

#include <algorithm>

namespace vecr {

TermPtr bvar(int index) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::BVar;
    n->index = index;
    return n;
}

TermPtr fvar(std::string name) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::FVar;
    n->name = std::move(name);
    return n;
}

TermPtr abs(std::string hint, UnitPtr ann, TermPtr body) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Abs;
    n->name = std::move(hint);
    n->ann = std::move(ann);
    n->a = std::move(body);
    return n;
}

TermPtr app(TermPtr f, TermPtr arg) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::App;
    n->a = std::move(f);
    n->b = std::move(arg);
    return n;
}

TermPtr scale(Scalar k, TermPtr body) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Scale;
    n->coeff = std::move(k);
    n->a = std::move(body);
    return n;
}

TermPtr sum(std::vector<TermPtr> parts) {
    std::vector<TermPtr> flat;
    for (auto& p : parts) {
        if (p->kind == TermKind::Sum) {
            flat.insert(flat.end(), p->parts.begin(), p->parts.end());
        } else {
            flat.push_back(p);
        }
    }
    if (flat.empty()) throw Error("Invariant", "empty term sum");
    if (flat.size() == 1) return flat[0];
    // Stable: parts that compare equal (e.g. differing only in binder hints
    // or annotations) keep their construction order.
    std::stable_sort(flat.begin(), flat.end(),
                     [](const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) < 0; });
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Sum;
    n->parts = std::move(flat);
    return n;
}

static int cmp_int(int a, int b) { return a == b ? 0 : (a < b ? -1 : 1); }

int term_cmp(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return 0;
    int ra = static_cast<int>(a->kind), rb = static_cast<int>(b->kind);
    if (ra != rb) return cmp_int(ra, rb);
    switch (a->kind) {
        case TermKind::BVar:
            return cmp_int(b->index, a->index);  // higher index first
        case TermKind::FVar:
            return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
        case TermKind::Abs:
            return term_cmp(a->a, b->a);
        case TermKind::App: {
            int c = term_cmp(a->a, b->a);
            return c != 0 ? c : term_cmp(a->b, b->b);
        }
        case TermKind::Scale: {
            // Body before coefficient, so sums of scaled basis terms sort by
            // the underlying basis term (vectors print in index order).
            int c = term_cmp(a->a, b->a);
            return c != 0 ? c : a->coeff.cmp(b->coeff);
        }
        case TermKind::Sum: {
            int c = cmp_int(static_cast<int>(a->parts.size()), static_cast<int>(b->parts.size()));
            if (c != 0) return c;
            for (size_t i = 0; i < a->parts.size(); i++) {
                c = term_cmp(a->parts[i], b->parts[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

namespace {

void collect(const TermPtr& t, std::vector<std::string>& out) {
    switch (t->kind) {
        case TermKind::BVar:
            break;
        case TermKind::FVar:
            if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
            break;
        case TermKind::Abs:
            collect(t->a, out);
            break;
        case TermKind::App:
            collect(t->a, out);
            collect(t->b, out);
            break;
        case TermKind::Scale:
            collect(t->a, out);
            break;
        case TermKind::Sum:
            for (auto& p : t->parts) collect(p, out);
            break;
    }
}

}  // namespace

std::vector<std::string> free_vars(const TermPtr& t) {
    std::vector<std::string> out;
    collect(t, out);
    return out;
}

bool mentions(const TermPtr& t, const std::string& name) {
    auto vs = free_vars(t);
    return std::find(vs.begin(), vs.end(), name) != vs.end();
}

TermPtr shift_term(const TermPtr& t, int d, int cutoff) {
    if (d == 0) return t;
    switch (t->kind) {
        case TermKind::BVar:
            return t->index >= cutoff ? bvar(t->index + d) : t;
        case TermKind::FVar:
            return t;
        case TermKind::Abs:
            return abs(t->name, t->ann, shift_term(t->a, d, cutoff + 1));
        case TermKind::App:
            return app(shift_term(t->a, d, cutoff), shift_term(t->b, d, cutoff));
        case TermKind::Scale:
            return scale(t->coeff, shift_term(t->a, d, cutoff));
        case TermKind::Sum: {
            std::vector<TermPtr> ps;
            ps.reserve(t->parts.size());
            for (auto& p : t->parts) ps.push_back(shift_term(p, d, cutoff));
            return sum(std::move(ps));
        }
    }
    return t;
}

TermPtr subst_free(const TermPtr& t, const std::string& name, const TermPtr& repl) {
    switch (t->kind) {
        case TermKind::BVar:
            return t;
        case TermKind::FVar:
            return t->name == name ? repl : t;
        case TermKind::Abs:
            return abs(t->name, t->ann, subst_free(t->a, name, repl));
        case TermKind::App:
            return app(subst_free(t->a, name, repl), subst_free(t->b, name, repl));
        case TermKind::Scale:
            return scale(t->coeff, subst_free(t->a, name, repl));
        case TermKind::Sum: {
            std::vector<TermPtr> ps;
            ps.reserve(t->parts.size());
            for (auto& p : t->parts) ps.push_back(subst_free(p, name, repl));
            return sum(std::move(ps));
        }
    }
    return t;
}

namespace {

TermPtr open_at(const TermPtr& t, const TermPtr& arg, int depth) {
    switch (t->kind) {
        case TermKind::BVar:
            if (t->index == depth) return shift_term(arg, depth);
            return t->index > depth ? bvar(t->index - 1) : t;
        case TermKind::FVar:
            return t;
        case TermKind::Abs:
            return abs(t->name, t->ann, open_at(t->a, arg, depth + 1));
        case TermKind::App:
            return app(open_at(t->a, arg, depth), open_at(t->b, arg, depth));
        case TermKind::Scale:
            return scale(t->coeff, open_at(t->a, arg, depth));
        case TermKind::Sum: {
            std::vector<TermPtr> ps;
            ps.reserve(t->parts.size());
            for (auto& p : t->parts) ps.push_back(open_at(p, arg, depth));
            return sum(std::move(ps));
        }
    }
    return t;
}

}  // namespace

TermPtr open_binder(const TermPtr& body, const TermPtr& arg) { return open_at(body, arg, 0); }

TermPtr close_term(const TermPtr& t, const std::string& name, int depth) {
    switch (t->kind) {
        case TermKind::BVar:
            return t;
        case TermKind::FVar:
            return t->name == name ? bvar(depth) : t;
        case TermKind::Abs:
            return abs(t->name, t->ann, close_term(t->a, name, depth + 1));
        case TermKind::App:
            return app(close_term(t->a, name, depth), close_term(t->b, name, depth));
        case TermKind::Scale:
            return scale(t->coeff, close_term(t->a, name, depth));
        case TermKind::Sum: {
            std::vector<TermPtr> ps;
            ps.reserve(t->parts.size());
            for (auto& p : t->parts) ps.push_back(close_term(p, name, depth));
            return sum(std::move(ps));
        }
    }
    return t;
}

int term_size(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::BVar:
        case TermKind::FVar:
            return 1;
        case TermKind::Abs:
            return 1 + term_size(t->a);
        case TermKind::App:
            return 1 + term_size(t->a) + term_size(t->b);
        case TermKind::Scale:
            return 1 + term_size(t->a);
        case TermKind::Sum: {
            int n = 1;
            for (auto& p : t->parts) n += term_size(p);
            return n;
        }
    }
    return 1;
}

bool term_locally_closed(const TermPtr& t, int depth) {
    switch (t->kind) {
        case TermKind::BVar:
            return t->index < depth;
        case TermKind::FVar:
            return true;
        case TermKind::Abs:
            return term_locally_closed(t->a, depth + 1);
        case TermKind::App:
            return term_locally_closed(t->a, depth) && term_locally_closed(t->b, depth);
        case TermKind::Scale:
            return term_locally_closed(t->a, depth);
        case TermKind::Sum:
            for (auto& p : t->parts)
                if (!term_locally_closed(p, depth)) return false;
            return true;
    }
    return true;
}

}  // namespace vecr
