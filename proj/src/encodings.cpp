#include "vecr/encodings.hpp"

#include <string>

#include "vecr/rewrite.hpp"

namespace vecr {

namespace {

std::string numbered(const char* stem, std::size_t i) { return stem + std::to_string(i); }

}  // namespace

TermPtr term_true() {
    static const TermPtr t = abs("x", nullptr, abs("y", nullptr, bvar(1)));
    return t;
}

TermPtr term_false() {
    static const TermPtr t = abs("x", nullptr, abs("y", nullptr, bvar(0)));
    return t;
}

UnitPtr type_true() {
    static const UnitPtr u = basis_unit(1, 2);
    return u;
}

UnitPtr type_false() {
    static const UnitPtr u = basis_unit(2, 2);
    return u;
}

TermPtr term_id() {
    static const TermPtr t = abs("z", nullptr, bvar(0));
    return t;
}

UnitPtr identity_type() {
    static const UnitPtr u = forall(VarSort::Unit, "X", arrow(ubvar(0), tunit(ubvar(0))));
    return u;
}

TermPtr freeze(const TermPtr& t) { return abs("f", identity_type(), t); }

TermPtr unfreeze(const TermPtr& t) { return app(t, term_id()); }

UnitPtr freeze_type(const TypePtr& inner) { return arrow(identity_type(), inner); }

TermPtr basis_term(std::size_t i, std::size_t n) {
    if (i < 1 || i > n) throw Error("Invariant", "basis index out of range");
    TermPtr body = bvar(static_cast<int>(n - i));
    for (std::size_t k = n; k >= 1; --k) {
        body = abs(numbered("x", k), nullptr, body);
    }
    return body;
}

UnitPtr basis_unit(std::size_t i, std::size_t n) {
    if (i < 1 || i > n) throw Error("Invariant", "basis index out of range");
    UnitPtr chain = ubvar(static_cast<int>(n - i));
    for (std::size_t k = n; k >= 1; --k) {
        chain = arrow(ubvar(static_cast<int>(n - k)), tunit(chain));
    }
    for (std::size_t k = n; k >= 1; --k) {
        chain = forall(VarSort::Unit, numbered("X", k), chain);
    }
    return chain;
}

TermPtr encode_vector(const std::vector<Scalar>& v) {
    if (v.empty()) throw Error("Invariant", "cannot encode a zero-dimensional vector");
    std::vector<TermPtr> parts;
    for (std::size_t i = 0; i < v.size(); ++i) {
        parts.push_back(scale(v[i], basis_term(i + 1, v.size())));
    }
    return sum(std::move(parts));
}

TypePtr vector_type(const std::vector<Scalar>& v) {
    if (v.empty()) throw Error("Invariant", "cannot type a zero-dimensional vector");
    std::vector<TypePtr> parts;
    for (std::size_t i = 0; i < v.size(); ++i) {
        parts.push_back(tscale(v[i], tunit(basis_unit(i + 1, v.size()))));
    }
    return tsum(std::move(parts));
}

std::optional<std::vector<Scalar>> decode_vector(const TermPtr& t, std::size_t n) {
    std::vector<Scalar> out(n, Scalar(0));
    std::vector<TermPtr> parts =
        t->kind == TermKind::Sum ? t->parts : std::vector<TermPtr>{t};
    for (const TermPtr& p : parts) {
        Scalar c(1);
        TermPtr core = p;
        if (core->kind == TermKind::Scale) {
            c = core->coeff;
            core = core->a;
        }
        bool matched = false;
        for (std::size_t i = 1; i <= n && !matched; ++i) {
            if (alpha_eq(core, basis_term(i, n))) {
                out[i - 1] = out[i - 1] + c;
                matched = true;
            }
        }
        if (!matched) return std::nullopt;
    }
    return out;
}

std::vector<Scalar> Matrix::column(std::size_t j) const {
    std::vector<Scalar> col;
    for (std::size_t i = 0; i < rows; ++i) col.push_back(at(i, j));
    return col;
}

namespace {

// The matrix binder's annotation: frozen column types in, a frozen open
// general type out.  The general variable is left free here; matrix_type
// closes it.
UnitPtr consumer_annotation(const Matrix& m, const char* gvar_name) {
    UnitPtr acc = freeze_type(tgvar_f(gvar_name));
    for (std::size_t j = m.cols; j >= 1; --j) {
        acc = arrow(freeze_type(vector_type(m.column(j - 1))), tunit(acc));
    }
    return acc;
}

}  // namespace

TermPtr encode_matrix(const Matrix& m) {
    if (m.rows == 0 || m.cols == 0) throw Error("Invariant", "cannot encode an empty matrix");
    TermPtr body = bvar(0);
    for (std::size_t j = 0; j < m.cols; ++j) {
        body = app(body, freeze(encode_vector(m.column(j))));
    }
    return abs("x", consumer_annotation(m, "X"), unfreeze(body));
}

UnitPtr matrix_type(const Matrix& m) {
    if (m.rows == 0 || m.cols == 0) throw Error("Invariant", "cannot type an empty matrix");
    TyVar x{"X", VarSort::General};
    UnitPtr open_arrow = arrow(consumer_annotation(m, "X"), tgvar_f("X"));
    return forall(VarSort::General, "X", close_unit(open_arrow, x, 0));
}

std::vector<Scalar> matrix_apply(const Matrix& m, const std::vector<Scalar>& v) {
    if (v.size() != m.cols) throw Error("Invariant", "dimension mismatch");
    std::vector<Scalar> out(m.rows, Scalar(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            out[i] = out[i] + m.at(i, j) * v[j];
        }
    }
    return out;
}

std::optional<std::vector<Scalar>> apply_and_decode(const Matrix& m, const TermPtr& vec,
                                                    long fuel) {
    NormalizeResult r = normalize(app(encode_matrix(m), vec), fuel);
    if (r.fuel_exhausted) return std::nullopt;
    return decode_vector(r.term, m.rows);
}

Matrix hadamard() {
    Matrix h(2, 2);
    Scalar r = Scalar(1) / Scalar::sqrt2();
    h.at(0, 0) = r;
    h.at(0, 1) = r;
    h.at(1, 0) = r;
    h.at(1, 1) = -r;
    return h;
}

}  // namespace vecr
