#include "doctest.h"

#include <string>
#include <vector>

#include "test_util.hpp"
#include "vecr/canonical.hpp"
#include "vecr/encodings.hpp"
#include "vecr/infer.hpp"
#include "vecr/parser.hpp"
#include "vecr/printer.hpp"
#include "vecr/rewrite.hpp"

using namespace vecr;
using vecr::testing::random_scalar;
using vecr::testing::Rng;

namespace {

const Prelude& booleans() {
    static Prelude pre{{"true", parse_term("\\x. \\y. x")},
                       {"false", parse_term("\\x. \\y. y")}};
    return pre;
}

TermPtr T(const std::string& s) { return parse_term(s, &booleans()); }

std::vector<Scalar> random_vec(Rng& rng, std::size_t n) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_scalar(rng));
    return v;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = random_scalar(rng);
    }
    return m;
}

}  // namespace

TEST_CASE("the booleans are the two-dimensional basis") {
    CHECK(alpha_eq(term_true(), T("true")));
    CHECK(alpha_eq(term_false(), T("false")));
    CHECK(alpha_eq(term_true(), basis_term(1, 2)));
    CHECK(alpha_eq(term_false(), basis_term(2, 2)));
    CHECK(unit_alpha_eq(type_true(), parse_unit_type("forall X Y. X -> Y -> X")));
    CHECK(unit_alpha_eq(type_false(), parse_unit_type("forall X Y. X -> Y -> Y")));
    CHECK(check({}, term_true(), tunit(type_true())).deriv);
    CHECK(check({}, term_false(), tunit(type_false())).deriv);
    CHECK(!check({}, term_true(), tunit(type_false())).deriv);
}

TEST_CASE("projection terms pick their argument and get the matching type") {
    CHECK(alpha_eq(basis_term(2, 3), T("\\a. \\b. \\c. b")));
    CHECK(!alpha_eq(basis_term(1, 3), basis_term(2, 3)));
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t i = 1; i <= n; ++i) {
            CheckResult r = check({}, basis_term(i, n), tunit(basis_unit(i, n)));
            REQUIRE_MESSAGE(r.deriv, "projection ", i, " of ", n, " does not type");
            CHECK(validate(r.deriv).ok);
            if (n > 1) {
                std::size_t other = i == 1 ? 2 : i - 1;
                CHECK(!check({}, basis_term(i, n), tunit(basis_unit(other, n))).deriv);
            }
        }
    }
}

TEST_CASE("freezing suspends a term and unfreezing forces it back") {
    TermPtr t = T("1/sqrt2*true + 1/sqrt2*false");
    TermPtr frozen = freeze(t);
    CHECK(is_value(frozen));
    CHECK(is_normal_form(frozen));
    NormalizeResult r = normalize(unfreeze(frozen));
    CHECK(alpha_eq(r.term, t));
    CHECK(r.steps == 1);  // one beta step on the dummy
    // The frozen combination checks at the frozen type.
    TypePtr inner = parse_type("1/sqrt2*(forall X Y. X -> Y -> X)"
                               " + 1/sqrt2*(forall X Y. X -> Y -> Y)");
    CHECK(check({}, frozen, tunit(freeze_type(inner))).deriv);
}

TEST_CASE("encoded vectors decode back to their coordinates") {
    Rng rng(411);
    for (int c = 0; c < 60; ++c) {
        std::size_t n = 1 + static_cast<std::size_t>(rng.upto(4));
        std::vector<Scalar> v = random_vec(rng, n);
        TermPtr enc = encode_vector(v);
        auto back = decode_vector(enc, n);
        REQUIRE(back);
        CHECK(*back == v);
        // Reduction only tidies coefficients; the coordinates survive.
        NormalizeResult r = normalize(enc);
        auto after = decode_vector(r.term, n);
        REQUIRE(after);
        CHECK(*after == v);
        // The coordinate weight matches the type weight.
        CHECK(weight_value(enc) == weight_type(vector_type(v)));
    }
}

TEST_CASE("decoding rejects terms that are not encoded vectors") {
    CHECK(!decode_vector(T("(u) v"), 2));
    CHECK(!decode_vector(basis_term(1, 3), 2));
    CHECK(!decode_vector(T("\\x. x"), 2));
    // Repeated basis terms accumulate.
    auto d = decode_vector(T("1/2*true + 1/2*true"), 2);
    REQUIRE(d);
    CHECK(*d == std::vector<Scalar>{Scalar(1), Scalar(0)});
    // A bare basis term counts as coefficient one.
    auto e = decode_vector(T("true"), 2);
    REQUIRE(e);
    CHECK(*e == std::vector<Scalar>{Scalar(1), Scalar(0)});
}

TEST_CASE("encoded vectors check at their vector types") {
    Rng rng(412);
    for (int c = 0; c < 15; ++c) {
        std::size_t n = 1 + static_cast<std::size_t>(rng.upto(3));
        std::vector<Scalar> v = random_vec(rng, n);
        CheckResult r = check({}, encode_vector(v), vector_type(v));
        REQUIRE_MESSAGE(r.deriv, "vector does not check at its type");
        CHECK(validate(r.deriv).ok);
    }
}

TEST_CASE("the encoded Hadamard gate is the frozen-column consumer") {
    TermPtr h = encode_matrix(hadamard());
    TermPtr expected = T(
        "\\x. (((x) (\\f. 1/sqrt2*true + 1/sqrt2*false))"
        " (\\f. 1/sqrt2*true + -1/sqrt2*false)) (\\z. z)");
    CHECK(alpha_eq(h, expected));
}

TEST_CASE("the matrix type records frozen columns and an open result") {
    UnitPtr mt = matrix_type(hadamard());
    UnitPtr expected = parse_unit_type(
        "forall %X."
        " (((forall X. X -> X) -> (1/sqrt2*(forall X1 X2. X1 -> X2 -> X1)"
        "                          + 1/sqrt2*(forall X1 X2. X1 -> X2 -> X2)))"
        "  -> ((forall X. X -> X) -> (1/sqrt2*(forall X1 X2. X1 -> X2 -> X1)"
        "                             + -1/sqrt2*(forall X1 X2. X1 -> X2 -> X2)))"
        "  -> ((forall X. X -> X) -> %X))"
        " -> %X");
    CHECK(unit_alpha_eq(mt, expected));
    SynthResult s = synthesize({}, encode_matrix(hadamard()));
    REQUIRE_MESSAGE(s.type, "matrix term does not synthesize",
                    (s.failure ? ": " + s.failure->message : std::string()));
    CHECK(type_equiv(s.type, tunit(mt)));
}

TEST_CASE("applying the Hadamard gate to a basis state gives the superposition") {
    TermPtr h = encode_matrix(hadamard());
    NormalizeResult r = normalize(app(h, term_true()));
    REQUIRE(!r.fuel_exhausted);
    auto out = decode_vector(r.term, 2);
    REQUIRE(out);
    CHECK(*out == matrix_apply(hadamard(), {Scalar(1), Scalar(0)}));
    // And by the reusable pipeline:
    auto piped = apply_and_decode(hadamard(), term_true());
    REQUIRE(piped);
    CHECK(*piped == *out);
}

TEST_CASE("applying the Hadamard gate twice returns the basis state plus a kept zero") {
    TermPtr h = encode_matrix(hadamard());
    NormalizeResult once = normalize(app(h, term_true()));
    REQUIRE(!once.fuel_exhausted);
    NormalizeResult twice = normalize(app(h, once.term));
    REQUIRE(!twice.fuel_exhausted);
    // The zero-weight component is retained: there is no null vector.
    CHECK(alpha_eq(twice.term, T("true + 0*false")));
    auto out = decode_vector(twice.term, 2);
    REQUIRE(out);
    CHECK(*out == std::vector<Scalar>{Scalar(1), Scalar(0)});
}

TEST_CASE("the applied Hadamard gate checks at the superposed boolean type") {
    TermPtr h = encode_matrix(hadamard());
    TypePtr goal = parse_type(
        "1/sqrt2*(forall X Y. X -> Y -> X) + 1/sqrt2*(forall X Y. X -> Y -> Y)");
    CheckResult r = check({}, app(h, term_true()), goal);
    REQUIRE_MESSAGE(r.deriv, "Hadamard application does not check",
                    (r.failure ? ": " + r.failure->message : std::string()));
    CHECK(validate(r.deriv).ok);
}

TEST_CASE("term-level matrix application agrees with the ring product") {
    Rng rng(413);
    for (int c = 0; c < 40; ++c) {
        std::size_t rows = 1 + static_cast<std::size_t>(rng.upto(3));
        std::size_t cols = 1 + static_cast<std::size_t>(rng.upto(3));
        Matrix m = random_matrix(rng, rows, cols);
        std::vector<Scalar> v = random_vec(rng, cols);
        auto got = apply_and_decode(m, encode_vector(v));
        REQUIRE_MESSAGE(got, "reduction did not produce an encoded vector");
        CHECK(*got == matrix_apply(m, v));
    }
}

TEST_CASE("matrix application types at the product vector's type") {
    // 2x2 against a basis state: the result type is the matrix column.
    Matrix m(2, 2);
    m.at(0, 0) = Scalar(2);
    m.at(0, 1) = Scalar(0);
    m.at(1, 0) = Scalar(3);
    m.at(1, 1) = Scalar(1);
    TermPtr mt = encode_matrix(m);
    CheckResult r = check({}, app(mt, term_true()), vector_type(m.column(0)));
    REQUIRE_MESSAGE(r.deriv, "matrix application does not check",
                    (r.failure ? ": " + r.failure->message : std::string()));
    CHECK(validate(r.deriv).ok);
    SynthResult s = synthesize({}, app(mt, term_false()));
    REQUIRE(s.type);
    CHECK(type_equiv(s.type, vector_type(m.column(1))));
}
