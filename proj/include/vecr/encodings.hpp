#pragma once

// Vectors and matrices as terms.
//
// A scalar vector becomes a linear combination of the canonical basis
// abstractions of its dimension; a matrix becomes an abstraction that feeds
// its frozen columns to the encoded argument vector, so that applying the
// matrix term to a vector term and reducing performs the matrix product.

#include <cstddef>
#include <optional>
#include <vector>

#include "vecr/canonical.hpp"
#include "vecr/scalar.hpp"
#include "vecr/term.hpp"
#include "vecr/type.hpp"

namespace vecr {

// Church booleans: the two projections of two arguments, and their types.
TermPtr term_true();   // \x. \y. x
TermPtr term_false();  // \x. \y. y
UnitPtr type_true();   // forall X Y. X -> Y -> X
UnitPtr type_false();  // forall X Y. X -> Y -> Y

// The identity, used as the dummy forced into frozen terms.
TermPtr term_id();     // \z. z
UnitPtr identity_type();  // forall X. X -> X

// Freezing suspends reduction of an arbitrary combination by hiding it under
// a dummy binder; unfreezing forces it by applying to the identity.
TermPtr freeze(const TermPtr& t);    // \f: identity_type. t
TermPtr unfreeze(const TermPtr& t);  // (t) (\z. z)
UnitPtr freeze_type(const TypePtr& inner);  // identity_type -> inner

// The canonical basis of dimension n, 1-based: basis_term(i, n) is the
// abstraction projecting the i-th of n arguments, and basis_unit(i, n) its
// distribution type forall X1..Xn. X1 -> ... -> Xn -> Xi.
TermPtr basis_term(std::size_t i, std::size_t n);
UnitPtr basis_unit(std::size_t i, std::size_t n);

// v  |->  v1 * b(1,n) + ... + vn * b(n,n), zero entries kept verbatim
// (there is no null vector to collapse them into).
TermPtr encode_vector(const std::vector<Scalar>& v);
TypePtr vector_type(const std::vector<Scalar>& v);

// Reads a sum of (scaled) basis terms of dimension n back into coordinates:
// coefficients of alpha-equal basis terms add, an unscaled basis term counts
// 1, an absent one counts 0.  Returns nullopt if any summand is not a scaled
// basis term of this dimension.
std::optional<std::vector<Scalar>> decode_vector(const TermPtr& t, std::size_t n);

// Row-major rectangular matrix of scalars.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Scalar> a;  // rows * cols entries, a[i * cols + j]

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Scalar(0)) {}
    Scalar& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::vector<Scalar> column(std::size_t j) const;
};

// \x: D. unfreeze(((x) frozen-col-1) ... frozen-col-m), where D consumes the
// frozen columns and returns a frozen result of open general type.
TermPtr encode_matrix(const Matrix& m);

// forall %X. D -> %X, with D as in encode_matrix.
UnitPtr matrix_type(const Matrix& m);

// Exact ring product, the reference the term-level pipeline is compared to.
std::vector<Scalar> matrix_apply(const Matrix& m, const std::vector<Scalar>& v);

// Applies the encoded matrix to an encoded vector, reduces, and decodes the
// rows-dimensional result.  nullopt if reduction runs out of fuel or the
// normal form is not an encoded vector.
std::optional<std::vector<Scalar>> apply_and_decode(const Matrix& m, const TermPtr& vec,
                                                    long fuel = 100000);

Matrix hadamard();  // rows {1/sqrt2, 1/sqrt2} and {1/sqrt2, -1/sqrt2}

}  // namespace vecr
