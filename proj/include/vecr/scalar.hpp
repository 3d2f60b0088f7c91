#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace vecr {

struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

struct ZeroDivide : Error {
    explicit ZeroDivide(const std::string& msg) : Error("ZeroDivide", msg) {}
};

// Element of Q(sqrt2): value a + b*sqrt2 with exact rational coordinates.
// Both coordinates are kept canonicalized (lowest terms, positive denominator),
// so structural equality coincides with semantic equality.
class Scalar {
  public:
    Scalar() : a_(0), b_(0) {}
    Scalar(long n) : a_(n), b_(0) {}  // NOLINT: implicit on purpose
    Scalar(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {
        a_.canonicalize();
        b_.canonicalize();
    }

    static Scalar rat(long num, long den);
    static Scalar sqrt2() { return Scalar(mpq_class(0), mpq_class(1)); }

    const mpq_class& rat_part() const { return a_; }
    const mpq_class& sqrt_part() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_one() const { return a_ == 1 && b_ == 0; }

    Scalar operator+(const Scalar& o) const { return Scalar(a_ + o.a_, b_ + o.b_); }
    Scalar operator-(const Scalar& o) const { return Scalar(a_ - o.a_, b_ - o.b_); }
    Scalar operator-() const { return Scalar(-a_, -b_); }
    // (a + b*s)(c + d*s) = (ac + 2bd) + (ad + bc)*s, since s^2 = 2.
    Scalar operator*(const Scalar& o) const {
        return Scalar(a_ * o.a_ + 2 * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
    }
    Scalar inverse() const;
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    bool operator==(const Scalar& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Total order on the coordinate pair (not the numeric order of the reals);
    // used for canonical sorting of sum elements.
    int cmp(const Scalar& o) const {
        int c = ::cmp(a_, o.a_);
        if (c != 0) return c < 0 ? -1 : 1;
        c = ::cmp(b_, o.b_);
        return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }

    // Shortest concrete form: "3", "-1/2", "sqrt2", "1/sqrt2", "3*sqrt2/5",
    // "1+sqrt2", "2-3*sqrt2", ...
    std::string show() const;

    // Parses the scalar literal grammar (ints, fractions, sqrt2 forms and
    // +/-/*// combinations with the usual precedence).
    static Scalar parse(const std::string& text);

  private:
    mpq_class a_, b_;
};

}  // namespace vecr
