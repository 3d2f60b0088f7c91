#include "vecr/scalar.hpp"

#include <cctype>
#include <sstream>

namespace vecr {

Scalar Scalar::rat(long num, long den) {
    if (den == 0) throw ZeroDivide("rational with zero denominator");
    return Scalar(mpq_class(num, den), mpq_class(0));
}

Scalar Scalar::inverse() const {
    // 1/(a + b*s) = (a - b*s)/(a^2 - 2b^2); the norm vanishes only at 0
    // because sqrt2 is irrational.
    if (is_zero()) throw ZeroDivide("inverse of zero");
    mpq_class norm = a_ * a_ - 2 * b_ * b_;
    return Scalar(a_ / norm, -b_ / norm);
}

namespace {

std::string show_rat(const mpq_class& q) {
    std::ostringstream os;
    os << q;  // gmp prints "p" or "p/q" in lowest terms
    return os.str();
}

// Renders |b|*sqrt2 for positive b = p/q, favouring the short forms.
std::string show_sqrt_chunk(const mpq_class& b) {
    mpz_class p = b.get_num(), q = b.get_den();
    std::string out;
    if (q == 1) {
        out = (p == 1) ? "sqrt2" : p.get_str() + "*sqrt2";
    } else if (q == 2) {
        // p/2 * sqrt2 == p/sqrt2
        out = p.get_str() + "/sqrt2";
    } else if (p == 1) {
        out = "sqrt2/" + q.get_str();
    } else {
        out = p.get_str() + "*sqrt2/" + q.get_str();
    }
    return out;
}

}  // namespace

std::string Scalar::show() const {
    if (b_ == 0) return show_rat(a_);
    std::string sq = show_sqrt_chunk(abs(b_));
    if (a_ == 0) return b_ < 0 ? "-" + sq : sq;
    return show_rat(a_) + (b_ < 0 ? "-" : "+") + sq;
}

namespace {

// Minimal recursive-descent parser for standalone scalar literals. The term
// parser embeds its own copy of this grammar (it needs lookahead against term
// atoms); the two are cross-checked in the tests.
struct ScalarParser {
    const std::string& s;
    size_t pos = 0;

    explicit ScalarParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            pos++;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw Error("ParseError", "scalar: " + msg + " at offset " + std::to_string(pos));
    }

    Scalar parse_factor() {
        skip_ws();
        if (eat('-')) return -parse_factor();
        if (pos + 5 <= s.size() && s.compare(pos, 5, "sqrt2") == 0) {
            pos += 5;
            return Scalar::sqrt2();
        }
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) pos++;
            return Scalar(mpq_class(s.substr(start, pos - start)), mpq_class(0));
        }
        fail("expected number or sqrt2");
    }

    Scalar parse_term() {
        Scalar v = parse_factor();
        for (;;) {
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                pos++;
                v = v * parse_factor();
            } else if (pos < s.size() && s[pos] == '/') {
                pos++;
                Scalar d = parse_factor();
                if (d.is_zero()) throw ZeroDivide("division by zero in scalar literal");
                v = v / d;
            } else {
                return v;
            }
        }
    }

    Scalar parse_expr() {
        Scalar v = parse_term();
        for (;;) {
            skip_ws();
            if (pos < s.size() && s[pos] == '+') {
                pos++;
                v = v + parse_term();
            } else if (pos < s.size() && s[pos] == '-') {
                pos++;
                v = v - parse_term();
            } else {
                return v;
            }
        }
    }
};

}  // namespace

Scalar Scalar::parse(const std::string& text) {
    ScalarParser p(text);
    Scalar v = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

}  // namespace vecr
