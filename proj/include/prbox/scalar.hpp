#pragma once

// Scalar is the number type every table entry uses: either an exact rational
// or an exact polynomial in the noise parameter. Mixed arithmetic promotes
// the rational side to a degree-0 polynomial; results that come out constant
// collapse back to Rational, so representation stays canonical and equality
// is structural.

#include <string>
#include <variant>

#include "prbox/poly.hpp"
#include "prbox/rational.hpp"

namespace prbox {

class Scalar {
public:
    Scalar() : v_(Rational(0)) {}
    Scalar(Rational r) : v_(std::move(r)) {}
    Scalar(long n) : v_(Rational(n)) {}
    Scalar(int n) : v_(Rational(n)) {}
    Scalar(Poly p) { assign(std::move(p)); }

    bool is_rational() const { return std::holds_alternative<Rational>(v_); }
    bool is_poly() const { return !is_rational(); }

    const Rational& rational() const { return std::get<Rational>(v_); }

    // View as polynomial regardless of representation.
    Poly poly(Var v = Var::none) const {
        if (is_rational()) return Poly(rational(), v);
        return std::get<Poly>(v_);
    }

    bool is_zero() const {
        return is_rational() ? rational().is_zero() : std::get<Poly>(v_).is_zero();
    }

    Var var() const { return is_rational() ? Var::none : std::get<Poly>(v_).var(); }

    Scalar operator-() const {
        if (is_rational()) return Scalar(-rational());
        return Scalar(-std::get<Poly>(v_));
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return Scalar(a.rational() + b.rational());
        return Scalar(a.poly() + b.poly());
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return Scalar(a.rational() * b.rational());
        return Scalar(a.poly() * b.poly());
    }
    // Division is exact or throws: rational/rational always, poly/poly only
    // when the quotient has no remainder.
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return Scalar(a.rational() / b.rational());
        return Scalar(divide_exact(a.poly(), b.poly()));
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return a.rational() == b.rational();
        return a.poly() == b.poly();
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Evaluation at a rational point always yields a Rational.
    Rational eval(const Rational& x) const {
        if (is_rational()) return rational();
        return std::get<Poly>(v_).eval(x);
    }

    Scalar pow(unsigned e) const {
        if (is_rational()) return Scalar(rational().pow(e));
        return Scalar(std::get<Poly>(v_).pow(e));
    }

    std::string str() const {
        if (is_rational()) return rational().str();
        return std::get<Poly>(v_).str();
    }

private:
    void assign(Poly p) {
        if (p.is_constant())
            v_ = p.is_zero() ? Rational(0) : p.constant_value();
        else
            v_ = std::move(p);
    }

    std::variant<Rational, Poly> v_;
};

inline Rational poly_eval(const Poly& p, const Rational& x) { return p.eval(x); }
inline bool poly_equal(const Poly& p, const Poly& q) { return p == q; }

}  // namespace prbox
