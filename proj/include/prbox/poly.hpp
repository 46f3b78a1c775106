#pragma once

// Dense univariate polynomials over exact rationals, constant term first.
// Degrees stay tiny here (at most the number of boxes), so dense storage
// and schoolbook multiplication are the right tools.

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prbox/rational.hpp"

namespace prbox {

// Formal symbol of the noise parameter. Constants carry kNone and unify
// with either symbol; mixing eps with delta is an error.
enum class Var : uint8_t { none, eps, delta };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::eps: return "eps";
        case Var::delta: return "delta";
        default: return "";
    }
}

inline Var unify(Var a, Var b) {
    if (a == Var::none) return b;
    if (b == Var::none || a == b) return a;
    throw std::invalid_argument("Poly: mixing distinct variables");
}

class Poly {
public:
    Poly() : var_(Var::none) {}
    explicit Poly(Rational c, Var v = Var::none) : var_(v) {
        if (!c.is_zero()) coeffs_.push_back(std::move(c));
    }
    Poly(std::vector<Rational> coeffs, Var v) : coeffs_(std::move(coeffs)), var_(v) { trim(); }
    Poly(std::initializer_list<Rational> coeffs, Var v)
        : coeffs_(coeffs), var_(v) { trim(); }

    // The monomial x, in the given variable.
    static Poly variable(Var v) { return Poly({Rational(0), Rational(1)}, v); }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }
    // Degree of the zero polynomial is reported as 0.
    int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
    Var var() const { return var_; }

    Rational coeff(size_t i) const {
        return i < coeffs_.size() ? coeffs_[i] : Rational(0);
    }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational constant_value() const {
        if (!is_constant()) throw std::domain_error("Poly: not a constant");
        return coeff(0);
    }

    Poly operator-() const {
        std::vector<Rational> c;
        c.reserve(coeffs_.size());
        for (const auto& a : coeffs_) c.push_back(-a);
        return Poly(std::move(c), var_);
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Var v = unify(a.var_, b.var_);
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Poly(std::move(c), v);
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Var v = unify(a.var_, b.var_);
        if (a.is_zero() || b.is_zero()) return Poly(Rational(0), v);
        std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Poly(std::move(c), v);
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (!a.is_constant() && !b.is_constant()) unify(a.var_, b.var_);
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Exact Horner evaluation.
    Rational eval(const Rational& x) const {
        Rational r(0);
        for (size_t i = coeffs_.size(); i-- > 0;) r = r * x + coeffs_[i];
        return r;
    }

    Poly pow(unsigned e) const {
        Poly r(Rational(1), var_);
        Poly base = *this;
        for (; e; e >>= 1) {
            if (e & 1) r = r * base;
            if (e > 1) base = base * base;
        }
        return r;
    }

    // Exact division; throws if the divisor does not divide evenly.
    friend Poly divide_exact(const Poly& a, const Poly& b) {
        Var v = unify(a.var_, b.var_);
        if (b.is_zero()) throw std::domain_error("Poly: division by zero");
        if (a.is_zero()) return Poly(Rational(0), v);
        if (a.degree() < b.degree())
            throw std::domain_error("Poly: inexact division");
        std::vector<Rational> rem = a.coeffs_;
        std::vector<Rational> quot(a.coeffs_.size() - b.coeffs_.size() + 1, Rational(0));
        const Rational lead = b.coeffs_.back();
        for (size_t i = quot.size(); i-- > 0;) {
            Rational f = rem[i + b.coeffs_.size() - 1] / lead;
            quot[i] = f;
            if (f.is_zero()) continue;
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                rem[i + j] -= f * b.coeffs_[j];
        }
        for (const auto& r : rem)
            if (!r.is_zero()) throw std::domain_error("Poly: inexact division");
        return Poly(std::move(quot), v);
    }

    // "[c0, c1, ...]" with rational coefficients, constant term first.
    std::string str() const {
        std::string s = "[";
        size_t n = std::max<size_t>(coeffs_.size(), 1);
        for (size_t i = 0; i < n; ++i) {
            if (i) s += ", ";
            s += coeff(i).str();
        }
        return s + "]";
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;  // coeffs_[i] multiplies x^i; empty = zero
    Var var_;
};

// Unique polynomial of degree <= max_degree through the given points, if one
// fits all of them exactly. Returns an engaged optional on success; an empty
// one signals that the points do not lie on any such polynomial (for a sweep,
// a breakpoint between pieces). Duplicate abscissae are an error.
inline std::optional<Poly> poly_interpolate(
    const std::vector<std::pair<Rational, Rational>>& points,
    int max_degree, Var v = Var::eps) {
    if (max_degree < 0) throw std::invalid_argument("poly_interpolate: negative degree");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw std::invalid_argument("poly_interpolate: duplicate abscissae");
    if (points.empty()) return Poly(Rational(0), v);

    // Newton form on the first max_degree+1 points.
    size_t m = std::min(points.size(), static_cast<size_t>(max_degree) + 1);
    std::vector<Rational> xs, divided;
    xs.reserve(m);
    divided.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        xs.push_back(points[i].first);
        divided.push_back(points[i].second);
    }
    for (size_t level = 1; level < m; ++level)
        for (size_t i = m - 1; i >= level; --i)
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level]);

    Poly p(Rational(0), v);
    Poly basis(Rational(1), v);
    for (size_t i = 0; i < m; ++i) {
        p = p + basis * Poly(divided[i], v);
        basis = basis * (Poly::variable(v) - Poly(xs[i], v));
    }

    for (const auto& [x, y] : points)
        if (p.eval(x) != y) return std::nullopt;
    return p;
}

}  // namespace prbox
