#pragma once

// Bipartite conditional probability tables with exact entries. A Box stores
// P(x,y|u,v) as a flat Scalar array in (x,y,u,v) order together with an
// explicit mass: the per-input-pair total, 1 for ordinary boxes but kept
// general so unnormalized sums flow through the same code paths.
//
// Bit convention for multi-round boxes: round 1 is the most significant bit
// of every packed input/output string.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "prbox/bits.hpp"
#include "prbox/depol.hpp"
#include "prbox/scalar.hpp"
#include "prbox/strategy.hpp"

namespace prbox {

struct CellRef {
    uint32_t x = 0, y = 0, u = 0, v = 0;

    friend bool operator==(const CellRef&, const CellRef&) = default;

    std::string str() const {
        return "(x=" + std::to_string(x) + ", y=" + std::to_string(y) +
               ", u=" + std::to_string(u) + ", v=" + std::to_string(v) + ")";
    }
};

class Box {
public:
    // The default box is the trivial 0-round box: one input, one output,
    // probability 1. It is the identity for tensor products.
    Box() : Box(1, 1, 1, 1) { table_[0] = Scalar(1); }

    Box(int inputs_a, int inputs_b, int outputs_a, int outputs_b)
        : ia_(inputs_a), ib_(inputs_b), oa_(outputs_a), ob_(outputs_b), mass_(1) {
        if (ia_ <= 0 || ib_ <= 0 || oa_ <= 0 || ob_ <= 0)
            throw std::invalid_argument("Box: alphabet sizes must be positive");
        table_.assign(static_cast<size_t>(ia_) * ib_ * oa_ * ob_, Scalar(0));
    }

    int inputs_a() const { return ia_; }
    int inputs_b() const { return ib_; }
    int outputs_a() const { return oa_; }
    int outputs_b() const { return ob_; }
    bool same_shape(const Box& o) const {
        return ia_ == o.ia_ && ib_ == o.ib_ && oa_ == o.oa_ && ob_ == o.ob_;
    }

    // Number of PR rounds; requires all four alphabets equal to the same
    // power of two.
    int rounds() const {
        if (ia_ != ib_ || ia_ != oa_ || ia_ != ob_ || !is_power_of_two(ia_))
            throw std::domain_error("Box: alphabets are not a common power of two");
        return log2_exact(ia_);
    }

    size_t size() const { return table_.size(); }

    size_t index(uint32_t x, uint32_t y, uint32_t u, uint32_t v) const {
        return ((static_cast<size_t>(x) * ob_ + y) * ia_ + u) * ib_ + v;
    }
    CellRef cell(size_t idx) const {
        CellRef c;
        c.v = static_cast<uint32_t>(idx % ib_);
        idx /= ib_;
        c.u = static_cast<uint32_t>(idx % ia_);
        idx /= ia_;
        c.y = static_cast<uint32_t>(idx % ob_);
        c.x = static_cast<uint32_t>(idx / ob_);
        return c;
    }

    const Scalar& at(uint32_t x, uint32_t y, uint32_t u, uint32_t v) const {
        return table_[index(x, y, u, v)];
    }
    Scalar& at(uint32_t x, uint32_t y, uint32_t u, uint32_t v) {
        return table_[index(x, y, u, v)];
    }
    const Scalar& operator[](size_t idx) const { return table_[idx]; }
    Scalar& operator[](size_t idx) { return table_[idx]; }

    const Scalar& mass() const { return mass_; }
    void set_mass(Scalar m) { mass_ = std::move(m); }

    // Substitute a rational value for the parameter, entrywise.
    Box eval(const Rational& x) const {
        Box out = *this;
        out.mass_ = Scalar(mass_.eval(x));
        for (auto& e : out.table_) e = Scalar(e.eval(x));
        return out;
    }

    Var var() const {
        Var v = mass_.var();
        for (const auto& e : table_) v = unify(v, e.var());
        return v;
    }

    friend bool operator==(const Box& a, const Box& b) {
        return a.same_shape(b) && a.mass_ == b.mass_ && a.table_ == b.table_;
    }
    friend bool operator!=(const Box& a, const Box& b) { return !(a == b); }

private:
    int ia_, ib_, oa_, ob_;
    Scalar mass_;
    std::vector<Scalar> table_;
};

// Perfect n-round PR box: 2^{-n} on every cell with x^y = u&v bitwise.
inline Box make_pr(int n) {
    if (n < 0) throw std::invalid_argument("make_pr: negative n");
    if (n == 0) return Box();
    const int a = 1 << n;
    Box b(a, a, a, a);
    const Rational half_pow = Rational(1, 2).pow(static_cast<unsigned>(n));
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
        for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v)
            for (uint32_t x = 0; x < static_cast<uint32_t>(a); ++x)
                b.at(x, x ^ (u & v), u, v) = Scalar(half_pow);
    return b;
}

// Uniform n-round box: every entry 4^{-n}.
inline Box make_uniform(int n) {
    if (n < 0) throw std::invalid_argument("make_uniform: negative n");
    if (n == 0) return Box();
    const int a = 1 << n;
    Box b(a, a, a, a);
    const Scalar e(Rational(1, 4).pow(static_cast<unsigned>(n)));
    for (size_t i = 0; i < b.size(); ++i) b[i] = e;
    return b;
}

// Isotropic noisy PR boxes: each round independently fulfills the CHSH
// condition with probability 1-eps, uniformly otherwise. The cell losing i
// of n rounds carries (eps/2)^i (1/2-eps/2)^{n-i}.
inline Box make_isotropic(int n, const Scalar& eps, bool force = false) {
    if (n < 0) throw std::invalid_argument("make_isotropic: negative n");
    if (!force && eps.is_rational()) {
        const Rational& e = eps.rational();
        if (e < Rational(0) || e > Rational(1, 4))
            throw std::domain_error("make_isotropic: eps outside [0, 1/4]");
    }
    if (n == 0) return Box();
    const int a = 1 << n;
    const Scalar half(Rational(1, 2));
    const Scalar lose = eps * half;
    const Scalar win = half - lose;
    std::vector<Scalar> entry(n + 1);
    for (int i = 0; i <= n; ++i)
        entry[i] = lose.pow(static_cast<unsigned>(i)) * win.pow(static_cast<unsigned>(n - i));
    Box b(a, a, a, a);
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
        for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v)
            for (uint32_t x = 0; x < static_cast<uint32_t>(a); ++x)
                for (uint32_t y = 0; y < static_cast<uint32_t>(a); ++y)
                    b.at(x, y, u, v) = entry[rounds_lost_cell(x, y, u, v)];
    return b;
}

inline Box tensor(const Box& a, const Box& b) {
    Box out(a.inputs_a() * b.inputs_a(), a.inputs_b() * b.inputs_b(),
            a.outputs_a() * b.outputs_a(), a.outputs_b() * b.outputs_b());
    out.set_mass(a.mass() * b.mass());
    for (int x1 = 0; x1 < a.outputs_a(); ++x1)
        for (int y1 = 0; y1 < a.outputs_b(); ++y1)
            for (int u1 = 0; u1 < a.inputs_a(); ++u1)
                for (int v1 = 0; v1 < a.inputs_b(); ++v1) {
                    const Scalar& e1 = a.at(x1, y1, u1, v1);
                    if (e1.is_zero()) continue;
                    for (int x2 = 0; x2 < b.outputs_a(); ++x2)
                        for (int y2 = 0; y2 < b.outputs_b(); ++y2)
                            for (int u2 = 0; u2 < b.inputs_a(); ++u2)
                                for (int v2 = 0; v2 < b.inputs_b(); ++v2)
                                    out.at(x1 * b.outputs_a() + x2, y1 * b.outputs_b() + y2,
                                           u1 * b.inputs_a() + u2, v1 * b.inputs_b() + v2) =
                                        e1 * b.at(x2, y2, u2, v2);
                }
    return out;
}

inline Box tensor_power(const Box& b, int k) {
    if (k < 0) throw std::invalid_argument("tensor_power: negative exponent");
    Box out;
    for (int i = 0; i < k; ++i) out = tensor(out, b);
    return out;
}

// Maximally biased noisy PR boxes: each round wins input pair (1,1)
// perfectly and the other three pairs with probability 1-delta, all of the
// failure weight sitting on the (x,y)=(0,1) outcome.
inline Box make_biased(int n, const Scalar& delta, bool force = false) {
    if (n < 0) throw std::invalid_argument("make_biased: negative n");
    if (!force && delta.is_rational()) {
        const Rational& d = delta.rational();
        if (d < Rational(0) || d > Rational(1, 3))
            throw std::domain_error("make_biased: delta outside [0, 1/3]");
    }
    const Scalar half(Rational(1, 2));
    const Scalar lo = half - delta * half;
    Box one(2, 2, 2, 2);
    for (uint32_t u = 0; u < 2; ++u)
        for (uint32_t v = 0; v < 2; ++v) {
            if (u == 1 && v == 1) {
                one.at(1, 0, u, v) = lo;
                one.at(0, 1, u, v) = half + delta * half;
            } else {
                one.at(0, 0, u, v) = lo;
                one.at(0, 1, u, v) = delta;
                one.at(1, 1, u, v) = lo;
            }
        }
    return tensor_power(one, n);
}

// Deterministic local box of a strategy: the unique 1 per input pair sits at
// (f(u), g(v)).
inline Box make_deterministic(const LocalDetStrategy& s) {
    const int a = s.alphabet();
    Box b(a, a, a, a);
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
        for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v)
            b.at(s.f[u], s.g[v], u, v) = Scalar(1);
    return b;
}

inline Box mix(const std::vector<Scalar>& weights, const std::vector<Box>& parts) {
    if (weights.size() != parts.size())
        throw std::invalid_argument("mix: weight/part count mismatch");
    if (parts.empty()) throw std::invalid_argument("mix: empty mixture");
    Box out(parts[0].inputs_a(), parts[0].inputs_b(), parts[0].outputs_a(),
            parts[0].outputs_b());
    Scalar mass(0);
    for (size_t i = 0; i < parts.size(); ++i) {
        if (!parts[i].same_shape(out))
            throw std::invalid_argument("mix: alphabet mismatch");
        if (weights[i].is_zero()) continue;
        mass += weights[i] * parts[i].mass();
        for (size_t c = 0; c < out.size(); ++c) {
            const Scalar& e = parts[i][c];
            if (!e.is_zero()) out[c] += weights[i] * e;
        }
    }
    out.set_mass(mass);
    return out;
}

// Probe points used to test sign conditions on polynomial entries, spread
// over the parameter's admissible range.
inline std::vector<Rational> default_probes(Var v) {
    switch (v) {
        case Var::eps:
            return {Rational(0), Rational(1, 32), Rational(1, 16), Rational(1, 8),
                    Rational(3, 16), Rational(1, 4)};
        case Var::delta:
            return {Rational(0), Rational(1, 24), Rational(1, 12), Rational(1, 6),
                    Rational(1, 4), Rational(1, 3)};
        default:
            return {Rational(0)};
    }
}

inline bool scalar_negative(const Scalar& s, const std::vector<Rational>& probes) {
    if (s.is_rational()) return s.rational() < Rational(0);
    for (const auto& p : probes)
        if (s.eval(p) < Rational(0)) return true;
    return false;
}

// First cell that goes negative, probing polynomial entries probe by probe
// in the given order so the violation appearing at the smallest parameter
// value is the one reported.
inline std::optional<CellRef> first_negative_cell(const Box& b,
                                                  std::vector<Rational> probes = {}) {
    if (probes.empty()) probes = default_probes(b.var());
    for (const auto& p : probes)
        for (size_t c = 0; c < b.size(); ++c)
            if (b[c].eval(p) < Rational(0)) return b.cell(c);
    return std::nullopt;
}

// Removes a weighted component and renormalizes the remainder back to the
// original mass: (b - w*part) * mass(b) / (mass(b) - w*mass(part)). Returns
// the first violating cell instead if w*part exceeds b anywhere; polynomial
// entries are sign-checked at the probe points.
inline std::variant<Box, CellRef> subtract_component(
    const Box& b, const Scalar& weight, const Box& part,
    std::vector<Rational> probes = {}) {
    if (!b.same_shape(part))
        throw std::invalid_argument("subtract_component: alphabet mismatch");
    if (probes.empty())
        probes = default_probes(unify(unify(b.var(), part.var()), weight.var()));
    Box raw = b;
    for (size_t c = 0; c < raw.size(); ++c) raw[c] -= weight * part[c];
    if (auto bad = first_negative_cell(raw, probes)) return *bad;
    const Scalar rest = b.mass() - weight * part.mass();
    if (rest.is_zero())
        throw std::domain_error("subtract_component: weight consumes the whole mass");
    for (size_t c = 0; c < raw.size(); ++c)
        if (!raw[c].is_zero()) raw[c] = raw[c] * b.mass() / rest;
    raw.set_mass(b.mass());
    return raw;
}

inline bool is_normalized(const Box& b) {
    for (int u = 0; u < b.inputs_a(); ++u)
        for (int v = 0; v < b.inputs_b(); ++v) {
            Scalar s(0);
            for (int x = 0; x < b.outputs_a(); ++x)
                for (int y = 0; y < b.outputs_b(); ++y) s += b.at(x, y, u, v);
            if (s != b.mass()) return false;
        }
    return true;
}

// Both marginal families must be input-independent: Alice's marginal of x
// may not depend on v, Bob's marginal of y may not depend on u. Exact,
// coefficientwise for polynomial entries.
inline bool is_nonsignalling(const Box& b) {
    for (int x = 0; x < b.outputs_a(); ++x)
        for (int u = 0; u < b.inputs_a(); ++u) {
            std::optional<Scalar> ref;
            for (int v = 0; v < b.inputs_b(); ++v) {
                Scalar s(0);
                for (int y = 0; y < b.outputs_b(); ++y) s += b.at(x, y, u, v);
                if (!ref)
                    ref = s;
                else if (*ref != s)
                    return false;
            }
        }
    for (int y = 0; y < b.outputs_b(); ++y)
        for (int v = 0; v < b.inputs_b(); ++v) {
            std::optional<Scalar> ref;
            for (int u = 0; u < b.inputs_a(); ++u) {
                Scalar s(0);
                for (int x = 0; x < b.outputs_a(); ++x) s += b.at(x, y, u, v);
                if (!ref)
                    ref = s;
                else if (*ref != s)
                    return false;
            }
        }
    return true;
}

// Per input pair, the probability of satisfying x_i ^ y_i = u_i v_i in every
// round, indexed u*inputs_b + v.
inline std::vector<Scalar> chsh_profile(const Box& b) {
    const int n = b.rounds();
    const int a = 1 << n;
    std::vector<Scalar> out(static_cast<size_t>(a) * a, Scalar(0));
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
        for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v) {
            Scalar s(0);
            for (uint32_t x = 0; x < static_cast<uint32_t>(a); ++x)
                s += b.at(x, x ^ (u & v), u, v);
            out[u * a + v] = s / b.mass();
        }
    return out;
}

// Histogram over the number of lost rounds, averaged uniformly over input
// pairs and normalized by mass; index k holds the probability of losing
// exactly k rounds.
inline std::vector<Scalar> rounds_lost_mass(const Box& b) {
    const int n = b.rounds();
    const int a = 1 << n;
    std::vector<Scalar> hist(n + 1, Scalar(0));
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
        for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v)
            for (uint32_t x = 0; x < static_cast<uint32_t>(a); ++x)
                for (uint32_t y = 0; y < static_cast<uint32_t>(a); ++y) {
                    const Scalar& e = b.at(x, y, u, v);
                    if (!e.is_zero()) hist[rounds_lost_cell(x, y, u, v)] += e;
                }
    const Scalar total = b.mass() * Scalar(Rational(static_cast<long>(a) * a));
    for (auto& h : hist)
        if (!h.is_zero()) h = h / total;
    return hist;
}

inline Box apply_depol(const DepolElement& e, const Box& b) {
    const int n = b.rounds();
    const int a = 1 << n;
    Box out(a, a, a, a);
    out.set_mass(b.mass());
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
        for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v)
            for (uint32_t x = 0; x < static_cast<uint32_t>(a); ++x)
                for (uint32_t y = 0; y < static_cast<uint32_t>(a); ++y) {
                    uint32_t x2 = x, y2 = y, u2 = u, v2 = v;
                    e.map_cell(x2, y2, u2, v2);
                    out.at(x2, y2, u2, v2) = b.at(x, y, u, v);
                }
    return out;
}

// Group average over all 8^n relabelings. Intended for small n; the cost is
// 8^n full table copies.
inline Box depol_average(const Box& b) {
    const int n = b.rounds();
    const int g = depol_group_size(n);
    Box sum = apply_depol(depol_element(n, 0), b);
    for (int i = 1; i < g; ++i) {
        Box t = apply_depol(depol_element(n, i), b);
        for (size_t c = 0; c < sum.size(); ++c)
            if (!t[c].is_zero()) sum[c] += t[c];
    }
    const Scalar inv(Rational(1, g));
    for (size_t c = 0; c < sum.size(); ++c)
        if (!sum[c].is_zero()) sum[c] = sum[c] * inv;
    return sum;
}

// Invariance under the 3n generators implies invariance under the group.
inline bool is_depol_invariant(const Box& b) {
    const int n = b.rounds();
    for (int i = 0; i < n; ++i) {
        const uint32_t bit = 1u << i;
        if (apply_depol(DepolElement{bit, 0, 0}, b) != b) return false;
        if (apply_depol(DepolElement{0, bit, 0}, b) != b) return false;
        if (apply_depol(DepolElement{0, 0, bit}, b) != b) return false;
    }
    return true;
}

}  // namespace prbox
