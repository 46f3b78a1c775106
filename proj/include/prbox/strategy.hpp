#pragma once

// Local deterministic strategies: a pair of total functions, one mapping
// Alice's input to her output and one mapping Bob's input to his output.
// Outputs are stored as packed integers indexed by packed input value.

#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "prbox/bits.hpp"

namespace prbox {

struct LocalDetStrategy {
    // f[u] = Alice's output on input u; g[v] = Bob's output on input v.
    std::vector<uint8_t> f;
    std::vector<uint8_t> g;

    int n() const { return log2_exact(static_cast<int>(f.size())); }
    int alphabet() const { return static_cast<int>(f.size()); }

    friend bool operator==(const LocalDetStrategy& a, const LocalDetStrategy& b) {
        return a.f == b.f && a.g == b.g;
    }
    friend auto operator<=>(const LocalDetStrategy& a, const LocalDetStrategy& b) = default;

    // Canonical dense encoding, usable as a map key and for tie-breaking.
    // Fits in 64 bits up to 3 rounds (16 base-8 digits).
    uint64_t encode() const {
        if (f.size() > 8) throw std::domain_error("strategy: encoding exceeds 64 bits");
        uint64_t code = 0;
        const uint64_t base = f.size();
        for (size_t u = 0; u < f.size(); ++u) code = code * base + f[u];
        for (size_t v = 0; v < g.size(); ++v) code = code * base + g[v];
        return code;
    }

    // Appendix-style text: "[f(0) f(1) ...; g(0) g(1) ...]".
    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (size_t u = 0; u < f.size(); ++u) os << (u ? " " : "") << int(f[u]);
        os << "; ";
        for (size_t v = 0; v < g.size(); ++v) os << (v ? " " : "") << int(g[v]);
        os << ']';
        return os.str();
    }

    static LocalDetStrategy parse(const std::string& text) {
        auto l = text.find('[');
        auto semi = text.find(';');
        auto r = text.find(']');
        if (l == std::string::npos || semi == std::string::npos || r == std::string::npos || !(l < semi && semi < r))
            throw std::invalid_argument("strategy: malformed '" + text + "'");
        auto nums = [](const std::string& part) {
            std::vector<uint8_t> out;
            std::istringstream is(part);
            long v;
            while (is >> v) {
                if (v < 0 || v > 255) throw std::invalid_argument("strategy: output out of range");
                out.push_back(static_cast<uint8_t>(v));
            }
            return out;
        };
        LocalDetStrategy s{nums(text.substr(l + 1, semi - l - 1)), nums(text.substr(semi + 1, r - semi - 1))};
        if (s.f.empty() || s.f.size() != s.g.size() || !is_power_of_two(static_cast<int>(s.f.size())))
            throw std::invalid_argument("strategy: bad alphabet in '" + text + "'");
        int a = static_cast<int>(s.f.size());
        for (auto o : s.f)
            if (o >= a) throw std::invalid_argument("strategy: output exceeds alphabet");
        for (auto o : s.g)
            if (o >= a) throw std::invalid_argument("strategy: output exceeds alphabet");
        return s;
    }
};

// Blockwise combination: the joint strategy plays s1 on the leading n1
// rounds and s2 on the trailing n2 rounds.
inline LocalDetStrategy product(const LocalDetStrategy& s1, const LocalDetStrategy& s2) {
    const int a1 = s1.alphabet(), a2 = s2.alphabet();
    LocalDetStrategy out;
    out.f.resize(static_cast<size_t>(a1) * a2);
    out.g.resize(static_cast<size_t>(a1) * a2);
    for (int u1 = 0; u1 < a1; ++u1)
        for (int u2 = 0; u2 < a2; ++u2) {
            out.f[u1 * a2 + u2] = static_cast<uint8_t>(s1.f[u1] * a2 + s2.f[u2]);
            out.g[u1 * a2 + u2] = static_cast<uint8_t>(s1.g[u1] * a2 + s2.g[u2]);
        }
    return out;
}

// Whether both functions factor blockwise between rounds [1..split] and
// [split+1..n]; the appendix points are interesting precisely because they
// do not.
inline bool is_product(const LocalDetStrategy& s, int split) {
    const int n = s.n();
    if (split <= 0 || split >= n) throw std::invalid_argument("is_product: split out of range");
    const int hi = 1 << split, lo = 1 << (n - split);
    auto factors = [&](const std::vector<uint8_t>& h) {
        // h factors iff the high part depends only on the high input bits
        // and the low part only on the low input bits.
        for (int a = 0; a < hi; ++a)
            for (int b = 0; b < lo; ++b) {
                if ((h[a * lo + b] / lo) != (h[a * lo] / lo)) return false;
                if ((h[a * lo + b] % lo) != (h[b] % lo)) return false;
            }
        return true;
    };
    return factors(s.f) && factors(s.g);
}

// Streams over one or both sides of the strategy space without materializing
// it. Count per side is (2^n)^(2^n).
class StrategyIterator {
public:
    enum class Side { both, alice, bob };

    StrategyIterator(int n, Side side, uint64_t budget = 100'000'000)
        : n_(n), side_(side) {
        if (n < 0) throw std::invalid_argument("enumerate: negative n");
        alphabet_ = 1 << n;
        per_side_ = 1;
        const uint64_t cap = uint64_t(1) << 62;
        for (int i = 0; i < alphabet_; ++i) {
            if (per_side_ > cap / alphabet_) throw std::invalid_argument("enumerate: alphabet too large");
            per_side_ *= static_cast<uint64_t>(alphabet_);
        }
        total_ = side == Side::both ? per_side_ * per_side_ : per_side_;
        if (side == Side::both && per_side_ > budget / per_side_)
            throw std::invalid_argument("enumerate: both-sides count exceeds budget; enumerate one side");
        if (total_ > budget)
            throw std::invalid_argument("enumerate: count exceeds budget");
    }

    uint64_t count() const { return total_; }

    // Decodes index -> strategy; index order is the canonical encoding order.
    LocalDetStrategy at(uint64_t index) const {
        LocalDetStrategy s;
        auto decode = [&](uint64_t code) {
            std::vector<uint8_t> out(alphabet_);
            for (int i = alphabet_ - 1; i >= 0; --i) {
                out[i] = static_cast<uint8_t>(code % alphabet_);
                code /= alphabet_;
            }
            return out;
        };
        switch (side_) {
            case Side::both:
                s.f = decode(index / per_side_);
                s.g = decode(index % per_side_);
                break;
            case Side::alice:
                s.f = decode(index);
                s.g.assign(alphabet_, 0);
                break;
            case Side::bob:
                s.g = decode(index);
                s.f.assign(alphabet_, 0);
                break;
        }
        return s;
    }

    template <typename F>
    void for_each(F&& fn) const {
        for (uint64_t i = 0; i < total_; ++i) fn(at(i));
    }

private:
    int n_;
    Side side_;
    int alphabet_;
    uint64_t per_side_;
    uint64_t total_;
};

inline StrategyIterator enumerate(int n, StrategyIterator::Side side,
                                  uint64_t budget = 100'000'000) {
    return StrategyIterator(n, side, budget);
}

}  // namespace prbox
