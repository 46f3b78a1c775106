#pragma once

// The relabeling group that stabilizes the perfect PR box, in closed form.
// Per round, flipping inputs and conditionally flipping outputs preserves
// the CHSH relation x^y = u*v exactly when each party's output flip tracks
// the other party's input flip. An element is three n-bit masks
// (alpha, beta, flip) acting cell-wise as
//
//   u' = u ^ alpha          x' = x ^ (beta & u) ^ flip
//   v' = v ^ beta           y' = y ^ (alpha & v) ^ flip ^ (alpha & beta)
//
// which gives 8 elements per round and 8^n in total. Averaging a box or a
// strategy over the full group is the depolarization map; the orbit of a
// strategy is its closure under the group.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "prbox/strategy.hpp"

namespace prbox {

struct DepolElement {
    uint32_t alpha = 0;  // Alice input shift, one bit per round
    uint32_t beta = 0;   // Bob input shift
    uint32_t flip = 0;   // common output flip

    // Image of a cell under the relabeling.
    void map_cell(uint32_t& x, uint32_t& y, uint32_t& u, uint32_t& v) const {
        x ^= (beta & u) ^ flip;
        y ^= (alpha & v) ^ flip ^ (alpha & beta);
        u ^= alpha;
        v ^= beta;
    }
};

inline int depol_group_size(int n) { return 1 << (3 * n); }

inline DepolElement depol_element(int n, int index) {
    const uint32_t mask = (1u << n) - 1;
    return DepolElement{static_cast<uint32_t>(index) & mask,
                        (static_cast<uint32_t>(index) >> n) & mask,
                        (static_cast<uint32_t>(index) >> (2 * n)) & mask};
}

inline LocalDetStrategy apply_depol(const DepolElement& e, const LocalDetStrategy& s) {
    const int a = s.alphabet();
    const uint32_t ab = e.alpha & e.beta;
    LocalDetStrategy out;
    out.f.resize(a);
    out.g.resize(a);
    for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u) {
        uint32_t u0 = u ^ e.alpha;
        out.f[u] = static_cast<uint8_t>(s.f[u0] ^ (e.beta & u0) ^ e.flip);
    }
    for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v) {
        uint32_t v0 = v ^ e.beta;
        out.g[v] = static_cast<uint8_t>(s.g[v0] ^ (e.alpha & v0) ^ e.flip ^ ab);
    }
    return out;
}

// Images of s under all 8^n elements, in group order, duplicates included.
// Points with a nontrivial stabilizer repeat; averaging over this list is
// exact group averaging regardless.
inline std::vector<LocalDetStrategy> depol_images(const LocalDetStrategy& s) {
    const int n = s.n();
    std::vector<LocalDetStrategy> out;
    out.reserve(depol_group_size(n));
    for (int i = 0; i < depol_group_size(n); ++i)
        out.push_back(apply_depol(depol_element(n, i), s));
    return out;
}

// Closure of s under the group: distinct images sorted by canonical
// encoding. The size always divides 8^n.
inline std::vector<LocalDetStrategy> orbit(const LocalDetStrategy& s) {
    std::vector<LocalDetStrategy> out = depol_images(s);
    std::sort(out.begin(), out.end(),
              [](const LocalDetStrategy& a, const LocalDetStrategy& b) { return a.encode() < b.encode(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace prbox
