#pragma once

// Round-loss analysis: how many CHSH rounds a deterministic strategy loses
// at each joint input, the resulting per-strategy weight caps against a
// target box, and the scans that certify loss lower bounds over the whole
// strategy space.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "prbox/box.hpp"
#include "prbox/strategy.hpp"

namespace prbox {

inline int rounds_lost(const LocalDetStrategy& s, uint32_t u, uint32_t v) {
    return rounds_lost_cell(s.f[u], s.g[v], u, v);
}
inline int rounds_lost(const LocalDetStrategy& s, const BitString& u, const BitString& v) {
    return rounds_lost(s, u.value, v.value);
}

struct WorstInput {
    uint32_t u = 0, v = 0;
    int count = -1;
};

// Maximizes the loss count over all input pairs; ties resolve to the
// lexicographically smallest (u,v).
inline WorstInput worst_input(const LocalDetStrategy& s) {
    const uint32_t a = static_cast<uint32_t>(s.alphabet());
    WorstInput w;
    for (uint32_t u = 0; u < a; ++u)
        for (uint32_t v = 0; v < a; ++v) {
            int c = rounds_lost(s, u, v);
            if (c > w.count) w = WorstInput{u, v, c};
        }
    return w;
}

struct WeightCap {
    Scalar weight;
    CellRef cell;
    std::optional<Rational> probe;
};

// Largest p with p * deterministic(s) <= b entrywise: the minimum of b over
// the strategy's support. Polynomial entries are compared by their value at
// the probe point and the minimizing cell's polynomial is returned with the
// probe recorded; the minimum can change across the parameter interval, so
// callers needing interval-global answers must evaluate at rational points.
inline WeightCap max_weight_detail(const LocalDetStrategy& s, const Box& b,
                                   const Rational& probe = Rational(1, 8)) {
    const uint32_t a = static_cast<uint32_t>(s.alphabet());
    if (static_cast<int>(a) != b.inputs_a() || static_cast<int>(a) != b.inputs_b())
        throw std::invalid_argument("max_weight: alphabet mismatch");
    WeightCap best;
    std::optional<Rational> best_val;
    bool probed = false;
    for (uint32_t u = 0; u < a; ++u)
        for (uint32_t v = 0; v < a; ++v) {
            const Scalar& e = b.at(s.f[u], s.g[v], u, v);
            Rational val = e.is_rational() ? e.rational() : e.eval(probe);
            if (e.is_poly()) probed = true;
            if (!best_val || val < *best_val) {
                best_val = val;
                best.weight = e;
                best.cell = CellRef{s.f[u], s.g[v], u, v};
            }
        }
    if (probed) best.probe = probe;
    return best;
}

inline Scalar max_weight(const LocalDetStrategy& s, const Box& b,
                         const Rational& probe = Rational(1, 8)) {
    return max_weight_detail(s, b, probe).weight;
}

// Necessary conditions for nonzero weight against the biased family, per
// round over every joint-input extension: the parties' round outputs must
// differ whenever both round inputs are 1, and must never form (1,0) at the
// other three round-input pairs. Both rule out the structural zero cells.
inline bool biased_feasible(const LocalDetStrategy& s) {
    const int n = s.n();
    const uint32_t a = static_cast<uint32_t>(s.alphabet());
    for (int i = 1; i <= n; ++i) {
        const uint32_t bit = 1u << (n - i);
        // Achievable round-i output bits per party, indexed by that party's
        // round-i input bit; mask bit k set when output bit k occurs.
        uint32_t fx[2] = {0, 0}, gy[2] = {0, 0};
        for (uint32_t u = 0; u < a; ++u) fx[(u & bit) ? 1 : 0] |= 1u << ((s.f[u] & bit) ? 1 : 0);
        for (uint32_t v = 0; v < a; ++v) gy[(v & bit) ? 1 : 0] |= 1u << ((s.g[v] & bit) ? 1 : 0);
        if (fx[1] & gy[1]) return false;
        const bool f0_has1 = (fx[0] >> 1) & 1u, f1_has1 = (fx[1] >> 1) & 1u;
        const bool g0_has0 = gy[0] & 1u, g1_has0 = gy[1] & 1u;
        if (f0_has1 && (g0_has0 || g1_has0)) return false;
        if (f1_has1 && g0_has0) return false;
    }
    return true;
}

struct LossScan {
    int bound = 0;            // claimed minimum worst-case loss count
    uint64_t checked = 0;     // strategies or pairs examined
    uint64_t violations = 0;  // strategies with worst-case count < bound
    int min_worst = std::numeric_limits<int>::max();
    LocalDetStrategy min_witness;  // first strategy achieving min_worst
};

inline int loss_bound(int n) { return (n + 1) / 2; }

// Exhaustive scan over every strategy pair; n <= 2 in practice.
inline LossScan worst_case_exhaustive(int n, uint64_t budget = 100'000'000) {
    StrategyIterator it(n, StrategyIterator::Side::both, budget);
    LossScan scan;
    scan.bound = loss_bound(n);
    it.for_each([&](const LocalDetStrategy& s) {
        ++scan.checked;
        int w = worst_input(s).count;
        if (w < scan.bound) ++scan.violations;
        if (w < scan.min_worst) {
            scan.min_worst = w;
            scan.min_witness = s;
        }
    });
    return scan;
}

// Random strategy pairs with a fixed seed; outputs are drawn per entry, so
// the draw is uniform over the full space.
inline LossScan worst_case_sampled(int n, uint64_t samples, uint64_t seed) {
    LossScan scan;
    scan.bound = loss_bound(n);
    std::mt19937_64 rng(seed);
    const uint32_t a = 1u << n;
    LocalDetStrategy s;
    s.f.resize(a);
    s.g.resize(a);
    for (uint64_t i = 0; i < samples; ++i) {
        for (auto& o : s.f) o = static_cast<uint8_t>(rng() & (a - 1));
        for (auto& o : s.g) o = static_cast<uint8_t>(rng() & (a - 1));
        ++scan.checked;
        int w = worst_input(s).count;
        if (w < scan.bound) ++scan.violations;
        if (w < scan.min_worst) {
            scan.min_worst = w;
            scan.min_witness = s;
        }
    }
    return scan;
}

// Complete three-round scan via two reductions. Simultaneous output flips
// f(u) -> f(u)^c, g(v) -> g(v)^c preserve every loss count, so f(0) = 0
// covers all pairs. For fixed f, a partner g losing at most one round
// everywhere exists iff independently for every v some output y satisfies
// the condition against all u; checking that directly covers all 2.8e14
// pairs in about 8^7 * 8^3 elementary steps.
inline LossScan worst_case_quotient_n3() {
    LossScan scan;
    scan.bound = 2;
    LocalDetStrategy f_holder;
    f_holder.f.assign(8, 0);
    f_holder.g.assign(8, 0);
    auto& f = f_holder.f;
    const uint64_t classes = 8ull * 8 * 8 * 8 * 8 * 8 * 8;
    for (uint64_t code = 0; code < classes; ++code) {
        uint64_t c = code;
        for (int u = 7; u >= 1; --u) {
            f[u] = static_cast<uint8_t>(c & 7);
            c >>= 3;
        }
        ++scan.checked;
        bool all_v_ok = true;
        uint8_t pick[8];
        for (uint32_t v = 0; v < 8 && all_v_ok; ++v) {
            bool found = false;
            for (uint32_t y = 0; y < 8 && !found; ++y) {
                bool ok = true;
                for (uint32_t u = 0; u < 8; ++u)
                    if (rounds_lost_cell(f[u], y, u, v) > 1) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    pick[v] = static_cast<uint8_t>(y);
                    found = true;
                }
            }
            all_v_ok = found;
        }
        if (all_v_ok) {
            ++scan.violations;
            if (scan.violations == 1) {
                scan.min_witness = f_holder;
                for (int v = 0; v < 8; ++v) scan.min_witness.g[v] = pick[v];
                scan.min_worst = worst_input(scan.min_witness).count;
            }
        }
    }
    return scan;
}

}  // namespace prbox
