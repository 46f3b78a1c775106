#pragma once

// Exact pricing over the implicit set of deterministic strategy columns.
//
// Given duals y >= 0 on cells, a strategy (f, g) has reduced cost
// 1 - sum_{u,v} y(f(u), g(v), u, v). Maximizing it means minimizing the
// picked dual mass. The search enumerates g digit by digit, keeping the
// partial sums S[u][x] = sum over assigned v of y(x, g(v), u, v); once g is
// complete the best f decouples per input u (pick the x minimizing S[u][x]).
// A suffix table of per-digit minima gives a lower bound that prunes
// branches strictly worse than the best leaf seen, so the reported witness
// is the lexicographically first (g, then f) optimum and the value is exact.
//
// Duals are scaled by their common denominator to integers; the kernel runs
// in int64 when the scaled magnitudes fit with headroom, in 128-bit
// otherwise, and falls back to rational arithmetic for extreme inputs.

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

#include "prbox/rational.hpp"
#include "prbox/strategy.hpp"

namespace prbox {

struct PricedStrategy {
    LocalDetStrategy strategy;
    Rational reduced_cost;
};

namespace detail {

inline int64_t to_int64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("pricing: int64 overflow");
    return static_cast<int64_t>(z.get_si());
}

inline __int128 to_int128(const mpz_class& z) {
    mpz_class a = abs(z);
    mpz_class hi = a >> 64;
    mpz_class lo = a - (hi << 64);
    if (!hi.fits_ulong_p()) throw std::overflow_error("pricing: int128 overflow");
    __int128 r = (static_cast<__int128>(hi.get_ui()) << 64) +
                 static_cast<__int128>(lo.get_ui());
    return sgn(z) < 0 ? -r : r;
}

template <typename T>
struct PricingTraits;

template <>
struct PricingTraits<int64_t> {
    static int64_t from_scaled(const mpz_class& z, const Rational&) { return to_int64(z); }
    static mpz_class to_mpz(int64_t v) { return mpz_class(static_cast<long>(v)); }
};

template <>
struct PricingTraits<__int128> {
    static __int128 from_scaled(const mpz_class& z, const Rational&) { return to_int128(z); }
    static mpz_class to_mpz(__int128 v) {
        bool neg = v < 0;
        unsigned __int128 a = neg ? -static_cast<unsigned __int128>(v)
                                  : static_cast<unsigned __int128>(v);
        mpz_class hi(static_cast<unsigned long>(a >> 64));
        mpz_class lo(static_cast<unsigned long>(a & ~0ULL));
        mpz_class r = (hi << 64) + lo;
        return neg ? mpz_class(-r) : r;
    }
};

template <>
struct PricingTraits<Rational> {
    static Rational from_scaled(const mpz_class&, const Rational& original) { return original; }
};

// Best leaf shared across branches. Pruning is strict (only subtrees
// provably worse than the current best are cut), so every branch that
// contains a global optimum still reports its lexicographically first one
// regardless of update timing; the reduce below is therefore deterministic.
template <typename T>
class SharedBest {
public:
    bool should_prune(const T& lower_bound) {
        std::lock_guard<std::mutex> lock(mu_);
        return has_ && lower_bound > value_;
    }
    void offer(const T& value) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!has_ || value < value_) {
            value_ = value;
            has_ = true;
        }
    }

private:
    std::mutex mu_;
    T value_{};
    bool has_ = false;
};

template <typename T>
struct BranchResult {
    bool found = false;
    T value{};
    std::vector<uint8_t> f, g;
};

// One depth-first search over g(branch_digit) = fixed first digit.
template <typename T>
class PricingBranch {
public:
    PricingBranch(int a, const std::vector<T>& y, SharedBest<T>* shared)
        : a_(a), y_(y), shared_(shared) {
        // rlow[(d*a + u)*a + x] = sum over v >= d of min_y y(x, y, u, v).
        rlow_.assign(static_cast<size_t>(a_ + 1) * a_ * a_, T{});
        for (int d = a_ - 1; d >= 0; --d)
            for (int u = 0; u < a_; ++u)
                for (int x = 0; x < a_; ++x) {
                    T m = cell(x, 0, u, d);
                    for (int yy = 1; yy < a_; ++yy) {
                        T c = cell(x, yy, u, d);
                        if (c < m) m = c;
                    }
                    rlow_[rlow_index(d, u, x)] = m + rlow_[rlow_index(d + 1, u, x)];
                }
        s_.assign(static_cast<size_t>(a_) * a_, T{});
        g_.assign(a_, 0);
    }

    BranchResult<T> run(uint8_t first_digit) {
        result_ = BranchResult<T>{};
        g_[0] = first_digit;
        apply_digit(0, first_digit, true);
        dfs(1);
        apply_digit(0, first_digit, false);
        return result_;
    }

private:
    size_t cell_index(int x, int y, int u, int v) const {
        return ((static_cast<size_t>(x) * a_ + y) * a_ + u) * a_ + v;
    }
    const T& cell(int x, int y, int u, int v) const { return y_[cell_index(x, y, u, v)]; }
    size_t rlow_index(int d, int u, int x) const {
        return (static_cast<size_t>(d) * a_ + u) * a_ + x;
    }

    void apply_digit(int v, int y, bool add) {
        for (int u = 0; u < a_; ++u)
            for (int x = 0; x < a_; ++x) {
                if (add)
                    s_[u * a_ + x] += cell(x, y, u, v);
                else
                    s_[u * a_ + x] -= cell(x, y, u, v);
            }
    }

    void dfs(int depth) {
        if (depth == a_) {
            leaf();
            return;
        }
        T bound{};
        for (int u = 0; u < a_; ++u) {
            T m = s_[u * a_] + rlow_[rlow_index(depth, u, 0)];
            for (int x = 1; x < a_; ++x) {
                T c = s_[u * a_ + x] + rlow_[rlow_index(depth, u, x)];
                if (c < m) m = c;
            }
            bound += m;
        }
        if (result_.found && bound > result_.value) return;
        if (shared_ && shared_->should_prune(bound)) return;
        for (int y = 0; y < a_; ++y) {
            g_[depth] = static_cast<uint8_t>(y);
            apply_digit(depth, y, true);
            dfs(depth + 1);
            apply_digit(depth, y, false);
        }
    }

    void leaf() {
        T total{};
        std::vector<uint8_t> f(a_);
        for (int u = 0; u < a_; ++u) {
            int arg = 0;
            T m = s_[u * a_];
            for (int x = 1; x < a_; ++x)
                if (s_[u * a_ + x] < m) {
                    m = s_[u * a_ + x];
                    arg = x;
                }
            f[u] = static_cast<uint8_t>(arg);
            total += m;
        }
        if (!result_.found || total < result_.value) {
            result_.found = true;
            result_.value = total;
            result_.f = std::move(f);
            result_.g = g_;
            if (shared_) shared_->offer(total);
        }
    }

    int a_;
    const std::vector<T>& y_;
    SharedBest<T>* shared_;
    std::vector<T> rlow_;
    std::vector<T> s_;
    std::vector<uint8_t> g_;
    BranchResult<T> result_;
};

template <typename T>
PricedStrategy price_with(const std::vector<T>& y, int a, int threads,
                          const Rational& denom_scale) {
    SharedBest<T> shared;
    std::vector<BranchResult<T>> results(a);
    if (threads <= 1 || a == 1) {
        PricingBranch<T> branch(a, y, &shared);
        for (int b = 0; b < a; ++b) results[b] = branch.run(static_cast<uint8_t>(b));
    } else {
        int workers = std::min(threads, a);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                PricingBranch<T> branch(a, y, &shared);
                for (int b = w; b < a; b += workers)
                    results[b] = branch.run(static_cast<uint8_t>(b));
            });
        for (auto& t : pool) t.join();
    }
    const BranchResult<T>* best = nullptr;
    for (const auto& r : results) {
        if (!r.found) continue;
        if (!best || r.value < best->value) best = &r;
    }
    if (!best) throw std::logic_error("pricing: empty search");

    LocalDetStrategy s;
    s.f = best->f;
    s.g = best->g;
    Rational picked;
    if constexpr (std::is_same_v<T, Rational>) {
        picked = best->value;
    } else {
        picked = Rational(mpz_class(PricingTraits<T>::to_mpz(best->value))) * denom_scale;
    }
    return {std::move(s), Rational(1) - picked};
}

}  // namespace detail

// The LP column of a deterministic strategy: sorted cell indices where the
// strategy places probability one (one cell per input pair).
inline std::vector<int32_t> strategy_rows(const LocalDetStrategy& s) {
    const int a = s.alphabet();
    std::vector<int32_t> rows;
    rows.reserve(static_cast<size_t>(a) * a);
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < a; ++v)
            rows.push_back(static_cast<int32_t>(
                ((static_cast<size_t>(s.f[u]) * a + s.g[v]) * a + u) * a + v));
    std::sort(rows.begin(), rows.end());
    return rows;
}

// Maximum reduced cost over every deterministic strategy on n rounds, with
// a strategy attaining it. Ties resolve to the lexicographically first
// (g, then f) assignment, independent of the thread count. The duals vector
// is indexed like a box table on n rounds.
inline PricedStrategy price_strategies(const std::vector<Rational>& duals, int n,
                                       int threads = 0) {
    if (n < 0) throw std::invalid_argument("price_strategies: negative round count");
    const int a = 1 << n;
    const size_t cells = static_cast<size_t>(a) * a * a * a;
    if (duals.size() != cells)
        throw std::invalid_argument("price_strategies: dual vector has wrong size");
    if (threads <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        threads = hc ? static_cast<int>(hc) : 1;
    }

    mpz_class lcm_den(1);
    for (const auto& q : duals)
        if (!q.is_zero()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(),
                                  q.denominator().get_mpz_t());
    std::vector<mpz_class> scaled(cells);
    mpz_class total(0);
    for (size_t i = 0; i < cells; ++i) {
        scaled[i] = duals[i].numerator() * (lcm_den / duals[i].denominator());
        total += abs(scaled[i]);
    }
    const Rational denom_scale = Rational(mpz_class(1)) / Rational(lcm_den);

    // All intermediate sums are dominated by the total dual mass; factor 4
    // leaves headroom for sums of two such quantities.
    mpz_class cap64 = (mpz_class(1) << 62);
    mpz_class cap128 = (mpz_class(1) << 124);
    auto build = [&](auto tag) {
        using T = decltype(tag);
        std::vector<T> y(cells);
        for (size_t i = 0; i < cells; ++i)
            y[i] = detail::PricingTraits<T>::from_scaled(scaled[i], duals[i]);
        return detail::price_with<T>(y, a, threads, denom_scale);
    };
    if (total * 4 < cap64) return build(int64_t{});
    if (total * 4 < cap128) return build(__int128{});
    return build(Rational{});
}

}  // namespace prbox
