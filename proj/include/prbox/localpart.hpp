#pragma once

// Local parts with certificates, and everything built on top of them: the
// closed-form envelope bounds, the printed decompositions together with
// their verifier, the parameter sweep that recovers the local part as a
// piecewise polynomial, and the split of a tensor power into mixed words.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prbox/box.hpp"
#include "prbox/colgen.hpp"
#include "prbox/depol.hpp"
#include "prbox/lp.hpp"
#include "prbox/poly.hpp"
#include "prbox/pricing.hpp"
#include "prbox/rational.hpp"
#include "prbox/scalar.hpp"
#include "prbox/strategy.hpp"

namespace prbox {

// full enumerates every deterministic strategy and proves optimality against
// the explicit column set; colgen trusts the pricing oracle instead. Both
// produce certificates, they differ in how the pricing gap is established.
enum class SolveMode { full, colgen };

struct LocalPart {
    Rational weight;      // certified local weight, in mass units
    Rational fraction;    // weight divided by the box's total mass
    Certificate certificate;
    std::vector<LocalDetStrategy> columns;  // aligned with certificate column ids
    Rational upper_bound;                   // best dual bound, even uncertified
    uint64_t rounds = 0, pivots = 0;
};

namespace detail {

// Certificate for an explicitly solved problem, with the gap enumerated
// over all of its columns.
inline Certificate certify_enumerated(const LPProblem& p, LPSolution sol) {
    Certificate cert;
    cert.slack = p.rhs;
    for (const auto& [c, w] : sol.primal)
        for (int32_t r : p.columns[c].rows) cert.slack[r] -= w;
    std::vector<Rational> y(p.row_count, Rational(0));
    for (const auto& [r, yr] : sol.dual) y[r] = yr;
    cert.solution = std::move(sol);
    cert.pricing_gap = max_reduced_cost(p, y);
    cert.gap_mode = GapMode::enumerated;
    cert.certified = !cert.pricing_gap.is_positive();
    return cert;
}

inline LPProblem master_problem(const Box& b, const std::vector<LocalDetStrategy>& cols) {
    LPProblem p = box_lp_rows(b);
    for (const auto& s : cols) {
        p.columns.push_back({strategy_rows(s)});
        p.objective.push_back(Rational(1));
    }
    return p;
}

}  // namespace detail

inline LocalPart local_part(const Box& b, SolveMode mode = SolveMode::full,
                            ColGenOptions opt = {}) {
    const int n = b.rounds();
    const Rational mass = b.mass().eval(Rational(0));
    if (mass.is_zero() || mass.is_negative())
        throw std::invalid_argument("local_part: box mass must be positive");
    LocalPart out;

    if (mode == SolveMode::full && n <= 1) {
        auto [p, strategies] = build_full_lp(b);
        out.certificate = detail::certify_enumerated(p, solve_exact(p));
        out.columns = std::move(strategies);
    } else if (mode == SolveMode::full && n == 2) {
        // The explicit two-round program has 65536 columns; pivoting through
        // it directly is far slower than generating columns and then proving
        // the resulting duals optimal against every enumerated column.
        if (!opt.symmetrize_duals) opt.symmetrize_duals = is_depol_invariant(b);
        if (!opt.symmetrize_duals) opt.add_orbit = false;
        ColGenResult cg = column_generation(b, opt);
        if (!cg.certificate.certified)
            throw std::runtime_error("local_part: column generation fell short of a certificate");
        LPProblem master = detail::master_problem(b, cg.columns);
        if (auto bad = verify_certificate(cg.certificate, master))
            throw std::logic_error("local_part: master certificate rejected: " + *bad);
        auto [full, strategies] = build_full_lp(b);
        (void)strategies;
        std::vector<Rational> y(full.row_count, Rational(0));
        for (const auto& [r, yr] : cg.certificate.solution.dual) y[r] = yr;
        cg.certificate.pricing_gap = max_reduced_cost(full, y);
        cg.certificate.gap_mode = GapMode::enumerated;
        cg.certificate.certified = !cg.certificate.pricing_gap.is_positive();
        out.certificate = std::move(cg.certificate);
        out.columns = std::move(cg.columns);
        out.rounds = cg.rounds;
        out.pivots = cg.pivots;
    } else if (mode == SolveMode::full) {
        throw std::domain_error(
            "local_part: full enumeration over " + std::to_string(n) +
            " rounds exceeds the column budget; use colgen mode");
    } else {
        if (!opt.symmetrize_duals) opt.symmetrize_duals = is_depol_invariant(b);
        // Orbit images of a priced column mostly cover forbidden cells of a
        // non-invariant target; they would only bloat the master.
        if (!opt.symmetrize_duals) opt.add_orbit = false;
        ColGenResult cg = column_generation(b, opt);
        out.certificate = std::move(cg.certificate);
        out.columns = std::move(cg.columns);
        out.rounds = cg.rounds;
        out.pivots = cg.pivots;
        out.upper_bound = cg.upper_bound;
    }

    out.weight = out.certificate.solution.objective;
    out.fraction = out.weight / mass;
    if (out.certificate.certified) out.upper_bound = out.weight;
    return out;
}

// ---------------------------------------------------------------------------
// Envelope bounds for the isotropic family.

namespace detail {
inline Rational two_pow(unsigned k) {
    mpz_class p = 1;
    p <<= k;
    return Rational(p);
}
}  // namespace detail

// Summing the box entries that lose at least half the rounds counts every
// strategy's weight at least once, which caps the local part from above.
inline Scalar upper_bound_isotropic(int n, const Scalar& eps) {
    if (n < 1) throw std::invalid_argument("upper_bound_isotropic: need n >= 1");
    const Scalar one(1);
    Scalar sum(0);
    for (int i = (n + 1) / 2; i <= n; ++i)
        sum += Scalar(Rational(binomial(n, i))) * (one - eps).pow(n - i) * eps.pow(i);
    return Scalar(detail::two_pow(2 * n)) * sum;
}

// Weight reachable by depolarized strategies that never lose more than half
// the rounds. Only valid for small eps, where the entries of highest degree
// are the binding ones; the sweep records where it first fails.
inline Scalar lower_bound_isotropic(int n, const Scalar& eps) {
    if (n < 1) throw std::invalid_argument("lower_bound_isotropic: need n >= 1");
    const Scalar one(1);
    if (n % 2 == 0) {
        const Scalar c = Scalar(detail::two_pow(n / 2)) * Scalar(Rational(binomial(n, n / 2)));
        return c * (one - eps).pow(n / 2) * eps.pow(n / 2);
    }
    const Scalar c =
        Scalar(detail::two_pow((n + 3) / 2)) * Scalar(Rational(binomial(n, (n + 1) / 2)));
    return c * (one - eps).pow((n - 1) / 2) * eps.pow((n + 1) / 2);
}

// Decomposing the boxes two at a time gives a local weight of 4*eps per
// pair, hence this floor for every n.
inline Scalar pairing_lower_bound(int n, const Scalar& eps) {
    if (n < 1) throw std::invalid_argument("pairing_lower_bound: need n >= 1");
    return (Scalar(4) * eps).pow(static_cast<unsigned>((n + 1) / 2));
}

// ---------------------------------------------------------------------------
// Named decompositions and their verifier.

struct Decomposition {
    std::vector<std::pair<Scalar, LocalDetStrategy>> terms;
    Scalar remainder_weight;
    Box remainder;
};

// The four decompositions this library reproduces and checks verbatim:
// the optimal single-round splits of the isotropic and the maximally biased
// box, the 128-strategy split of an isotropic pair, and the local component
// of the mixed two-round word (which shows its local fraction is one half).
enum class Identity { iso_single, biased_single, iso_pair, snk_pair_local };

inline const char* identity_name(Identity id) {
    switch (id) {
        case Identity::iso_single: return "iso-single";
        case Identity::biased_single: return "biased-single";
        case Identity::iso_pair: return "iso-pair";
        case Identity::snk_pair_local: return "snk-pair-local";
    }
    throw std::invalid_argument("identity_name: unknown identity");
}

inline std::optional<Identity> identity_from_name(const std::string& name) {
    for (Identity id : {Identity::iso_single, Identity::biased_single, Identity::iso_pair,
                        Identity::snk_pair_local})
        if (name == identity_name(id)) return id;
    return std::nullopt;
}

namespace detail {

// The two base strategies behind the 128-strategy pair decomposition. The
// first also generates, orbit-averaged, the local component of the mixed
// word; its Bob map answers 10 -> 10, the second's answers 11 -> 10.
inline LocalDetStrategy pair_base_primary() {
    return {{0, 0, 0, 1}, {0, 0, 2, 0}};
}
inline LocalDetStrategy pair_base_secondary() {
    return {{0, 0, 0, 1}, {0, 0, 0, 2}};
}

}  // namespace detail

inline Box make_snk(int n, int k);

inline Box identity_target(Identity id) {
    const Scalar eps(Poly::variable(Var::eps));
    const Scalar delta(Poly::variable(Var::delta));
    switch (id) {
        case Identity::iso_single: return make_isotropic(1, eps);
        case Identity::biased_single: return make_biased(1, delta);
        case Identity::iso_pair: return make_isotropic(2, eps);
        case Identity::snk_pair_local: return make_snk(2, 1);
    }
    throw std::invalid_argument("identity_target: unknown identity");
}

inline Decomposition known_decomposition(Identity id) {
    Decomposition d;
    const Scalar eps(Poly::variable(Var::eps));
    const Scalar delta(Poly::variable(Var::delta));
    switch (id) {
        case Identity::iso_single: {
            // Eight strategies, each losing exactly one input pair, at
            // weight eps/2 apiece; what is left is the perfect box.
            const std::vector<LocalDetStrategy> eight = {
                {{0, 0}, {0, 0}}, {{0, 0}, {0, 1}}, {{0, 1}, {0, 0}}, {{1, 0}, {0, 1}},
                {{0, 1}, {1, 0}}, {{1, 1}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {1, 1}}};
            const Scalar half_eps = eps * Scalar(Rational(1, 2));
            for (const auto& s : eight) d.terms.emplace_back(half_eps, s);
            d.remainder_weight = Scalar(1) - Scalar(4) * eps;
            d.remainder = make_pr(1);
            return d;
        }
        case Identity::biased_single: {
            const std::vector<LocalDetStrategy> three = {
                {{0, 0}, {0, 1}}, {{0, 1}, {1, 0}}, {{1, 0}, {1, 1}}};
            for (const auto& s : three) d.terms.emplace_back(delta, s);
            d.remainder_weight = Scalar(1) - Scalar(3) * delta;
            d.remainder = make_pr(1);
            return d;
        }
        case Identity::iso_pair: {
            // 64 group images apiece of the two bases, at the printed
            // per-image weights; the images repeat (each base has a
            // stabilizer of order two), which halves nothing here since
            // the weights are stated per image.
            const Scalar w1(Poly({Rational(0), Rational(1, 16), Rational(-1, 8)}, Var::eps));
            const Scalar w2(Poly({Rational(0), Rational(0), Rational(1, 8)}, Var::eps));
            for (const auto& s : depol_images(detail::pair_base_primary()))
                d.terms.emplace_back(w1, s);
            for (const auto& s : depol_images(detail::pair_base_secondary()))
                d.terms.emplace_back(w2, s);
            d.remainder_weight = Scalar(1) - Scalar(4) * eps;
            d.remainder = make_pr(2);
            return d;
        }
        case Identity::snk_pair_local: {
            // The local unit-mass component of the mixed word: the uniform
            // mixture over the 64 group images of the primary base. The
            // remainder is the word minus that mixture, itself unit mass.
            const Box target = make_snk(2, 1);
            const Scalar w(Rational(1, 64));
            Box local_avg = depol_average(make_deterministic(detail::pair_base_primary()));
            for (const auto& s : depol_images(detail::pair_base_primary()))
                d.terms.emplace_back(w, s);
            Box rest = target;
            for (size_t c = 0; c < rest.size(); ++c) rest[c] -= local_avg[c];
            rest.set_mass(target.mass() - local_avg.mass());
            d.remainder_weight = Scalar(1);
            d.remainder = std::move(rest);
            return d;
        }
    }
    throw std::invalid_argument("known_decomposition: unknown identity");
}

// Checks a decomposition against its target: nonnegative weights, every
// partial remainder nonnegative and non-signalling, and exact reproduction
// of the target. Returns a description of the first violation found.
inline std::optional<std::string> check_decomposition(const Decomposition& d, const Box& target,
                                                      std::vector<Rational> probes = {}) {
    Var var = unify(target.var(), d.remainder.var());
    var = unify(var, d.remainder_weight.var());
    for (const auto& [w, s] : d.terms) {
        var = unify(var, w.var());
        (void)s;
    }
    if (probes.empty()) probes = default_probes(var);

    Scalar weight_sum = d.remainder_weight * d.remainder.mass();
    for (const auto& [w, s] : d.terms) {
        (void)s;
        weight_sum += w;
    }
    if (weight_sum != target.mass()) return "weight sum does not match the target mass";

    Box raw = target;
    for (size_t i = 0; i < d.terms.size(); ++i) {
        const auto& [w, s] = d.terms[i];
        if (scalar_negative(w, probes))
            return "negative weight at term " + std::to_string(i);
        const Box part = make_deterministic(s);
        if (!part.same_shape(raw)) return "alphabet mismatch at term " + std::to_string(i);
        for (size_t c = 0; c < raw.size(); ++c)
            if (!part[c].is_zero()) raw[c] -= w * part[c];
        if (auto bad = first_negative_cell(raw, probes))
            return "partial remainder negative at cell " + bad->str() + " after term " +
                   std::to_string(i);
        if (!is_nonsignalling(raw))
            return "partial remainder signalling after term " + std::to_string(i);
    }

    if (scalar_negative(d.remainder_weight, probes)) return "negative remainder weight";
    if (!d.remainder.same_shape(raw)) return "remainder alphabet mismatch";
    for (size_t c = 0; c < raw.size(); ++c)
        if (raw[c] != d.remainder_weight * d.remainder[c])
            return "mixture misses the target at cell " + raw.cell(c).str();
    return std::nullopt;
}

inline bool verify_decomposition(const Decomposition& d, const Box& target,
                                 std::vector<Rational> probes = {}) {
    return !check_decomposition(d, target, std::move(probes));
}

// Rebuilds a decomposition from solver output: the certified weights become
// terms and the renormalized rest becomes the remainder.
inline Decomposition decomposition_from(const Box& target, const LocalPart& lp) {
    Decomposition d;
    Box raw = target;
    Rational used(0);
    for (const auto& [col, w] : lp.certificate.solution.primal) {
        const auto& s = lp.columns.at(static_cast<size_t>(col));
        d.terms.emplace_back(Scalar(w), s);
        const Box part = make_deterministic(s);
        for (size_t c = 0; c < raw.size(); ++c)
            if (!part[c].is_zero()) raw[c] -= Scalar(w) * part[c];
        used += w;
    }
    const Rational rest = target.mass().eval(Rational(0)) - used;
    if (rest.is_zero()) {
        d.remainder_weight = Scalar(0);
        d.remainder = make_uniform(target.rounds());
        return d;
    }
    const Scalar scale(Rational(1) / rest);
    for (size_t c = 0; c < raw.size(); ++c)
        if (!raw[c].is_zero()) raw[c] = raw[c] * scale;
    raw.set_mass(Scalar(1));
    d.remainder_weight = Scalar(rest);
    d.remainder = std::move(raw);
    return d;
}

// ---------------------------------------------------------------------------
// Families, warm starts, and the parameter sweep.

enum class BoxFamily { isotropic, biased };

inline const char* family_name(BoxFamily f) {
    return f == BoxFamily::isotropic ? "isotropic" : "biased";
}

inline Var family_var(BoxFamily f) {
    return f == BoxFamily::isotropic ? Var::eps : Var::delta;
}

// Upper end of the admissible parameter range.
inline Rational family_param_max(BoxFamily f) {
    return f == BoxFamily::isotropic ? Rational(1, 4) : Rational(1, 3);
}

inline Box make_family(BoxFamily f, int n, const Scalar& param, bool force = false) {
    return f == BoxFamily::isotropic ? make_isotropic(n, param, force)
                                     : make_biased(n, param, force);
}

// Starting columns that historically carry most of the optimal weight:
// the known single-round supports and their blockwise products. Purely a
// performance device; correctness never depends on them.
inline std::vector<LocalDetStrategy> warm_start(BoxFamily f, int n) {
    std::vector<LocalDetStrategy> single;
    if (f == BoxFamily::isotropic) {
        for (const auto& [w, s] : known_decomposition(Identity::iso_single).terms) {
            (void)w;
            single.push_back(s);
        }
    } else {
        for (const auto& [w, s] : known_decomposition(Identity::biased_single).terms) {
            (void)w;
            single.push_back(s);
        }
        // The fourth support avoiding every zero cell of the biased table.
        single.push_back(LocalDetStrategy{{0, 0}, {1, 1}});
    }
    if (n <= 0) return {};
    if (n == 1) return single;

    std::vector<LocalDetStrategy> out;
    if (f == BoxFamily::isotropic) {
        std::vector<LocalDetStrategy> pair;
        for (const auto& [w, s] : known_decomposition(Identity::iso_pair).terms) {
            (void)w;
            pair.push_back(s);
        }
        std::sort(pair.begin(), pair.end());
        pair.erase(std::unique(pair.begin(), pair.end()), pair.end());
        if (n == 2) return pair;
        if (n == 3) {
            for (const auto& two : pair)
                for (const auto& one : single) out.push_back(product(two, one));
            return out;
        }
        return {};
    }
    // Biased: all blockwise products of the single-round supports.
    out = single;
    for (int i = 1; i < n; ++i) {
        std::vector<LocalDetStrategy> next;
        next.reserve(out.size() * single.size());
        for (const auto& a : out)
            for (const auto& b : single) next.push_back(product(a, b));
        out = std::move(next);
    }
    return out;
}

struct SweepSample {
    Rational param;
    LocalPart result;
};

struct SweepPiece {
    size_t first = 0, last = 0;  // sample index range, inclusive
    Poly poly;
};

struct SweepBoundary {
    Rational lo, hi;  // bracketing sample parameters around the break
    bool continuous = false;
};

struct SweepResult {
    BoxFamily family = BoxFamily::isotropic;
    int n = 0;
    std::vector<SweepSample> samples;  // sorted by parameter
    std::vector<SweepPiece> pieces;    // over certified samples only
    std::vector<SweepBoundary> boundaries;
};

struct SweepOptions {
    SolveMode mode = SolveMode::colgen;
    ColGenOptions colgen;
    int refine = 0;  // extra passes, each quartering the break brackets
};

inline std::vector<Rational> uniform_grid(const Rational& lo, const Rational& hi,
                                          const Rational& step) {
    if (!step.is_positive()) throw std::invalid_argument("uniform_grid: step must be positive");
    std::vector<Rational> out;
    for (Rational x = lo; x <= hi; x += step) out.push_back(x);
    return out;
}

namespace detail {

inline void fit_sweep_pieces(SweepResult& r) {
    r.pieces.clear();
    r.boundaries.clear();
    const Var var = family_var(r.family);
    std::vector<size_t> ok;
    for (size_t i = 0; i < r.samples.size(); ++i)
        if (r.samples[i].result.certificate.certified) ok.push_back(i);
    if (ok.empty()) return;

    std::vector<std::pair<Rational, Rational>> pts;
    size_t first = 0;
    while (first < ok.size()) {
        pts.clear();
        pts.emplace_back(r.samples[ok[first]].param, r.samples[ok[first]].result.weight);
        Poly fit = *poly_interpolate(pts, r.n, var);
        size_t last = first;
        for (size_t j = first + 1; j < ok.size(); ++j) {
            pts.emplace_back(r.samples[ok[j]].param, r.samples[ok[j]].result.weight);
            auto next = poly_interpolate(pts, r.n, var);
            if (!next) break;
            fit = *next;
            last = j;
        }
        r.pieces.push_back({ok[first], ok[last], fit});
        first = last + 1;
    }

    for (size_t k = 0; k + 1 < r.pieces.size(); ++k) {
        const Rational lo = r.samples[r.pieces[k].last].param;
        const Rational hi = r.samples[r.pieces[k + 1].first].param;
        const Poly diff = r.pieces[k].poly - r.pieces[k + 1].poly;
        const Rational a = diff.eval(lo), b = diff.eval(hi);
        // A sign change across the bracket means the two polynomials cross
        // inside it, which is what continuity of the underlying function
        // looks like at grid resolution.
        const bool crosses = !(a * b).is_positive();
        r.boundaries.push_back({lo, hi, crosses});
    }
}

}  // namespace detail

inline SweepResult sweep(BoxFamily family, int n, std::vector<Rational> grid,
                         const SweepOptions& opt = {}) {
    if (n < 1) throw std::invalid_argument("sweep: need n >= 1");
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    const Rational top = family_param_max(family);
    for (const auto& g : grid)
        if (g.is_negative() || top < g)
            throw std::invalid_argument("sweep: grid point outside [0, " + top.str() + "]");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SweepResult r;
    r.family = family;
    r.n = n;

    auto solve_point = [&](const Rational& g) {
        ColGenOptions o = opt.colgen;
        if (o.warm_start.empty()) o.warm_start = warm_start(family, n);
        Box b = make_family(family, n, Scalar(g));
        return SweepSample{g, local_part(b, opt.mode, std::move(o))};
    };

    for (const auto& g : grid) r.samples.push_back(solve_point(g));
    detail::fit_sweep_pieces(r);

    for (int level = 0; level < opt.refine; ++level) {
        std::vector<Rational> extra;
        for (const auto& bd : r.boundaries) {
            const Rational quarter = (bd.hi - bd.lo) / Rational(4);
            for (int k = 1; k <= 3; ++k) {
                const Rational g = bd.lo + Rational(k) * quarter;
                bool known = false;
                for (const auto& s : r.samples) known = known || s.param == g;
                if (!known) extra.push_back(g);
            }
        }
        if (extra.empty()) break;
        for (const auto& g : extra) r.samples.push_back(solve_point(g));
        std::sort(r.samples.begin(), r.samples.end(),
                  [](const SweepSample& a, const SweepSample& b) { return a.param < b.param; });
        detail::fit_sweep_pieces(r);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Mixed tensor words: the coefficient boxes of the noisy power expanded in
// powers of the noise.

// Sum of all n-fold tensor words with k factors of the closest local box
// (the quarter-noise box) and n-k factors of the perfect box. Mass is
// binomial(n, k).
inline Box make_snk(int n, int k) {
    if (n < 1 || n > 3) throw std::domain_error("make_snk: supported for 1 <= n <= 3");
    if (k < 0 || k > n) throw std::invalid_argument("make_snk: need 0 <= k <= n");
    const Box pr = make_pr(1);
    const Box closest = make_isotropic(1, Scalar(Rational(1, 4)));
    std::vector<Box> words;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        Box word;
        for (int i = n - 1; i >= 0; --i) word = tensor(word, (mask >> i) & 1u ? closest : pr);
        words.push_back(std::move(word));
    }
    return mix(std::vector<Scalar>(words.size(), Scalar(1)), words);
}

struct SnkReport {
    int n = 0, k = 0;
    Box box;
    Rational mass;
    LocalPart local;
};

inline SnkReport snk(int n, int k, std::optional<SolveMode> mode = std::nullopt,
                     ColGenOptions opt = {}) {
    SnkReport rep;
    rep.n = n;
    rep.k = k;
    rep.box = make_snk(n, k);
    rep.mass = Rational(binomial(n, k));
    const SolveMode m = mode.value_or(n <= 2 ? SolveMode::full : SolveMode::colgen);
    rep.local = local_part(rep.box, m, std::move(opt));
    return rep;
}

// Checks that the noisy power equals the word sum weighted by noise powers,
// entry by entry. Works symbolically when eps carries the variable.
inline std::optional<CellRef> snk_expansion_gap(int n, const Scalar& eps) {
    if (n < 1 || n > 3) throw std::domain_error("snk_expansion_gap: supported for 1 <= n <= 3");
    const Scalar on = Scalar(4) * eps;
    const Scalar off = Scalar(1) - on;
    std::vector<Scalar> weights;
    std::vector<Box> parts;
    for (int k = 0; k <= n; ++k) {
        weights.push_back(on.pow(k) * off.pow(n - k));
        parts.push_back(make_snk(n, k));
    }
    const Box sum = mix(weights, parts);
    const Box target = make_isotropic(n, eps);
    for (size_t c = 0; c < target.size(); ++c)
        if (sum[c] != target[c]) return target.cell(c);
    return std::nullopt;
}

inline bool snk_expansion_check(int n, const Scalar& eps) {
    return !snk_expansion_gap(n, eps);
}

}  // namespace prbox
