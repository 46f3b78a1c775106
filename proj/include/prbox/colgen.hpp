#pragma once

// Column generation for the weight-maximization LP over deterministic
// strategies. The master holds an explicit subset of strategy columns; each
// round the master is solved exactly, the pricing oracle searches the full
// implicit column set against the master duals, and either certifies
// optimality (no positive reduced cost anywhere) or returns a violated
// strategy to add. Termination is guaranteed by never adding a duplicate
// column.
//
// Master duals are lifted by one on every zero-rhs row before pricing. The
// lift keeps the dual objective and dual feasibility intact (those rows
// carry no mass) while pricing out every strategy that touches a forbidden
// cell; without it the search crawls through the huge set of strategies a
// zero row already rules out.
//
// For targets invariant under the relabeling group the master moves to the
// quotient: averaging any optimum over the group gives an invariant one, so
// it suffices to optimize over strategy orbits, and the constraints then
// collapse to one row per cell orbit. Aggregated duals spread back to an
// invariant dual vector on cells that the oracle prices over the full
// strategy set, so certification never rests on the quotient argument, and
// the certificate is expressed entirely in the original space.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "prbox/box.hpp"
#include "prbox/depol.hpp"
#include "prbox/lp.hpp"
#include "prbox/pricing.hpp"
#include "prbox/strategy.hpp"

namespace prbox {

// LP data for a rational box: one row per cell, rhs from the table.
inline LPProblem box_lp_rows(const Box& b) {
    if (b.var() != Var::none)
        throw std::invalid_argument("box_lp_rows: box still has a free parameter");
    LPProblem p;
    p.row_count = static_cast<int>(b.size());
    p.rhs.reserve(b.size());
    for (size_t i = 0; i < b.size(); ++i) p.rhs.push_back(b[i].eval(Rational(0)));
    return p;
}

// Full problem with every deterministic strategy as a column. Feasible for
// small round counts only; the enumeration guard throws beyond that.
inline std::pair<LPProblem, std::vector<LocalDetStrategy>> build_full_lp(const Box& b) {
    LPProblem p = box_lp_rows(b);
    StrategyIterator it = enumerate(b.rounds(), StrategyIterator::Side::both);
    std::vector<LocalDetStrategy> strategies;
    strategies.reserve(it.count());
    p.columns.reserve(it.count());
    p.objective.assign(it.count(), Rational(1));
    it.for_each([&](const LocalDetStrategy& s) {
        p.columns.push_back({strategy_rows(s)});
        strategies.push_back(s);
    });
    return {std::move(p), std::move(strategies)};
}

// Group average of a dual vector over cells.
inline std::vector<Rational> symmetrize_duals(const std::vector<Rational>& y, int n) {
    const uint64_t order = depol_group_size(n);
    const int a = 1 << n;
    std::vector<Rational> out(y.size(), Rational(0));
    for (uint64_t i = 0; i < order; ++i) {
        const DepolElement e = depol_element(n, i);
        for (uint32_t x = 0; x < static_cast<uint32_t>(a); ++x)
            for (uint32_t yy = 0; yy < static_cast<uint32_t>(a); ++yy)
                for (uint32_t u = 0; u < static_cast<uint32_t>(a); ++u)
                    for (uint32_t v = 0; v < static_cast<uint32_t>(a); ++v) {
                        uint32_t x2 = x, y2 = yy, u2 = u, v2 = v;
                        e.map_cell(x2, y2, u2, v2);
                        size_t from = ((static_cast<size_t>(x2) * a + y2) * a + u2) * a + v2;
                        size_t to = ((static_cast<size_t>(x) * a + yy) * a + u) * a + v;
                        out[to] += y[from];
                    }
    }
    const Rational inv_order = Rational(1) / Rational(static_cast<long>(order));
    for (auto& q : out) q *= inv_order;
    return out;
}

struct ColGenOptions {
    int threads = 0;                // 0 = hardware concurrency
    uint64_t max_rounds = 4096;     // pricing rounds before giving up
    bool symmetrize_duals = false;  // quotient master; needs an invariant target
    bool add_orbit = true;          // plain path: add the priced column's whole orbit
    std::vector<LocalDetStrategy> warm_start;
};

struct ColGenResult {
    Certificate certificate;
    std::vector<LocalDetStrategy> columns;  // aligned with certificate column ids
    Rational upper_bound;                   // valid bound even when not certified
    uint64_t rounds = 0;
    uint64_t pivots = 0;
};

namespace detail {

// y + 1 on every zero-rhs row. Dual objective and feasibility are
// unchanged; any strategy covering such a row prices out.
inline void lift_zero_rows(std::vector<Rational>& y, const std::vector<Rational>& rhs) {
    for (size_t r = 0; r < rhs.size(); ++r)
        if (rhs[r].is_zero()) y[r] += Rational(1);
}

// Scaled dual feasibility: y / (1 - gap) is feasible whenever the maximum
// reduced cost is below one, so the optimum is at most b'y / (1 - gap).
inline void tighten_bound(Rational& bound, const std::vector<Rational>& y,
                          const std::vector<Rational>& rhs, const Rational& gap) {
    if (!(gap < Rational(1))) return;
    Rational dual_value(0);
    for (size_t r = 0; r < rhs.size(); ++r)
        if (!y[r].is_zero() && !rhs[r].is_zero()) dual_value += y[r] * rhs[r];
    Rational better = dual_value / (Rational(1) - gap);
    if (better < bound) bound = std::move(better);
}

// Partition of the cell grid into relabeling orbits. Cells are scanned in
// index order, so each representative is its orbit's smallest index.
struct CellOrbits {
    std::vector<int32_t> row;   // cell index -> orbit row
    std::vector<int32_t> rep;   // orbit row -> representative cell
    std::vector<int64_t> size;  // orbit row -> member count
};

inline CellOrbits cell_orbits(int n) {
    const int a = 1 << n;
    const size_t cells = static_cast<size_t>(a) * a * a * a;
    const int order = depol_group_size(n);
    CellOrbits co;
    co.row.assign(cells, -1);
    for (size_t c = 0; c < cells; ++c) {
        if (co.row[c] >= 0) continue;
        const auto id = static_cast<int32_t>(co.rep.size());
        const uint32_t v0 = c % a, u0 = (c / a) % a;
        const uint32_t y0 = (c / a / a) % a, x0 = static_cast<uint32_t>(c / a / a / a);
        int64_t members = 0;
        for (int gi = 0; gi < order; ++gi) {
            uint32_t x = x0, y = y0, u = u0, v = v0;
            depol_element(n, gi).map_cell(x, y, u, v);
            const size_t img = ((static_cast<size_t>(x) * a + y) * a + u) * a + v;
            if (co.row[img] < 0) {
                co.row[img] = id;
                ++members;
            }
        }
        co.rep.push_back(static_cast<int32_t>(c));
        co.size.push_back(members);
    }
    return co;
}

// Column generation in the group quotient. One master row per cell orbit
// with rhs |G| b(rep); one master column per strategy orbit, whose entry at
// a row counts the group elements mapping the strategy onto a cover of the
// representative. A quotient solution of value W on an orbit of k distinct
// strategies means weight W / k on each member, which is what the
// certificate carries; the spread-back duals y(c) = yhat(row) |G| / |row|
// are constant on cell orbits, reproduce the dual objective, and are priced
// over all strategies, so a nonpositive gap certifies in the original
// space. A positive gap names a strategy whose orbit the master lacks:
// members of present orbits share the (nonpositive) reduced cost of their
// representative, which also rules out duplicate columns.
inline ColGenResult quotient_column_generation(const Box& b, const ColGenOptions& opt) {
    const int n = b.rounds();
    const int a = 1 << n;
    const size_t cells = static_cast<size_t>(a) * a * a * a;
    const Rational order(depol_group_size(n));
    const std::vector<Rational> rhs = box_lp_rows(b).rhs;

    const CellOrbits co = cell_orbits(n);
    const size_t m = co.rep.size();
    std::vector<Rational> agg_rhs;
    agg_rhs.reserve(m);
    for (size_t r = 0; r < m; ++r) agg_rhs.push_back(order * rhs[co.rep[r]]);

    DenseSimplex master(std::move(agg_rhs));
    std::vector<std::vector<LocalDetStrategy>> orbits;  // per master column
    std::map<uint64_t, int> seen;  // smallest member code -> master column

    auto add_orbit_column = [&](const LocalDetStrategy& s) {
        std::vector<LocalDetStrategy> members = orbit(s);
        const uint64_t key = members.front().encode();
        if (seen.count(key)) return false;
        std::vector<int64_t> hits(m, 0);
        for (const auto& t : members)
            for (int32_t c : strategy_rows(t)) ++hits[co.row[c]];
        const Rational scale = order / Rational(static_cast<int64_t>(members.size()));
        std::vector<Rational> col(m, Rational(0));
        for (size_t r = 0; r < m; ++r)
            if (hits[r]) col[r] = Rational(hits[r]) * scale / Rational(co.size[r]);
        seen.emplace(key, master.add_column(col, Rational(1)));
        orbits.push_back(std::move(members));
        return true;
    };
    for (const auto& s : opt.warm_start) {
        if (static_cast<int>(s.n()) != n)
            throw std::invalid_argument("column_generation: warm start round mismatch");
        add_orbit_column(s);
    }

    ColGenResult out;
    out.upper_bound = b.mass().eval(Rational(0));
    std::vector<Rational> final_dual;
    bool certified = false;
    Rational gap;

    auto spread_duals = [&] {
        const std::vector<Rational> yhat = master.duals();
        std::vector<Rational> factor(m);
        for (size_t r = 0; r < m; ++r) factor[r] = yhat[r] * order / Rational(co.size[r]);
        std::vector<Rational> y(cells);
        for (size_t c = 0; c < cells; ++c) y[c] = factor[co.row[c]];
        lift_zero_rows(y, rhs);
        return y;
    };

    while (out.rounds < opt.max_rounds) {
        out.pivots += master.solve();
        ++out.rounds;
        std::vector<Rational> y = spread_duals();
        PricedStrategy priced = price_strategies(y, n, opt.threads);
        gap = priced.reduced_cost;
        if (!gap.is_positive()) {
            final_dual = std::move(y);
            certified = true;
            break;
        }
        tighten_bound(out.upper_bound, y, rhs, gap);
        if (!add_orbit_column(priced.strategy))
            throw std::logic_error("column_generation: oracle repeated an orbit");
    }

    std::vector<int> first_col(orbits.size() + 1, 0);
    for (size_t i = 0; i < orbits.size(); ++i) {
        first_col[i + 1] = first_col[i] + static_cast<int>(orbits[i].size());
        for (const auto& t : orbits[i]) out.columns.push_back(t);
    }

    Certificate cert;
    cert.gap_mode = GapMode::oracle;
    cert.certified = certified;
    cert.pricing_gap = gap;
    cert.solution.objective = master.objective();
    cert.slack = rhs;
    for (const auto& [oid, total] : master.primal()) {
        const auto& members = orbits[oid];
        const Rational w = total / Rational(static_cast<int64_t>(members.size()));
        for (size_t k = 0; k < members.size(); ++k) {
            cert.solution.primal.push_back({first_col[oid] + static_cast<int>(k), w});
            for (int32_t r : strategy_rows(members[k])) cert.slack[r] -= w;
        }
    }
    if (!certified && out.rounds > 0) final_dual = spread_duals();
    for (size_t r = 0; r < final_dual.size(); ++r)
        if (!final_dual[r].is_zero())
            cert.solution.dual.push_back({static_cast<int>(r), final_dual[r]});
    if (!final_dual.empty()) {
        Rational dual_value(0);
        for (const auto& [r, yr] : cert.solution.dual) dual_value += yr * rhs[r];
        if (dual_value != cert.solution.objective)
            throw std::logic_error("column_generation: dual value drifted");
    }
    if (certified) out.upper_bound = cert.solution.objective;
    out.certificate = std::move(cert);
    return out;
}

}  // namespace detail

inline ColGenResult column_generation(const Box& b, const ColGenOptions& opt = {}) {
    if (opt.symmetrize_duals) {
        if (!is_depol_invariant(b))
            throw std::invalid_argument(
                "column_generation: dual symmetrization needs an invariant target");
        return detail::quotient_column_generation(b, opt);
    }

    const int n = b.rounds();
    SimplexSolver solver(box_lp_rows(b));
    ColGenResult out;
    std::map<uint64_t, int> seen;  // canonical strategy code -> column id
    auto add_strategy = [&](const LocalDetStrategy& s) {
        const uint64_t code = s.encode();
        auto it = seen.find(code);
        if (it != seen.end()) return false;
        int id = solver.add_column({strategy_rows(s)}, Rational(1));
        seen.emplace(code, id);
        out.columns.push_back(s);
        return true;
    };
    for (const auto& s : opt.warm_start) {
        if (static_cast<int>(s.n()) != n)
            throw std::invalid_argument("column_generation: warm start round mismatch");
        add_strategy(s);
    }

    const Rational mass = b.mass().eval(Rational(0));
    std::vector<Rational> final_dual;
    bool certified = false;
    Rational gap;
    out.upper_bound = mass;

    while (out.rounds < opt.max_rounds) {
        out.pivots += solver.solve();
        ++out.rounds;
        std::vector<Rational> y = solver.duals();
        detail::lift_zero_rows(y, solver.problem().rhs);

        PricedStrategy priced = price_strategies(y, n, opt.threads);
        gap = priced.reduced_cost;
        if (!priced.reduced_cost.is_positive()) {
            final_dual = std::move(y);
            certified = true;
            break;
        }
        detail::tighten_bound(out.upper_bound, y, solver.problem().rhs, gap);
        if (!add_strategy(priced.strategy))
            throw std::logic_error("column_generation: oracle repeated a column");
        if (opt.add_orbit)
            for (const auto& img : orbit(priced.strategy)) add_strategy(img);
    }

    Certificate cert;
    cert.solution = solver.solution();
    cert.slack = solver.slacks();
    cert.gap_mode = GapMode::oracle;
    cert.certified = certified;
    cert.pricing_gap = gap;
    if (certified) {
        cert.solution.dual.clear();
        for (size_t r = 0; r < final_dual.size(); ++r)
            if (!final_dual[r].is_zero())
                cert.solution.dual.push_back({static_cast<int>(r), final_dual[r]});
        Rational dual_value(0);
        for (const auto& [r, yr] : cert.solution.dual)
            dual_value += yr * solver.problem().rhs[r];
        if (dual_value != cert.solution.objective)
            throw std::logic_error("column_generation: dual value drifted");
        out.upper_bound = cert.solution.objective;
    }
    out.certificate = std::move(cert);
    return out;
}

}  // namespace prbox
