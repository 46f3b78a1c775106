#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prbox/box.hpp"
#include "prbox/colgen.hpp"
#include "prbox/lp.hpp"
#include "prbox/pricing.hpp"

using namespace prbox;

namespace {

// Dense duals from a sparse solution, sized for the given problem.
std::vector<Rational> dense_duals(const LPSolution& sol, int rows) {
    std::vector<Rational> y(rows, Rational(0));
    for (const auto& [r, yr] : sol.dual) y[r] = yr;
    return y;
}

Certificate full_certificate(const LPProblem& p) {
    SimplexSolver solver(p);
    solver.solve();
    Certificate cert;
    cert.solution = solver.solution();
    cert.slack = solver.slacks();
    cert.pricing_gap = max_reduced_cost(p, solver.duals());
    cert.gap_mode = GapMode::enumerated;
    cert.certified = cert.pricing_gap <= Rational(0);
    return cert;
}

// Reference pricing: scan every strategy.
PricedStrategy price_bruteforce(const std::vector<Rational>& duals, int n) {
    bool any = false;
    PricedStrategy best;
    enumerate(n, StrategyIterator::Side::both).for_each([&](const LocalDetStrategy& s) {
        Rational rc(1);
        for (int32_t r : strategy_rows(s)) rc -= duals[r];
        if (!any || rc > best.reduced_cost) {
            best = {s, rc};
            any = true;
        }
    });
    return best;
}

std::vector<Rational> random_duals(int n, std::mt19937_64& rng, bool sparse) {
    const size_t cells = size_t(1) << (4 * n);
    std::vector<Rational> y(cells);
    for (auto& q : y) {
        if (sparse && (rng() % 4)) continue;
        q = Rational(static_cast<long>(rng() % 12), static_cast<long>(1 + rng() % 16));
    }
    return y;
}

Rational local_weight_full(const Box& b) {
    auto [problem, strategies] = build_full_lp(b);
    (void)strategies;
    return solve_exact(problem).objective;
}

}  // namespace

TEST_CASE("hand-sized LP solves to the known optimum") {
    LPProblem p;
    p.row_count = 2;
    p.rhs = {Rational(1), Rational(2)};
    p.columns = {{{0}}, {{1}}, {{0, 1}}};
    p.objective = {Rational(1), Rational(1), Rational(1)};
    LPSolution sol = solve_exact(p);
    REQUIRE(sol.objective == Rational(3));
    REQUIRE(sol.primal_weight(0) == Rational(1));
    REQUIRE(sol.primal_weight(1) == Rational(2));

    Certificate cert = full_certificate(p);
    REQUIRE(!verify_certificate(cert, p));
    REQUIRE(cert.pricing_gap <= Rational(0));
}

TEST_CASE("degenerate rows and zero rhs are handled") {
    LPProblem p;
    p.row_count = 3;
    p.rhs = {Rational(0), Rational(1), Rational(0)};
    p.columns = {{{0, 1}}, {{1}}, {{1, 2}}, {{0, 2}}};
    p.objective = {Rational(1), Rational(1), Rational(1), Rational(1)};
    LPSolution sol = solve_exact(p);
    REQUIRE(sol.objective == Rational(1));
    REQUIRE(!verify_certificate(full_certificate(p), p));
}

TEST_CASE("negative rhs is rejected and empty support is unbounded") {
    LPProblem bad;
    bad.row_count = 1;
    bad.rhs = {Rational(-1)};
    bad.columns = {{{0}}};
    bad.objective = {Rational(1)};
    REQUIRE_THROWS_AS(solve_exact(bad), std::invalid_argument);

    LPProblem unb;
    unb.row_count = 1;
    unb.rhs = {Rational(1)};
    unb.columns = {{{}}};
    unb.objective = {Rational(1)};
    REQUIRE_THROWS_AS(solve_exact(unb), std::runtime_error);
}

TEST_CASE("single-round noisy box has local weight four epsilon") {
    for (long k : {0L, 2L, 8L, 11L, 16L}) {
        const Rational eps(k, 64);
        Box b = make_isotropic(1, Scalar(eps)).eval(eps);
        auto [p, strategies] = build_full_lp(b);
        (void)strategies;
        Certificate cert = full_certificate(p);
        REQUIRE(cert.solution.objective == Rational(4) * eps);
        REQUIRE(!verify_certificate(cert, p));
        REQUIRE(cert.pricing_gap <= Rational(0));
    }
}

TEST_CASE("single-round biased box has local weight three delta") {
    const Rational delta(1, 10);
    Box b = make_biased(1, Scalar(delta)).eval(delta);
    auto [p, strategies] = build_full_lp(b);
    (void)strategies;
    LPSolution sol = solve_exact(p);
    REQUIRE(sol.objective == Rational(3, 10));
}

TEST_CASE("perfect box has local weight zero and uniform box one") {
    REQUIRE(local_weight_full(make_pr(1)) == Rational(0));
    REQUIRE(local_weight_full(make_uniform(1)) == Rational(1));
    REQUIRE(local_weight_full(make_isotropic(1, Scalar(Rational(1, 4)))
                                  .eval(Rational(1, 4))) == Rational(1));
    REQUIRE(local_weight_full(Box()) == Rational(1));
}

TEST_CASE("random single-round boxes: grid mixtures never beat the LP") {
    std::mt19937_64 rng(20260818);
    for (int trial = 0; trial < 12; ++trial) {
        LPProblem p;
        p.row_count = 16;
        p.rhs.resize(16);
        for (auto& b : p.rhs)
            b = Rational(static_cast<long>(rng() % 9), static_cast<long>(1 + rng() % 8));
        std::vector<LocalDetStrategy> strategies;
        enumerate(1, StrategyIterator::Side::both)
            .for_each([&](const LocalDetStrategy& s) { strategies.push_back(s); });
        for (const auto& s : strategies) {
            p.columns.push_back({strategy_rows(s)});
            p.objective.push_back(Rational(1));
        }
        Certificate cert = full_certificate(p);
        REQUIRE(!verify_certificate(cert, p));

        // Random nonnegative weight vectors on the 1/64 grid; every feasible
        // one is a lower bound for the LP optimum.
        int feasible_seen = 0;
        for (int draw = 0; draw < 400; ++draw) {
            std::vector<Rational> w(16, Rational(0));
            Rational total(0);
            for (int pick = 0; pick < 3; ++pick) {
                int j = static_cast<int>(rng() % 16);
                w[j] += Rational(static_cast<long>(rng() % 8), 64);
            }
            std::vector<Rational> ax(16, Rational(0));
            for (int j = 0; j < 16; ++j) {
                if (w[j].is_zero()) continue;
                total += w[j];
                for (int32_t r : p.columns[j].rows) ax[r] += w[j];
            }
            bool feasible = true;
            for (int r = 0; r < 16 && feasible; ++r)
                if (ax[r] > p.rhs[r]) feasible = false;
            if (!feasible) continue;
            ++feasible_seen;
            REQUIRE(total <= cert.solution.objective);
        }
        REQUIRE(feasible_seen > 0);
    }
}

TEST_CASE("certificates reject tampering") {
    const Rational eps(1, 8);
    Box b = make_isotropic(1, Scalar(eps)).eval(eps);
    auto [p, strategies] = build_full_lp(b);
    (void)strategies;
    Certificate cert = full_certificate(p);
    REQUIRE(!verify_certificate(cert, p));

    SECTION("primal weight perturbed") {
        Certificate broken = cert;
        REQUIRE(!broken.solution.primal.empty());
        broken.solution.primal[0].second += Rational(1, 1000000);
        auto why = verify_certificate(broken, p);
        REQUIRE(why);
        REQUIRE(why->find("mismatch") != std::string::npos);
    }
    SECTION("dual entry perturbed") {
        Certificate broken = cert;
        REQUIRE(!broken.solution.dual.empty());
        broken.solution.dual[0].second += Rational(1, 1000000);
        REQUIRE(verify_certificate(broken, p));
    }
    SECTION("claimed objective inflated") {
        Certificate broken = cert;
        broken.solution.objective += Rational(1, 1000000);
        REQUIRE(verify_certificate(broken, p));
    }
    SECTION("slack entry corrupted") {
        Certificate broken = cert;
        broken.slack[3] += Rational(1, 1000000);
        auto why = verify_certificate(broken, p);
        REQUIRE(why);
        REQUIRE(why->find("slack") != std::string::npos);
    }
    SECTION("negative weight smuggled in") {
        Certificate broken = cert;
        broken.solution.primal.push_back({0, Rational(-1, 1000000)});
        REQUIRE(verify_certificate(broken, p));
    }
}

TEST_CASE("pricing agrees with strategy enumeration") {
    std::mt19937_64 rng(424242);
    for (int n : {0, 1, 2}) {
        for (int trial = 0; trial < (n == 2 ? 4 : 10); ++trial) {
            auto duals = random_duals(n, rng, trial % 2 == 0);
            PricedStrategy fast = price_strategies(duals, n, 1);
            PricedStrategy slow = price_bruteforce(duals, n);
            REQUIRE(fast.reduced_cost == slow.reduced_cost);
            Rational check(1);
            for (int32_t r : strategy_rows(fast.strategy)) check -= duals[r];
            REQUIRE(check == fast.reduced_cost);
        }
    }
}

TEST_CASE("pricing is deterministic across thread counts") {
    std::mt19937_64 rng(7);
    auto duals = random_duals(2, rng, false);
    PricedStrategy one = price_strategies(duals, 2, 1);
    PricedStrategy four = price_strategies(duals, 2, 4);
    REQUIRE(one.reduced_cost == four.reduced_cost);
    REQUIRE(one.strategy == four.strategy);
}

TEST_CASE("pricing on zero duals returns the first strategy") {
    std::vector<Rational> duals(16, Rational(0));
    PricedStrategy p = price_strategies(duals, 1, 1);
    REQUIRE(p.reduced_cost == Rational(1));
    REQUIRE(p.strategy.encode() == 0);
}

TEST_CASE("column generation matches full enumeration on one round") {
    for (long k : {0L, 1L, 5L, 13L, 16L}) {
        const Rational eps(k, 64);
        Box b = make_isotropic(1, Scalar(eps)).eval(eps);
        ColGenResult r = column_generation(b, {.threads = 1});
        REQUIRE(r.certificate.certified);
        REQUIRE(r.certificate.solution.objective == Rational(4) * eps);
        REQUIRE(r.upper_bound == r.certificate.solution.objective);

        LPProblem master;
        master.row_count = static_cast<int>(b.size());
        for (size_t i = 0; i < b.size(); ++i) master.rhs.push_back(b[i].eval(Rational(0)));
        for (const auto& s : r.columns) {
            master.columns.push_back({strategy_rows(s)});
            master.objective.push_back(Rational(1));
        }
        REQUIRE(!verify_certificate(r.certificate, master));
    }
}

// The two-round reference optimum is established by checking the
// certificate's dual against every one of the 65536 explicit columns, an
// enumeration the solver itself never sees.
TEST_CASE("column generation is optimal against the explicit two-round LP") {
    const Rational eps(1, 8);
    Box b = make_isotropic(2, Scalar(eps)).eval(eps);

    ColGenResult sym = column_generation(
        b, {.threads = 1, .symmetrize_duals = true});
    REQUIRE(sym.certificate.certified);
    REQUIRE(sym.certificate.solution.objective == Rational(1, 2));

    auto [full, strategies] = build_full_lp(b);
    (void)strategies;
    REQUIRE(max_reduced_cost(full, dense_duals(sym.certificate.solution,
                                               full.row_count)) <= Rational(0));

    LPProblem master = box_lp_rows(b);
    for (const auto& s : sym.columns) {
        master.columns.push_back({strategy_rows(s)});
        master.objective.push_back(Rational(1));
    }
    REQUIRE(!verify_certificate(sym.certificate, master));

    ColGenResult plain = column_generation(b, {.threads = 1});
    REQUIRE(plain.certificate.certified);
    REQUIRE(plain.certificate.solution.objective == Rational(1, 2));
}

TEST_CASE("column generation accepts a warm start and respects the round cap") {
    const Rational eps(1, 16);
    Box b = make_isotropic(1, Scalar(eps)).eval(eps);

    std::vector<LocalDetStrategy> warm;
    enumerate(1, StrategyIterator::Side::both)
        .for_each([&](const LocalDetStrategy& s) { warm.push_back(s); });
    ColGenResult r = column_generation(b, {.threads = 1, .warm_start = warm});
    REQUIRE(r.certificate.certified);
    REQUIRE(r.certificate.solution.objective == Rational(4) * eps);
    REQUIRE(r.rounds == 1);

    ColGenResult capped = column_generation(b, {.threads = 1, .max_rounds = 1});
    if (!capped.certificate.certified) {
        REQUIRE(capped.certificate.solution.objective <= Rational(4) * eps);
        REQUIRE(capped.upper_bound >= Rational(4) * eps);
    }
}

TEST_CASE("column generation rejects symmetrization for non-invariant boxes") {
    const Rational delta(1, 10);
    Box b = make_biased(1, Scalar(delta)).eval(delta);
    REQUIRE_THROWS_AS(
        column_generation(b, {.threads = 1, .symmetrize_duals = true}),
        std::invalid_argument);
    ColGenResult r = column_generation(b, {.threads = 1});
    REQUIRE(r.certificate.certified);
    REQUIRE(r.certificate.solution.objective == Rational(3, 10));
}
