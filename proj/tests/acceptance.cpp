// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit on
// any failure. Every equality is exact; runtime budgets are wall-clock.
// Certificates produced along the way are pooled and re-verified at the end
// through the independent checker, including a mutation rejection test.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "prbox/game.hpp"
#include "prbox/io.hpp"

using namespace prbox;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Gate {
    int failures = 0;

    void report(int criterion, bool pass, const std::string& text) {
        std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, text.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

struct PooledCertificate {
    Box box;
    Certificate certificate;
    std::vector<LocalDetStrategy> columns;
};

std::vector<PooledCertificate> pool;

void pool_result(const Box& b, const LocalPart& lp) {
    pool.push_back({b, lp.certificate, lp.columns});
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::vector<Rational> grid_64() {
    return uniform_grid(Rational(0), Rational(1, 4), Rational(1, 64));
}

// 1. Single box: certified weight 4*eps across the grid, under a second.
void criterion_1(Gate& gate) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    for (const Rational& eps : grid_64()) {
        LocalPart lp = local_part(make_isotropic(1, Scalar(eps)));
        pool_result(make_isotropic(1, Scalar(eps)), lp);
        if (!lp.certificate.certified || lp.weight != Rational(4) * eps) {
            ok = false;
            why = " first mismatch at eps=" + eps.str();
            break;
        }
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 1.0;
    gate.report(1, ok,
                "single-round isotropic local part is exactly 4*eps at all 17 grid points, "
                "certified, in " + fmt("%.2f", dt) + " s (budget 1 s)" + why);
}

// 2. Two boxes: same value by both the explicit 65536-column LP and column
//    generation, with per-point budgets.
void criterion_2(Gate& gate) {
    bool ok = true;
    std::string why;
    double worst_full = 0, worst_cg = 0;
    for (const Rational& eps : grid_64()) {
        Box b = make_isotropic(2, Scalar(eps));

        auto t0 = Clock::now();
        LocalPart full = local_part(b, SolveMode::full);
        const double dt_full = seconds_since(t0);
        worst_full = std::max(worst_full, dt_full);
        pool_result(b, full);

        t0 = Clock::now();
        ColGenOptions opt;
        opt.threads = 1;
        opt.warm_start = warm_start(BoxFamily::isotropic, 2);
        LocalPart cg = local_part(b, SolveMode::colgen, opt);
        const double dt_cg = seconds_since(t0);
        worst_cg = std::max(worst_cg, dt_cg);
        pool_result(b, cg);

        const bool point_ok = full.certificate.certified &&
                              full.certificate.gap_mode == GapMode::enumerated &&
                              full.weight == Rational(4) * eps && cg.certificate.certified &&
                              cg.weight == full.weight && dt_full < 60.0 && dt_cg < 5.0;
        if (!point_ok && ok) {
            ok = false;
            why = " first failure at eps=" + eps.str();
        }
    }
    gate.report(2, ok,
                "two-round isotropic local part is 4*eps on the grid by the explicit "
                "65536-column LP (worst " + fmt("%.2f", worst_full) +
                " s, budget 60 s) and by column generation (worst " + fmt("%.2f", worst_cg) +
                " s, budget 5 s)" + why);
}

// 3. Biased family: (3*delta)^n exactly, three rounds via column generation.
void criterion_3(Gate& gate) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    const std::vector<Rational> deltas{Rational(1, 20), Rational(1, 10), Rational(1, 5),
                                       Rational(3, 10), Rational(1, 3)};
    for (int n = 1; n <= 2 && ok; ++n)
        for (const Rational& d : deltas) {
            auto tp = Clock::now();
            Box b = make_biased(n, Scalar(d));
            ColGenOptions opt;
            opt.threads = 1;
            opt.warm_start = warm_start(BoxFamily::biased, n);
            LocalPart lp = local_part(b, n == 1 ? SolveMode::full : SolveMode::colgen, opt);
            pool_result(b, lp);
            Rational expect(1);
            for (int i = 0; i < n; ++i) expect *= Rational(3) * d;
            if (!lp.certificate.certified || lp.weight != expect || seconds_since(tp) > 60.0) {
                ok = false;
                why = " first failure at n=" + std::to_string(n) + " delta=" + d.str();
                break;
            }
        }

    auto t3 = Clock::now();
    Box b3 = make_biased(3, Scalar(Rational(1, 10)));
    ColGenOptions opt3;
    opt3.threads = 1;
    opt3.warm_start = warm_start(BoxFamily::biased, 3);
    LocalPart lp3 = local_part(b3, SolveMode::colgen, opt3);
    pool_result(b3, lp3);
    const double dt3 = seconds_since(t3);
    if (!lp3.certificate.certified || lp3.weight != Rational(27, 1000) || dt3 > 1800.0) {
        ok = false;
        why += " three-round point failed";
    }
    gate.report(3, ok,
                "biased local part is (3*delta)^n for n in {1,2} over five deltas, and "
                "27/1000 at n=3, delta=1/10 via column generation in " + fmt("%.2f", dt3) +
                " s (budget 1800 s); total " + fmt("%.2f", seconds_since(t0)) + " s" + why);
}

// 4. The printed decompositions reproduce their targets symbolically.
void criterion_4(Gate& gate) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    for (Identity id : {Identity::iso_single, Identity::biased_single, Identity::iso_pair}) {
        auto bad = check_decomposition(known_decomposition(id), identity_target(id));
        if (bad) {
            ok = false;
            why += std::string(" ") + identity_name(id) + ": " + *bad;
        }
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 10.0;
    gate.report(4, ok,
                "single-round isotropic (8 terms), single-round biased (3 terms), and "
                "two-round 128-strategy decompositions all reproduce their targets with "
                "zero tolerance in " + fmt("%.2f", dt) + " s (budget 10 s)" + why);
}

// 5. Loss floors over the strategy space: exhaustive, quotient, sampled.
void criterion_5(Gate& gate) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;

    LossScan two = worst_case_exhaustive(2);
    if (two.violations != 0 || two.min_worst != 1) {
        ok = false;
        why += " two-round exhaustive scan failed";
    }

    LossScan quotient = worst_case_quotient_n3();
    LossScan sampled3 = worst_case_sampled(3, 1000000, 2026);
    if (quotient.violations != 0 || sampled3.violations != 0) {
        ok = false;
        why += " three-round floor of 2 violated";
    }

    LossScan four = worst_case_sampled(4, 1000000, 4);
    LossScan five = worst_case_sampled(5, 500000, 5);
    if (four.violations != 0 || five.violations != 0) {
        ok = false;
        why += " sampled floor violated at n in {4,5}";
    }

    const double dt = seconds_since(t0);
    ok = ok && dt < 600.0;
    gate.report(5, ok,
                "every two-round pair loses somewhere and a witness never loses both "
                "(65536 exhaustive); three rounds lose at least 2 by quotient-exhaustive "
                "scan of " + std::to_string(quotient.checked) + " classes plus 10^6 samples; "
                "n in {4,5} sampled clean; " + fmt("%.1f", dt) + " s (budget 600 s)" + why);
}

// The three-round sweep feeds criteria 6 and 7; it runs once, timed.
SweepResult run_three_round_sweep(double& dt) {
    auto t0 = Clock::now();
    SweepOptions opt;
    opt.colgen.threads = 1;
    opt.refine = 2;
    SweepResult r = sweep(BoxFamily::isotropic, 3, grid_64(), opt);
    dt = seconds_since(t0);
    for (const auto& s : r.samples) pool_result(make_isotropic(3, Scalar(s.param)), s.result);
    return r;
}

void criterion_7(Gate& gate, const SweepResult& r, double dt) {
    bool ok = dt < 14400.0 && !r.pieces.empty() && !r.samples.empty();
    std::string why;
    for (const auto& s : r.samples)
        if (!s.result.certificate.certified) {
            ok = false;
            why += " uncertified point at eps=" + s.param.str();
            break;
        }

    // The fitted leading piece, frozen after derivation: on the first grid
    // cells the weight is (64/7) * eps^2 * (3 - eps).
    const Poly golden({Rational(0), Rational(0), Rational(192, 7), Rational(-64, 7)}, Var::eps);
    const Rational lead = r.pieces.empty() ? Rational(0) : r.pieces[0].poly.coeff(2);
    if (r.pieces.empty() || r.pieces[0].poly != golden) {
        ok = false;
        why += " leading piece drifted from its recorded value";
    }
    if (lead < Rational(16) || lead > Rational(28)) {
        ok = false;
        why += " leading coefficient " + lead.str() + " outside [16, 28]";
    }
    gate.report(7, ok,
                "three-round sweep (" + std::to_string(r.samples.size()) +
                " certified points, refine 2) fits a quadratic leading piece with "
                "coefficient 192/7 (~27.43) inside [16, 28], matching the recorded "
                "polynomial (64/7)*eps^2*(3-eps), in " + fmt("%.1f", dt) +
                " s (budget 4 h)" + why);
}

// 6. Envelope at every certified point of all three sweeps; the small-noise
//    floor is tracked and its first failing grid point recorded.
void criterion_6(Gate& gate, const SweepResult& three) {
    bool ok = true;
    std::string why;
    std::string first_fail = "none";

    auto envelope = [&](int n, const Rational& eps, const Rational& value) {
        const Scalar e{eps};
        if (value > upper_bound_isotropic(n, e).rational() ||
            pairing_lower_bound(n, e).rational() > value) {
            ok = false;
            why += " envelope broken at n=" + std::to_string(n) + " eps=" + eps.str();
        }
    };

    for (const Rational& eps : grid_64()) {
        envelope(1, eps, Rational(4) * eps);
        envelope(2, eps, Rational(4) * eps);
        // At one and two rounds the small-noise floor never fails on [0, 1/4].
        for (int n = 1; n <= 2; ++n)
            if (lower_bound_isotropic(n, Scalar(eps)).rational() > Rational(4) * eps) {
                ok = false;
                why += " small-noise floor failed at n=" + std::to_string(n) +
                       " eps=" + eps.str();
            }
    }
    for (const auto& s : three.samples) {
        if (!s.result.certificate.certified) continue;
        envelope(3, s.param, s.result.weight);
        const Rational lb = lower_bound_isotropic(3, Scalar(s.param)).rational();
        if (lb > s.result.weight && first_fail == "none") first_fail = s.param.str();
    }
    // The floor's proviso is small noise only; on this grid it first breaks
    // at 7/32, already past the linear tail of the landscape.
    if (first_fail != "7/32") {
        ok = false;
        why += " small-noise floor first failed at " + first_fail + ", expected 7/32";
    }
    gate.report(6, ok,
                "counting upper bound and pairing floor bracket every certified sweep "
                "value for n in {1,2,3}; the small-noise floor holds up to its recorded "
                "first failing grid point eps=" + first_fail + why);
}

// 8. Word sums: the mixed two-round word splits as certified half local with
//    a non-signalling rest, endpoints are fully local or fully non-local,
//    and the noise expansion is a symbolic identity.
void criterion_8(Gate& gate) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;

    SnkReport s21 = snk(2, 1);
    pool_result(s21.box, s21.local);
    if (!s21.local.certificate.certified || s21.local.fraction != Rational(1, 2)) {
        ok = false;
        why += " mixed word fraction is not 1/2";
    }
    Decomposition split = decomposition_from(s21.box, s21.local);
    if (split.remainder_weight != Scalar(1) || !verify_decomposition(split, s21.box) ||
        !is_nonsignalling(split.remainder) ||
        first_negative_cell(split.remainder, {Rational(0)})) {
        ok = false;
        why += " non-local rest is not a unit-mass non-signalling box";
    }
    if (check_decomposition(known_decomposition(Identity::snk_pair_local),
                            identity_target(Identity::snk_pair_local))) {
        ok = false;
        why += " uniform-orbit local component failed";
    }

    std::set<uint64_t> products;
    std::vector<LocalDetStrategy> singles;
    enumerate(1, StrategyIterator::Side::both)
        .for_each([&](const LocalDetStrategy& s) { singles.push_back(s); });
    for (const auto& a : singles)
        for (const auto& b : singles) products.insert(product(a, b).encode());
    const Decomposition pl = known_decomposition(Identity::snk_pair_local);
    bool none_product = pl.terms.size() == 64;
    for (const auto& [w, s] : pl.terms) {
        (void)w;
        if (products.count(s.encode()) || is_product(s, 1)) none_product = false;
    }
    if (!none_product) {
        ok = false;
        why += " an orbit point factored into a product";
    }

    for (int n = 1; n <= 2; ++n) {
        SnkReport s0 = snk(n, 0);
        SnkReport sn = snk(n, n);
        pool_result(s0.box, s0.local);
        pool_result(sn.box, sn.local);
        if (!s0.local.certificate.certified || !s0.local.weight.is_zero() ||
            !sn.local.certificate.certified || sn.local.fraction != Rational(1)) {
            ok = false;
            why += " endpoint words at n=" + std::to_string(n) + " misbehaved";
        }
    }

    const Scalar eps{Poly::variable(Var::eps)};
    if (!snk_expansion_check(1, eps) || !snk_expansion_check(2, eps)) {
        ok = false;
        why += " symbolic expansion failed";
    }

    const double dt = seconds_since(t0);
    ok = ok && dt < 600.0;
    gate.report(8, ok,
                "mixed two-round word is certified exactly half local, its rest is a "
                "unit-mass nonnegative non-signalling box, all 64 support points are "
                "non-products, endpoint words are fully local or fully non-local, and "
                "the noise expansion holds symbolically; " + fmt("%.1f", dt) +
                " s (budget 600 s)" + why);
}

// 9. Every pooled certificate re-verifies independently; mutations do not.
void criterion_9(Gate& gate) {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    size_t checked = 0;
    for (const auto& entry : pool) {
        Json j = certificate_to_json(entry.certificate, entry.columns);
        auto [cert, cols] = certificate_from_json(j);
        if (auto bad = reverify_certificate(entry.box, cert, cols, 1)) {
            ok = false;
            why = " certificate " + std::to_string(checked) + " rejected: " + *bad;
            break;
        }
        ++checked;
    }

    if (ok) {
        const PooledCertificate* victim = nullptr;
        for (const auto& entry : pool)
            if (!entry.certificate.solution.primal.empty()) victim = &entry;
        if (!victim) {
            ok = false;
            why = " no certificate with a nonzero primal to mutate";
        } else {
            Certificate mutated = victim->certificate;
            mutated.solution.primal.front().second += Rational(1, 1000000007);
            if (!reverify_certificate(victim->box, mutated, victim->columns, 1)) {
                ok = false;
                why = " a perturbed weight slipped through the checker";
            }
        }
    }
    gate.report(9, ok,
                "all " + std::to_string(checked) + " certificates produced above " +
                "re-verify through the independent checker, and a perturbed weight is "
                "rejected; " + fmt("%.1f", seconds_since(t0)) + " s" + why);
}

}  // namespace

int main() {
    Gate gate;
    criterion_1(gate);
    criterion_2(gate);
    criterion_3(gate);
    criterion_4(gate);
    criterion_5(gate);
    double sweep_seconds = 0;
    SweepResult three = run_three_round_sweep(sweep_seconds);
    criterion_6(gate, three);
    criterion_7(gate, three, sweep_seconds);
    criterion_8(gate);
    criterion_9(gate);
    std::printf("acceptance: %d/9 criteria pass\n", 9 - gate.failures);
    return gate.failures == 0 ? 0 : 1;
}
