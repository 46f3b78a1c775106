#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prbox/box.hpp"
#include "prbox/game.hpp"

using namespace prbox;

namespace {

const Poly kEps = Poly::variable(Var::eps);
const Poly kDelta = Poly::variable(Var::delta);

Scalar eps_poly(std::initializer_list<Rational> coeffs) {
    return Scalar(Poly(coeffs, Var::eps));
}

// Random non-signalling box: a mixture of deterministic boxes and the
// perfect PR box with random rational weights.
Box random_ns_box(int n, std::mt19937_64& rng) {
    std::vector<Scalar> w;
    std::vector<Box> parts;
    long total = 0;
    for (int i = 0; i < 4; ++i) {
        long t = static_cast<long>(rng() % 8);
        total += t;
        w.push_back(Scalar(Rational(t)));
        LocalDetStrategy s;
        const uint32_t a = 1u << n;
        s.f.resize(a);
        s.g.resize(a);
        for (auto& o : s.f) o = static_cast<uint8_t>(rng() & (a - 1));
        for (auto& o : s.g) o = static_cast<uint8_t>(rng() & (a - 1));
        parts.push_back(make_deterministic(s));
    }
    w.push_back(Scalar(Rational(std::max(1l, 32 - total))));
    parts.push_back(make_pr(n));
    Scalar norm(0);
    for (const auto& x : w) norm += x;
    for (auto& x : w) x = x / norm;
    return mix(w, parts);
}

}  // namespace

TEST_CASE("trivial zero-round box") {
    Box t;
    REQUIRE(t.rounds() == 0);
    REQUIRE(t.mass() == Scalar(1));
    REQUIRE(t.at(0, 0, 0, 0) == Scalar(1));
    REQUIRE(make_pr(0) == t);
    REQUIRE(make_uniform(0) == t);
    REQUIRE(make_isotropic(0, Scalar(Rational(1, 8))) == t);

    Box b = make_isotropic(1, Scalar(Rational(1, 8)));
    REQUIRE(tensor(t, b) == b);
    REQUIRE(tensor(b, t) == b);
}

TEST_CASE("perfect PR box") {
    Box pr = make_pr(1);
    for (uint32_t u = 0; u < 2; ++u)
        for (uint32_t v = 0; v < 2; ++v)
            for (uint32_t x = 0; x < 2; ++x)
                for (uint32_t y = 0; y < 2; ++y)
                    REQUIRE(pr.at(x, y, u, v) ==
                            ((x ^ y) == (u & v) ? Scalar(Rational(1, 2)) : Scalar(0)));
    REQUIRE(is_normalized(pr));
    REQUIRE(is_nonsignalling(pr));
    REQUIRE(make_isotropic(1, Scalar(0)) == pr);

    SECTION("profile and loss histogram") {
        for (const auto& p : chsh_profile(pr)) REQUIRE(p == Scalar(1));
        auto hist = rounds_lost_mass(make_pr(2));
        REQUIRE(hist[0] == Scalar(1));
        REQUIRE(hist[1] == Scalar(0));
        REQUIRE(hist[2] == Scalar(0));
    }
}

TEST_CASE("isotropic box tables") {
    SECTION("symbolic single box") {
        Box iso = make_isotropic(1, Scalar(kEps));
        REQUIRE(iso.at(0, 0, 0, 0) == eps_poly({Rational(1, 2), Rational(-1, 2)}));
        REQUIRE(iso.at(0, 1, 0, 0) == eps_poly({Rational(0), Rational(1, 2)}));
        REQUIRE(iso.at(0, 0, 1, 1) == eps_poly({Rational(0), Rational(1, 2)}));
        REQUIRE(iso.at(1, 0, 1, 1) == eps_poly({Rational(1, 2), Rational(-1, 2)}));
        REQUIRE(is_normalized(iso));
        REQUIRE(is_nonsignalling(iso));
        for (const auto& p : chsh_profile(iso))
            REQUIRE(p == eps_poly({Rational(1), Rational(-1)}));
    }

    SECTION("uniform at the halfway point") {
        REQUIRE(make_isotropic(1, Scalar(Rational(1, 2)), true) == make_uniform(1));
    }

    SECTION("range guard") {
        REQUIRE_THROWS_AS(make_isotropic(1, Scalar(Rational(1, 2))), std::domain_error);
        REQUIRE_THROWS_AS(make_isotropic(1, Scalar(Rational(-1, 64))), std::domain_error);
        REQUIRE_NOTHROW(make_isotropic(1, Scalar(Rational(1, 2)), true));
    }

    SECTION("two boxes, losing both rounds costs eps squared over four") {
        Box iso2 = make_isotropic(2, Scalar(kEps));
        REQUIRE(iso2.at(0, 0, 3, 3) == eps_poly({Rational(0), Rational(0), Rational(1, 4)}));
        REQUIRE(is_normalized(iso2));
        REQUIRE(is_nonsignalling(iso2));
    }

    SECTION("tensor power identity") {
        Box one = make_isotropic(1, Scalar(kEps));
        REQUIRE(tensor(one, one) == make_isotropic(2, Scalar(kEps)));
        Box at8 = make_isotropic(1, Scalar(Rational(1, 8)));
        REQUIRE(tensor(at8, at8) == make_isotropic(2, Scalar(Rational(1, 8))));
    }

    SECTION("loss histogram counts rounds binomially") {
        auto hist = rounds_lost_mass(make_isotropic(2, Scalar(kEps)));
        REQUIRE(hist[0] == eps_poly({Rational(1), Rational(-2), Rational(1)}));
        REQUIRE(hist[1] == eps_poly({Rational(0), Rational(2), Rational(-2)}));
        REQUIRE(hist[2] == eps_poly({Rational(0), Rational(0), Rational(1)}));
    }
}

TEST_CASE("biased box tables") {
    Box b = make_biased(1, Scalar(kDelta));
    const Scalar lo(Poly({Rational(1, 2), Rational(-1, 2)}, Var::delta));
    const Scalar d(kDelta);

    // The three symmetric input pairs share one conditional table.
    for (auto [u, v] : {std::pair{0u, 0u}, {1u, 0u}, {0u, 1u}}) {
        REQUIRE(b.at(0, 0, u, v) == lo);
        REQUIRE(b.at(1, 0, u, v) == Scalar(0));
        REQUIRE(b.at(0, 1, u, v) == d);
        REQUIRE(b.at(1, 1, u, v) == lo);
    }
    // The both-ones pair wins perfectly.
    REQUIRE(b.at(0, 0, 1, 1) == Scalar(0));
    REQUIRE(b.at(1, 0, 1, 1) == lo);
    REQUIRE(b.at(0, 1, 1, 1) == Scalar(Poly({Rational(1, 2), Rational(1, 2)}, Var::delta)));
    REQUIRE(b.at(1, 1, 1, 1) == Scalar(0));

    REQUIRE(is_normalized(b));
    REQUIRE(is_nonsignalling(b));

    SECTION("profile wins the both-ones pair perfectly, the rest at 1-delta") {
        auto prof = chsh_profile(b);
        REQUIRE(prof[3] == Scalar(1));
        for (int i : {0, 1, 2})
            REQUIRE(prof[i] == Scalar(Poly({Rational(1), Rational(-1)}, Var::delta)));
    }

    SECTION("zero bias is the perfect box; range guard at one third") {
        REQUIRE(make_biased(1, Scalar(0)) == make_pr(1));
        REQUIRE_NOTHROW(make_biased(1, Scalar(Rational(1, 3))));
        REQUIRE_THROWS_AS(make_biased(1, Scalar(Rational(1, 2))), std::domain_error);
        REQUIRE_NOTHROW(make_biased(1, Scalar(Rational(1, 2)), true));
    }
}

TEST_CASE("deterministic boxes") {
    auto s = LocalDetStrategy::parse("[0 0 0 1; 0 0 2 0]");
    Box d = make_deterministic(s);
    REQUIRE(d.at(1, 2, 3, 2) == Scalar(1));
    REQUIRE(d.at(0, 2, 0, 2) == Scalar(1));
    for (uint32_t u = 0; u < 4; ++u)
        for (uint32_t v = 0; v < 4; ++v) {
            Scalar sum(0);
            for (uint32_t x = 0; x < 4; ++x)
                for (uint32_t y = 0; y < 4; ++y) sum += d.at(x, y, u, v);
            REQUIRE(sum == Scalar(1));
        }
    REQUIRE(is_nonsignalling(d));
}

TEST_CASE("known convex splits") {
    SECTION("noisy box as noise plus perfection") {
        Box got = mix({Scalar(Poly({Rational(0), Rational(2)}, Var::eps)),
                       Scalar(Poly({Rational(1), Rational(-2)}, Var::eps))},
                      {make_uniform(1), make_pr(1)});
        REQUIRE(got == make_isotropic(1, Scalar(kEps)));
    }

    SECTION("eight strategies on top of a PR remainder") {
        std::vector<Scalar> w;
        std::vector<Box> parts;
        for (const auto& s : orbit(LocalDetStrategy::parse("[0 0; 0 0]"))) {
            w.push_back(Scalar(Poly({Rational(0), Rational(1, 2)}, Var::eps)));
            parts.push_back(make_deterministic(s));
        }
        w.push_back(Scalar(Poly({Rational(1), Rational(-4)}, Var::eps)));
        parts.push_back(make_pr(1));
        REQUIRE(mix(w, parts) == make_isotropic(1, Scalar(kEps)));
    }

    SECTION("three biased strategies on top of a PR remainder") {
        std::vector<Scalar> w(3, Scalar(kDelta));
        std::vector<Box> parts = {
            make_deterministic(LocalDetStrategy::parse("[0 0; 0 1]")),
            make_deterministic(LocalDetStrategy::parse("[0 1; 1 0]")),
            make_deterministic(LocalDetStrategy::parse("[1 0; 1 1]"))};
        w.push_back(Scalar(Poly({Rational(1), Rational(-3)}, Var::delta)));
        parts.push_back(make_pr(1));
        REQUIRE(mix(w, parts) == make_biased(1, Scalar(kDelta)));
    }
}

TEST_CASE("component subtraction") {
    Box iso = make_isotropic(1, Scalar(kEps));
    Box quarter = make_isotropic(1, Scalar(Rational(1, 4)));

    SECTION("removing the full local mixture leaves the perfect box") {
        auto r = subtract_component(iso, Scalar(Poly({Rational(0), Rational(4)}, Var::eps)),
                                    quarter);
        REQUIRE(std::holds_alternative<Box>(r));
        REQUIRE(std::get<Box>(r) == make_pr(1));
    }

    SECTION("weight zero returns the box unchanged") {
        auto r = subtract_component(iso, Scalar(0), quarter);
        REQUIRE(std::get<Box>(r) == iso);
    }

    SECTION("overweight subtraction reports a violating cell") {
        auto r = subtract_component(iso, Scalar(Poly({Rational(0), Rational(5)}, Var::eps)),
                                    quarter);
        REQUIRE(std::holds_alternative<CellRef>(r));
        // The pinch is a losing cell: entry eps/2 against 5*eps/8.
        CellRef c = std::get<CellRef>(r);
        REQUIRE(rounds_lost_cell(c.x, c.y, c.u, c.v) == 1);
    }

    SECTION("splitting a random mixture recovers the other part") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 15; ++trial) {
            Box a = random_ns_box(1, rng);
            Box b = random_ns_box(1, rng);
            Rational p(static_cast<long>(rng() % 64), 64);
            Box m = mix({Scalar(p), Scalar(Rational(1) - p)}, {a, b});
            auto r = subtract_component(m, Scalar(p), a);
            REQUIRE(std::holds_alternative<Box>(r));
            REQUIRE(std::get<Box>(r) == b);
        }
    }
}

TEST_CASE("structural predicates catch violations") {
    Box bad = make_pr(1);
    bad.at(0, 0, 0, 0) = Scalar(Rational(1, 4));
    bad.at(1, 0, 0, 0) = Scalar(Rational(1, 4));
    // Still normalized, but Alice's marginal now depends on v.
    REQUIRE(is_normalized(bad));
    REQUIRE_FALSE(is_nonsignalling(bad));

    Box neg = make_pr(1);
    neg.at(0, 0, 0, 0) = Scalar(Rational(-1, 2));
    auto cell = first_negative_cell(neg);
    REQUIRE(cell.has_value());
    REQUIRE(*cell == CellRef{0, 0, 0, 0});
    REQUIRE_FALSE(first_negative_cell(make_isotropic(2, Scalar(kEps))).has_value());
}

TEST_CASE("tensor and mix preserve the no-signalling conditions") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        Box a = random_ns_box(1, rng);
        Box b = random_ns_box(1, rng);
        REQUIRE(is_nonsignalling(a));
        REQUIRE(is_normalized(a));
        Box t = tensor(a, b);
        REQUIRE(is_nonsignalling(t));
        REQUIRE(is_normalized(t));
        Box m = mix({Scalar(Rational(1, 3)), Scalar(Rational(2, 3))}, {a, b});
        REQUIRE(is_nonsignalling(m));
        REQUIRE(is_normalized(m));
    }
}

TEST_CASE("evaluation substitutes the parameter everywhere") {
    Box iso = make_isotropic(2, Scalar(kEps));
    Box at = iso.eval(Rational(1, 8));
    REQUIRE(at == make_isotropic(2, Scalar(Rational(1, 8))));
    REQUIRE(at.var() == Var::none);
    REQUIRE(iso.var() == Var::eps);
}
