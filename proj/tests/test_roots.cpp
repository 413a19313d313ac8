#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "iet/roots.hpp"
#include "test_helpers.hpp"

using namespace iet;
using namespace iet::testing;

namespace {

IET rot_sqrt2(const BasisPtr& b) {
    return IET::rotation(er(b, {1}), sqrt2_minus_1(b));
}

IET idoc_holds_3iet(const BasisPtr& b) {
    ExactReal alpha = sqrt2_minus_1(b);
    return IET::make(Permutation({3, 2, 1}), {alpha, alpha, er(b, {3, -2})}, er(b, {1}));
}

} // namespace

TEST_CASE("tower reduce step: direct branch on type (1,2)") {
    auto b = basis_sqrt2();
    TowerShape shape = tower_build(rot_sqrt2(b), {1, 2});
    TowerReduceStep step = tower_reduce_step(shape);

    CHECK(!step.inverted_step);
    CHECK(step.smaller.heights == std::vector<std::int64_t>{1, 1});
    // base exchanges (l1+l2, l2) = (1, sqrt2-1)
    CHECK(step.smaller.base.lambda()[0] == er(b, {1}));
    CHECK(step.smaller.base.lambda()[1] == er(b, {-1, 1}));
    CHECK(equal(compose(shape.tower, step.g), compose(step.g, step.smaller.tower)));
}

TEST_CASE("tower reduce step: inverted branch on type (2,3)") {
    auto b = basis_sqrt2();
    TowerShape shape = tower_build(rot_sqrt2(b), {2, 3});
    TowerReduceStep step = tower_reduce_step(shape);

    CHECK(step.inverted_step);
    CHECK(step.smaller.heights == std::vector<std::int64_t>{1, 2});
    // base exchanges (l2, l1+l2)
    CHECK(step.smaller.base.lambda()[0] == er(b, {-1, 1}));
    CHECK(step.smaller.base.lambda()[1] == er(b, {1}));
    CHECK(equal(compose(invert(shape.tower), step.g), compose(step.g, step.smaller.tower)));
}

TEST_CASE("tower reduce step rejects equal heights") {
    auto b = basis_sqrt2();
    TowerShape shape = tower_build(rot_sqrt2(b), {2, 2});
    CHECK_THROWS_MATCHES(tower_reduce_step(shape), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::equal_heights;
                         }));
}

TEST_CASE("tower classification") {
    auto b = basis_sqrt2();
    IET rot = rot_sqrt2(b);

    auto classify = [&](std::int64_t m, std::int64_t n) {
        TowerShape shape = tower_build(rot, {m, n});
        TowerForm form = tower_classify(shape);
        // re-verify the certificate from scratch
        IET lhs = compose(invert(form.g), compose(form.model(), form.g));
        CHECK(equal(lhs, form.inverted ? invert(shape.tower) : shape.tower));
        return form;
    };

    SECTION("coprime types are conjugate to rotations") {
        for (auto [m, n] : {std::pair<std::int64_t, std::int64_t>{2, 3}, {3, 5}, {1, 2}}) {
            TowerForm form = classify(m, n);
            CHECK(form.kind == TowerForm::Kind::Rotation);
            CHECK(form.d == 1);
        }
    }

    SECTION("non-coprime types are constant-height towers of the gcd") {
        for (auto [m, n, d] :
             {std::tuple<std::int64_t, std::int64_t, std::int64_t>{4, 6, 2}, {2, 2, 2}, {6, 9, 3}}) {
            TowerForm form = classify(m, n);
            CHECK(form.kind == TowerForm::Kind::ConstantHeight);
            CHECK(form.d == d);
        }
    }

    SECTION("decreasing heights go through the inverse tower") {
        TowerForm form = classify(3, 2);
        CHECK(form.kind == TowerForm::Kind::Rotation);
        TowerForm form2 = classify(6, 4);
        CHECK(form2.kind == TowerForm::Kind::ConstantHeight);
        CHECK(form2.d == 2);
    }

    SECTION("kind matches the gcd exactly") {
        for (std::int64_t m = 1; m <= 4; ++m)
            for (std::int64_t n = 1; n <= 4; ++n) {
                TowerForm form = classify(m, n);
                if (std::gcd(m, n) == 1)
                    CHECK(form.kind == TowerForm::Kind::Rotation);
                else {
                    CHECK(form.kind == TowerForm::Kind::ConstantHeight);
                    CHECK(form.d == std::gcd(m, n));
                }
            }
    }

    SECTION("rational base rotations are rejected") {
        IET r3 = IET::rotation(er(b, {1}), er(b, {Rational(1, 3)}));
        CHECK_THROWS_MATCHES(tower_classify(tower_build(r3, {2, 3})), error,
                             Catch::Matchers::Predicate<error>([](const error& e) {
                                 return e.code() == errc::not_minimal_base;
                             }));
    }
}

TEST_CASE("root congruence system") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);

    SECTION("d = 1: beta = alpha / 2") {
        auto beta = solve_root_system(1, alpha, one);
        REQUIRE(beta.size() == 1);
        CHECK(beta[0] == Rational(1, 2) * alpha);
    }

    SECTION("d = 2 over alpha = sqrt2 - 1") {
        auto beta = solve_root_system(2, alpha, one);
        REQUIRE(beta.size() == 2);
        // -alpha/3 mod 1 = (4 - sqrt2)/3, and 2*alpha/3
        CHECK(beta[0] == er(b, {Rational(4, 3), Rational(-1, 3)}));
        CHECK(beta[1] == er(b, {Rational(-2, 3), Rational(2, 3)}));
        // re-check the congruences by hand
        CHECK(real_mod(beta[0] + beta[0] + beta[1], one).remainder.is_zero());
        CHECK(real_mod(beta[0] + beta[1] + beta[1] - alpha, one).remainder.is_zero());
    }

    SECTION("rational alpha gives rational betas") {
        auto beta = solve_root_system(3, er(b, {Rational(2, 7)}), one);
        for (const auto& bi : beta) CHECK(bi.is_rational());
    }
}

TEST_CASE("roots of constant-height towers") {
    auto b = basis_sqrt2();
    IET rot = rot_sqrt2(b);
    for (std::int64_t d : {1, 2, 3}) {
        TowerShape shape = tower_build(rot, {d, d});
        RootCertificate cert = build_root_of_constant_tower(shape);
        CHECK(cert.n == d + 1);
        CHECK(cert.verified);
        CHECK(equal(power(cert.s, cert.n), shape.tower));
    }
}

TEST_CASE("roots of rotations") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);

    RootCertificate r1 = rotation_root(IET::rotation(one, alpha), 2);
    CHECK(equal(r1.s, IET::rotation(one, Rational(1, 2) * alpha)));
    CHECK(equal(power(r1.s, 2), IET::rotation(one, alpha)));

    RootCertificate r2 = rotation_root(IET::identity(one), 5);
    CHECK(equal(r2.s, IET::identity(one)));

    RootCertificate r3 = rotation_root(IET::rotation(one, er(b, {Rational(1, 3)})), 3);
    CHECK(equal(r3.s, IET::rotation(one, er(b, {Rational(1, 9)}))));
}

TEST_CASE("rank obstruction") {
    auto b3 = basis_sqrt23();

    // full-rank (321) 3-exchange: rank 3 > 2 = 1 + floor(3/2)
    IET t = IET::make(Permutation({3, 2, 1}),
                      {er(b3, {1, 0, 0}), er(b3, {-1, 1, 0}), er(b3, {-1, 0, 1})},
                      er(b3, {-1, 1, 1}));
    auto cert = rank_obstruction(t, MinimalityEvidence::Keane);
    REQUIRE(cert.has_value());
    CHECK(cert->reason == NoRootReason::RankBound);
    CHECK(cert->rank_value == 3);
    CHECK(cert->interval_count == 3);

    // the m = 4 family attains the bound: obstruction is silent. Its rank
    // is 3 < m, so Keane's criterion cannot certify minimality; the family
    // construction itself guarantees it.
    ExampleFamily fam = example_family(4, {er(b3, {-1, 1, 0}), er(b3, {-1, 0, 1})});
    CHECK(!rank_obstruction(fam.t, MinimalityEvidence::Asserted).has_value());

    // rotations: rank 2 = 1 + floor(2/2)
    auto b = basis_sqrt2();
    CHECK(!rank_obstruction(rot_sqrt2(b), MinimalityEvidence::Asserted).has_value());

    // claimed Keane evidence must actually hold
    CHECK_THROWS_MATCHES(
        rank_obstruction(idoc_holds_3iet(b), MinimalityEvidence::Keane), error,
        Catch::Matchers::Predicate<error>(
            [](const error& e) { return e.code() == errc::no_minimality_evidence; }));
}

TEST_CASE("3-exchange root search: IDOC holds means no root") {
    auto b = basis_sqrt2();
    RootSearch out = find_root_3iet(idoc_holds_3iet(b), 5000);
    REQUIRE(out.no_root.has_value());
    CHECK(out.no_root->reason == NoRootReason::IdocHolds);
    CHECK(!out.root.has_value());
}

TEST_CASE("3-exchange root search: towers over rotations have roots") {
    auto b = basis_sqrt2();
    IET rot = rot_sqrt2(b);

    SECTION("type (1,2) tower: conjugate to a rotation, square root exists") {
        IET t = canonicalize(tower_build(rot, {1, 2}).tower).iet;
        RootSearch out = find_root_3iet(t, 5000);
        REQUIRE(out.root.has_value());
        CHECK(out.root->n == 2);
        CHECK(equal(power(out.root->s, out.root->n), t));
        // rank stays within the bound for root-bearing maps
        CHECK(rank(t) <= 1 + static_cast<std::size_t>(canonicalize(t).iet.count()) / 2);
    }

    SECTION("type (2,3) tower") {
        IET t = canonicalize(tower_build(rot, {2, 3}).tower).iet;
        RootSearch out = find_root_3iet(t, 5000);
        REQUIRE(out.root.has_value());
        CHECK(equal(power(out.root->s, out.root->n), t));
    }

    SECTION("type (2,4) tower: constant-height classification") {
        IET t = canonicalize(tower_build(rot, {2, 4}).tower).iet;
        if (t.count() == 3) {
            RootSearch out = find_root_3iet(t, 5000);
            REQUIRE(out.root.has_value());
            CHECK(equal(power(out.root->s, out.root->n), t));
        }
    }

    SECTION("rotation-type input is rejected") {
        CHECK_THROWS_MATCHES(find_root_3iet(rot, 100), error,
                             Catch::Matchers::Predicate<error>([](const error& e) {
                                 return e.code() == errc::not_candidate;
                             }));
    }
}

TEST_CASE("optimal-rank example families") {
    auto b = basis_sqrt23();
    ExactReal a1 = er(b, {-1, 1, 0});  // sqrt2 - 1
    ExactReal a2 = er(b, {-1, 0, 1});  // sqrt3 - 1

    SECTION("m = 4: cube root, rank 3") {
        ExampleFamily fam = example_family(4, {a1, a2});
        CHECK(fam.n == 3);
        CHECK(equal(power(fam.s, 3), fam.t));
        CHECK(rank(fam.t) == 3);
        CHECK(canonicalize(fam.t).iet.count() == 4);
        CHECK(canonicalize(fam.t).iet.perm().is_separating());
    }

    SECTION("m = 5: fourth root, rank 3") {
        ExampleFamily fam = example_family(5, {a1, a2});
        CHECK(fam.n == 4);
        CHECK(equal(power(fam.s, 4), fam.t));
        CHECK(rank(fam.t) == 3);
        CHECK(canonicalize(fam.t).iet.count() == 5);
    }

    SECTION("m = 2 degenerates to a rotation") {
        ExampleFamily fam = example_family(2, {a1});
        CHECK(fam.n == 2);
        CHECK(equal(power(fam.s, 2), fam.t));
        CHECK(is_rotation_type(fam.t));
    }

    SECTION("m = 3") {
        ExampleFamily fam = example_family(3, {a1});
        CHECK(fam.n == 3);
        CHECK(equal(power(fam.s, 3), fam.t));
        CHECK(rank(fam.t) == 2);
    }

    SECTION("dependent parameters are rejected") {
        // 2*sqrt2 = 2*(sqrt2-1) + 2 lies in the span of 1 and a1
        CHECK_THROWS_MATCHES(example_family(4, {a1, er(b, {0, 2, 0})}), error,
                             Catch::Matchers::Predicate<error>([](const error& e) {
                                 return e.code() == errc::dependent_parameters;
                             }));
    }
}

TEST_CASE("chain-count bound for constructed roots") {
    auto b = basis_sqrt23();
    std::vector<std::pair<IET, IET>> pairs;  // (S, T = S^n)

    RootCertificate r = rotation_root(IET::rotation(er(b, {1}), er(b, {-1, 1, 0})), 3);
    pairs.emplace_back(r.s, power(r.s, 3));

    ExampleFamily f4 = example_family(4, {er(b, {-1, 1, 0}), er(b, {-1, 0, 1})});
    pairs.emplace_back(f4.s, f4.t);

    for (auto& [s, t] : pairs) {
        IET tc = canonicalize(t).iet;
        std::size_t m = static_cast<std::size_t>(tc.count());
        ChainSet cs = maximal_chains(s, 20000);
        CHECK(cs.chains.size() <= m / 2);
    }
}

TEST_CASE("classification requires a rotation base") {
    auto b = basis_sqrt2();
    IET three = IET::make(Permutation({3, 2, 1}),
                          {er(b, {-1, 1}), er(b, {-1, 1}), er(b, {3, -2})}, er(b, {1}));
    CHECK_THROWS_MATCHES(tower_classify(tower_build(three, {1, 2, 3})), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::not_a_rotation_base;
                         }));
}
