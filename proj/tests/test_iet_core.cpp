#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "iet/exchange.hpp"
#include "test_helpers.hpp"

using namespace iet;
using namespace iet::testing;

namespace {

// rot(sqrt2 - 1) on [0,1): perm (21), lambda = (2-sqrt2, sqrt2-1).
IET rot_sqrt2(const BasisPtr& b) {
    ExactReal one = er(b, {1});
    return IET::rotation(one, sqrt2_minus_1(b));
}

} // namespace

TEST_CASE("construction and translation offsets") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);

    IET rot = rot_sqrt2(b);
    // offsets w_1 = alpha, w_2 = alpha - 1 per the defining formula
    CHECK(rot.offset(1) == alpha);
    CHECK(rot.offset(2) == alpha - one);

    IET id = IET::identity(one);
    CHECK(id.count() == 1);
    CHECK(id.offset(1).is_zero());

    CHECK_THROWS_MATCHES(
        IET::make(Permutation({1, 2}), {er(b, {Rational(1, 2)}), er(b, {Rational(1, 3)})}, one),
        error, Catch::Matchers::Predicate<error>([](const error& e) {
            return e.code() == errc::length_sum_mismatch;
        }));
    CHECK_THROWS_MATCHES(
        IET::make(Permutation({1, 2}), {er(b, {Rational(3, 2)}), er(b, {Rational(-1, 2)})}, one),
        error, Catch::Matchers::Predicate<error>([](const error& e) {
            return e.code() == errc::nonpositive_length;
        }));
    CHECK_THROWS(Permutation({1, 1, 3}));
}

TEST_CASE("evaluation") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);
    IET rot = rot_sqrt2(b);

    CHECK(rot.evaluate(ExactReal::zero(b)) == alpha);
    CHECK(rot.evaluate(one - alpha).is_zero());  // start of I_2 maps to 0

    IET id = IET::identity(one);
    ExactReal x = er(b, {Rational(1, 3), Rational(1, 7)});
    CHECK(id.evaluate(x) == x);

    CHECK(rot.evaluate_inv(rot.evaluate(x)) == x);
    CHECK_THROWS_MATCHES(rot.evaluate(one), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::out_of_domain;
                         }));
}

TEST_CASE("inverse") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);

    CHECK(equal(invert(rot_sqrt2(b)), IET::rotation(one, one - alpha)));
    CHECK(equal(invert(IET::identity(one)), IET::identity(one)));

    std::mt19937 gen(3);
    for (int i = 0; i < 10; ++i) {
        IET s = random_iet(b, 3, gen);
        IET t = random_iet_on(b, 4, gen, s.length());
        CHECK(equal(invert(compose(s, t)), compose(invert(t), invert(s))));
        CHECK(equal(invert(invert(s)), s));
    }
}

TEST_CASE("composition") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);
    IET rot = rot_sqrt2(b);

    IET round = compose(rot, invert(rot));
    CHECK(canonicalize(round).iet.count() == 1);
    CHECK(equal(round, IET::identity(one)));

    // rotation offsets add mod 1
    ExactReal alpha2 = er(b, {Rational(1, 3)});
    IET r2 = IET::rotation(one, alpha2);
    IET sum = IET::rotation(one, real_mod(alpha + alpha2, one).remainder);
    CHECK(equal(compose(rot, r2), sum));
    CHECK(equal(compose(r2, rot), sum));

    CHECK_THROWS_MATCHES(compose(rot, IET::identity(er(b, {2}))), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::domain_mismatch;
                         }));
}

TEST_CASE("compose matches pointwise evaluation") {
    auto b = basis_sqrt23();
    std::mt19937 gen(17);
    for (int pair = 0; pair < 10; ++pair) {
        IET t = random_iet(b, 3 + pair % 3, gen);
        IET s = random_iet_on(b, 2 + pair % 4, gen, t.length());
        IET st = compose(s, t);
        for (int i = 0; i < 20; ++i) {
            ExactReal x = random_point(t, gen);
            CHECK(st.evaluate(x) == s.evaluate(t.evaluate(x)));
        }
    }
}

TEST_CASE("power") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);
    IET rot = rot_sqrt2(b);

    CHECK(equal(power(rot, 2), IET::rotation(one, real_mod(alpha + alpha, one).remainder)));
    CHECK(equal(power(rot, 0), IET::identity(one)));
    CHECK(equal(power(rot, -1), invert(rot)));
    CHECK(equal(power(rot, -3), invert(power(rot, 3))));
    CHECK(equal(compose(power(rot, 2), power(rot, 3)), power(rot, 5)));
}

TEST_CASE("canonical form") {
    auto b = basis_sqrt2();
    ExactReal a = er(b, {Rational(1, 4)});
    ExactReal c = er(b, {-1, 1});
    ExactReal d = er(b, {Rational(9, 4), -1});
    ExactReal one = a + c + d;

    // (231): continuity at beta_1 merges I_1, I_2 into one interval
    IET t = IET::make(Permutation({2, 3, 1}), {a, c, d}, one);
    auto canon = canonicalize(t);
    CHECK(canon.iet.count() == 2);
    CHECK(canon.iet.perm() == Permutation({2, 1}));
    CHECK(canon.iet.lambda()[0] == a + c);
    CHECK(canon.merge_map == std::vector<int>{0, 0, 1});

    // (321) is separating: unchanged
    IET s = IET::make(Permutation({3, 2, 1}), {a, c, d}, one);
    CHECK(canonicalize(s).iet == s);

    // identity presented in three pieces collapses to one
    IET id3 = IET::make(Permutation({1, 2, 3}), {a, c, d}, one);
    CHECK(canonicalize(id3).iet.count() == 1);

    // idempotence and pointwise agreement
    std::mt19937 gen(5);
    for (int i = 0; i < 10; ++i) {
        IET r = random_iet(b, 4, gen);
        auto c1 = canonicalize(r);
        CHECK(canonicalize(c1.iet).iet == c1.iet);
        CHECK(c1.iet.perm().is_separating());
        for (int j = 1; j <= r.count(); ++j) {
            ExactReal mid = Rational(1, 2) * (r.beta(j - 1) + r.beta(j));
            CHECK(r.evaluate(mid) == c1.iet.evaluate(mid));
        }
        for (int j = 0; j < 10; ++j) {
            ExactReal x = random_point(r, gen);
            CHECK(r.evaluate(x) == c1.iet.evaluate(x));
        }
    }
}

TEST_CASE("evaluate is a bijection of cells") {
    auto b = basis_sqrt23();
    std::mt19937 gen(29);
    for (int i = 0; i < 10; ++i) {
        IET t = canonicalize(random_iet(b, 4, gen)).iet;
        // image endpoints sorted must tile [0, L) exactly
        std::vector<Interval> images;
        for (int j = 1; j <= t.count(); ++j)
            images.push_back({t.beta(j - 1) + t.offset(j), t.beta(j) + t.offset(j)});
        std::sort(images.begin(), images.end(),
                  [](const Interval& x, const Interval& y) { return less(x.a, y.a); });
        CHECK(images.front().a.is_zero());
        for (std::size_t k = 0; k + 1 < images.size(); ++k)
            CHECK(images[k].b == images[k + 1].a);
        CHECK(images.back().b == t.length());
    }
}

TEST_CASE("discontinuities") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);

    auto d1 = discontinuities(rot_sqrt2(b));
    REQUIRE(d1.size() == 1);
    CHECK(d1[0] == one - alpha);

    CHECK(discontinuities(IET::identity(one)).empty());

    // canonical (321): both interior breakpoints are genuine
    ExactReal l3 = er(b, {3, -2});
    IET t = IET::make(Permutation({3, 2, 1}), {alpha, alpha, l3}, one);
    auto d2 = discontinuities(t);
    REQUIRE(d2.size() == 2);
    CHECK(d2[0] == alpha);
    CHECK(d2[1] == alpha + alpha);
}

TEST_CASE("rank") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);
    ExactReal l3 = er(b, {3, -2});

    // rows (-1,1), (-1,1), (3,-2) have rank 2
    IET t = IET::make(Permutation({3, 2, 1}), {alpha, alpha, l3}, one);
    CHECK(rank(t) == 2);

    CHECK(rank(rot_sqrt2(b)) == 2);
    CHECK(rank(IET::rotation(one, er(b, {Rational(1, 3)}))) == 1);
    CHECK(rank(IET::identity(one)) == 1);

    // invariance under composing with the identity and rational rescale
    IET id = IET::identity(one);
    CHECK(rank(compose(t, id)) == rank(t));
    CHECK(rank(rescale(t, er(b, {3}))) == rank(t));
}

TEST_CASE("predicates") {
    CHECK(Permutation({3, 2, 1}).is_separating());
    CHECK(!Permutation({3, 1, 2}).is_separating());  // pi(3) = pi(2)+1
    CHECK(!Permutation({2, 1, 3}).is_irreducible());
    CHECK(Permutation({3, 2, 1}).is_irreducible());

    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal alpha = sqrt2_minus_1(b);
    IET t = IET::make(Permutation({3, 2, 1}), {alpha, alpha, er(b, {3, -2})}, one);
    CHECK(!is_rotation_type(t));
    CHECK(is_rotation_type(rot_sqrt2(b)));
    CHECK(is_rotation_type(IET::identity(one)));
}

TEST_CASE("keane sufficient criterion") {
    auto b = basis_sqrt23();
    ExactReal l1 = er(b, {1, 0, 0});
    ExactReal l2 = er(b, {-1, 1, 0});
    ExactReal l3 = er(b, {-1, 0, 1});
    IET t = IET::make(Permutation({3, 2, 1}), {l1, l2, l3}, l1 + l2 + l3);
    CHECK(keane_minimal_sufficient(t) == Keane::Yes);

    CHECK(keane_minimal_sufficient(IET::identity(er(b, {1}))) == Keane::Unknown);

    // rank 2 < 3: criterion silent
    ExactReal alpha = er(b, {-1, 1, 0});
    IET low = IET::make(Permutation({3, 2, 1}), {alpha, alpha, er(b, {3, -2, 0})}, er(b, {1}));
    CHECK(keane_minimal_sufficient(low) == Keane::Unknown);
}

TEST_CASE("rescale") {
    auto b = basis_sqrt2();
    ExactReal one = er(b, {1});
    ExactReal three = er(b, {3});
    IET t = IET::make(Permutation({2, 1}), {er(b, {2}), er(b, {1})}, three);

    IET small = rescale(t, one);
    CHECK(small.lambda()[0] == er(b, {Rational(2, 3)}));
    CHECK(equal(rescale(t, three), t));

    CHECK_THROWS_MATCHES(rescale(t, er(b, {0, 1})), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::irrational_rescale;
                         }));
}

TEST_CASE("group laws on random catalog") {
    auto b = basis_sqrt2();
    std::mt19937 gen(41);
    for (int i = 0; i < 40; ++i) {
        IET t = random_iet(b, 2 + i % 3, gen);
        IET s = random_iet_on(b, 2 + (i / 2) % 3, gen, t.length());
        IET r = random_iet_on(b, 2 + (i / 3) % 4, gen, t.length());
        IET id = IET::identity(t.length());
        CHECK(equal(compose(compose(r, s), t), compose(r, compose(s, t))));
        CHECK(equal(compose(t, id), t));
        CHECK(equal(compose(id, t), t));
        CHECK(equal(compose(t, invert(t)), id));
        CHECK(equal(compose(invert(t), t), id));
    }
}

TEST_CASE("rank does not grow under taking powers") {
    auto b = basis_sqrt23();
    std::mt19937 gen(43);
    for (int i = 0; i < 8; ++i) {
        IET s = random_iet(b, 3, gen);
        for (int n = 2; n <= 3; ++n) CHECK(rank(power(s, n)) <= rank(s));
    }
}
