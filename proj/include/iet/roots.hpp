#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "iet/chains.hpp"
#include "iet/first_return.hpp"
#include "iet/three_iet.hpp"
#include "iet/tower.hpp"

namespace iet {

// S with power(S, n) = T, checked at construction; verified is recorded so
// consumers can insist on re-verification from scratch.
struct RootCertificate {
    IET s;
    std::int64_t n = 0;
    bool verified = false;
};

enum class NoRootReason { IdocHolds, RankBound };
enum class MinimalityEvidence { Keane, ThreeIet, Asserted };

// A machine-checkable obstruction to the existence of any nontrivial root.
struct NoRootCertificate {
    NoRootReason reason;
    MinimalityEvidence evidence;
    std::size_t rank_value = 0;  // RankBound
    int interval_count = 0;      // RankBound: canonical m
};

// Classification of a two-column tower over a minimal rotation, with the
// exactly verified conjugator: g^-1 model g equals T (inverted = false) or
// T^-1 (inverted = true).
struct TowerForm {
    enum class Kind { Rotation, ConstantHeight };
    Kind kind;
    std::int64_t d = 1;  // constant height; 1 in the rotation case
    TowerShape model_shape;
    IET g;
    bool inverted = false;

    const IET& model() const { return model_shape.tower; }
    const IET& base_rotation() const { return model_shape.base; }
    ExactReal rotation_amount() const { return model_shape.base.lambda()[1]; }
};

struct TowerReduceStep {
    TowerShape smaller;
    IET g;
    bool inverted_step = false;
};

namespace detail {

inline void require_rotation_base(const TowerShape& shape) {
    if (shape.base.count() != 2 || !(shape.base.perm() == Permutation({2, 1})))
        fail(errc::not_a_rotation_base, "tower base must be a two-interval rotation");
}

inline bool rotation_is_minimal(const IET& rot) {
    RationalMatrix m =
        RationalMatrix::from_rows({rot.lambda()[1].coeffs(), rot.length().coeffs()});
    return mat_rank(m) == 2;
}

// Level j (0-based) of column col as an interval: T^j of the bottom slot.
inline Interval level_of(const TowerShape& shape, int col, std::int64_t j) {
    return tower_slot(shape, col, j + 1);
}

} // namespace detail

// One subtractive Euclid step on a tower of type (m1, m2), m1 < m2, over a
// rotation exchanging (l1, l2). Following the proof's interval matching:
// when m2-m1 >= m1 the tower itself is conjugate to a type (m1, m2-m1)
// tower over the rotation exchanging (l1+l2, l2); otherwise its inverse is
// conjugate to a type (m2-m1, m1) tower over the rotation exchanging
// (l2, l1+l2). The conjugator is assembled from the three translation
// families and the identity is verified exactly before returning.
inline TowerReduceStep tower_reduce_step(const TowerShape& shape) {
    detail::require_rotation_base(shape);
    if (shape.heights.size() != 2)
        fail(errc::not_a_rotation_base, "reduction applies to two-column towers");
    std::int64_t m1 = shape.heights[0], m2 = shape.heights[1];
    if (m1 == m2) fail(errc::equal_heights, "equal heights admit no reduction step");
    if (m1 > m2)
        fail(errc::invalid_argument,
             "reduction expects heights in increasing order; invert the tower first");

    const ExactReal l1 = shape.base.lambda()[0];
    const ExactReal l2 = shape.base.lambda()[1];
    const IET& t = shape.tower;
    std::vector<Piece> pieces;

    auto add_family = [&pieces](const Interval& from, const Interval& to) {
        pieces.push_back({from.a, from.b, to.a - from.a});
    };

    if (m2 - m1 >= m1) {
        IET base2 = IET::make(Permutation({2, 1}), {l1 + l2, l2}, l1 + l2 + l2);
        TowerShape smaller = tower_build(base2, {m1, m2 - m1});
        const IET& s = smaller.tower;

        Interval j1 = tower_slot(smaller, 0, 1);
        ExactReal k_split = j1.a + l2;
        for (std::int64_t j = 0; j < m1; ++j) {
            ExactReal shift = tower_slot(smaller, 0, j + 1).a - j1.a;
            Interval k1{j1.a + shift, k_split + shift};
            Interval k2{k_split + shift, j1.b + shift};
            add_family(k1, detail::level_of(shape, 1, m2 - m1 + j));
            add_family(k2, detail::level_of(shape, 0, j));
        }
        for (std::int64_t j = 0; j < m2 - m1; ++j)
            add_family(detail::level_of(smaller, 1, j), detail::level_of(shape, 1, j));

        IET g = make_from_pieces(t.length(), std::move(pieces));
        if (!equal(compose(t, g), compose(g, s)))
            fail(errc::verification_failed, "reduction conjugacy failed (direct case)");
        return {std::move(smaller), std::move(g), false};
    }

    IET base2 = IET::make(Permutation({2, 1}), {l2, l1 + l2}, l2 + l1 + l2);
    TowerShape smaller = tower_build(base2, {m2 - m1, m1});
    const IET& s = smaller.tower;

    for (std::int64_t j = 0; j < m2 - m1; ++j)
        add_family(detail::level_of(smaller, 0, j), detail::level_of(shape, 1, m2 - 1 - j));
    Interval j2 = tower_slot(smaller, 1, 1);
    ExactReal k_split = j2.a + l1;
    for (std::int64_t j = 0; j < m1; ++j) {
        ExactReal shift = tower_slot(smaller, 1, j + 1).a - j2.a;
        Interval k1{j2.a + shift, k_split + shift};
        Interval k2{k_split + shift, j2.b + shift};
        add_family(k1, detail::level_of(shape, 0, m1 - 1 - j));
        add_family(k2, detail::level_of(shape, 1, m1 - 1 - j));
    }

    IET g = make_from_pieces(t.length(), std::move(pieces));
    if (!equal(compose(invert(t), g), compose(g, s)))
        fail(errc::verification_failed, "reduction conjugacy failed (inverted case)");
    return {std::move(smaller), std::move(g), true};
}

namespace detail {

// For a two-column tower with heights (a, b), a > b, the inverse map is
// conjugate to the type (b, a) tower over the inverse rotation. The bottom
// row mirrors base coordinates in this orientation, so the first-return
// system of the inverse to the bottom row can be written down slot by slot.
inline TowerConjugacy invert_tower(const TowerShape& shape) {
    std::int64_t a = shape.heights[0], b = shape.heights[1];
    if (a <= b) fail(errc::invalid_argument, "invert_tower expects decreasing heights");
    const ExactReal l1 = shape.base.lambda()[0];
    const ExactReal l2 = shape.base.lambda()[1];
    ExactReal zero = ExactReal::zero(shape.base.basis());
    ExactReal row_width = shape.base.length();

    IET x = invert(shape.tower);
    Interval j{zero, row_width};
    // J-ordered pieces: the base images of the two column tops.
    std::vector<Interval> pieces{{zero, l2}, {l2, row_width}};
    std::vector<std::int64_t> times{b, a};
    std::vector<std::vector<Interval>> levels(2);
    levels[0].push_back(pieces[0]);
    for (std::int64_t k = 1; k < b; ++k) levels[0].push_back(tower_slot(shape, 1, b - k + 1));
    levels[1].push_back(pieces[1]);
    for (std::int64_t k = 1; k < a; ++k) levels[1].push_back(tower_slot(shape, 0, a - k + 1));

    IET induced = make_from_pieces(
        row_width, {Piece{zero, l2, l1}, Piece{l2, row_width, -l2}});  // the inverse rotation
    ReturnSystem rs{j, std::move(pieces), std::move(times), std::move(induced),
                    std::move(levels)};
    verify_return_system(x, rs);
    return tower_conjugator(x, rs);
}

} // namespace detail

// Full classification of a two-column tower over a minimal rotation via the
// subtractive Euclid chain of reduction steps. Conjugators are accumulated
// and the inversion parity tracked; the final identity
//   compose(invert(g), compose(model, g)) == (inverted ? invert(T) : T)
// is re-verified from scratch before returning.
inline TowerForm tower_classify(const TowerShape& input) {
    detail::require_rotation_base(input);
    if (input.heights.size() != 2)
        fail(errc::not_a_rotation_base, "classification applies to two-column towers");
    if (!detail::rotation_is_minimal(input.base))
        fail(errc::not_minimal_base, "tower base rotation is not minimal");

    const IET& t = input.tower;
    IET h = IET::identity(t.length());
    bool inverted = false;
    TowerShape cur = input;

    if (cur.heights[0] > cur.heights[1]) {
        TowerConjugacy tc = detail::invert_tower(cur);
        h = tc.g;
        inverted = true;
        cur = std::move(tc.shape);
    }
    while (cur.heights[0] != cur.heights[1]) {
        TowerReduceStep step = tower_reduce_step(cur);
        h = compose(invert(step.g), h);
        if (step.inverted_step) inverted = !inverted;
        cur = std::move(step.smaller);
    }

    std::int64_t d = cur.heights[0];
    TowerForm form{d == 1 ? TowerForm::Kind::Rotation : TowerForm::Kind::ConstantHeight,
                   d, std::move(cur), std::move(h), inverted};
    IET lhs = compose(invert(form.g), compose(form.model(), form.g));
    if (!equal(lhs, inverted ? invert(t) : t))
        fail(errc::verification_failed, "tower classification certificate failed");
    return form;
}

// Any solution of the circulant congruence system
//   (I + ones) beta = (0, ..., 0, alpha)   (mod level_length)
// via the closed inverse (I + ones)^{-1} = I - ones/(d+1), entries reduced
// into [0, level_length). The congruences are re-verified exactly.
inline std::vector<ExactReal> solve_root_system(std::int64_t d, const ExactReal& alpha,
                                                const ExactReal& level_length) {
    if (d < 1) fail(errc::invalid_argument, "system size must be at least 1");
    std::vector<ExactReal> rhs(static_cast<std::size_t>(d), ExactReal::zero(alpha.basis()));
    rhs.back() = alpha;

    ExactReal total = alpha;  // sum of rhs
    std::vector<ExactReal> beta;
    beta.reserve(static_cast<std::size_t>(d));
    ExactReal correction = Rational(1, d + 1) * total;
    for (std::int64_t i = 0; i < d; ++i)
        beta.push_back(
            real_mod(rhs[static_cast<std::size_t>(i)] - correction, level_length).remainder);

    ExactReal beta_sum = ExactReal::zero(alpha.basis());
    for (const ExactReal& bi : beta) beta_sum = beta_sum + bi;
    for (std::int64_t i = 0; i < d; ++i) {
        ExactReal row = beta_sum + beta[static_cast<std::size_t>(i)] -
                        rhs[static_cast<std::size_t>(i)];
        if (!real_mod(row, level_length).remainder.is_zero())
            fail(errc::verification_failed, "root system congruence failed re-verification");
    }
    return beta;
}

namespace detail {

// Rotation by amount on row `row` (1-based) of d rows of width w; identity
// on the other rows.
inline IET row_rotation(const ExactReal& total, const ExactReal& w, std::int64_t d,
                        std::int64_t row, const ExactReal& amount) {
    std::vector<Piece> pieces;
    for (std::int64_t r = 1; r <= d; ++r) {
        ExactReal a = Rational(r - 1) * w;
        ExactReal b = Rational(r) * w;
        if (r != row || amount.is_zero()) {
            pieces.push_back({a, b, ExactReal::zero(total.basis())});
            continue;
        }
        ExactReal cut = b - amount;
        pieces.push_back({a, cut, amount});
        pieces.push_back({cut, b, amount - w});
    }
    return make_from_pieces(total, std::move(pieces));
}

} // namespace detail

// The (d+1)-st root of a constant-height-d tower T over a rotation by
// alpha: S = P R_1 ... R_d where P cyclically permutes the rows and R_i
// rotates row i by beta_i solving the congruence system mod the row width.
// No rescaling is needed; the system is solved modulo the exact row width.
inline RootCertificate build_root_of_constant_tower(const TowerShape& shape) {
    detail::require_rotation_base(shape);
    std::int64_t d = shape.heights[0];
    for (std::int64_t h : shape.heights)
        if (h != d) fail(errc::invalid_argument, "tower does not have constant height");

    ExactReal w = shape.base.length();
    ExactReal alpha = shape.base.lambda()[1];
    ExactReal total = shape.tower.length();
    std::vector<ExactReal> beta = solve_root_system(d, alpha, w);

    std::vector<Piece> p_pieces;
    for (std::int64_t r = 1; r <= d; ++r) {
        ExactReal a = Rational(r - 1) * w;
        ExactReal b = Rational(r) * w;
        p_pieces.push_back({a, b, r < d ? w : Rational(-(d - 1)) * w});
    }
    IET s = make_from_pieces(total, std::move(p_pieces));  // P
    for (std::int64_t i = 1; i <= d; ++i)
        s = canonicalize(compose(s, detail::row_rotation(
                                        total, w, d, i, beta[static_cast<std::size_t>(i - 1)])))
                .iet;

    if (!equal(power(s, d + 1), shape.tower))
        fail(errc::verification_failed, "constant-height root failed exact verification");
    return {std::move(s), d + 1, true};
}

// n-th root of a rotation: divide the rotation amount by n.
inline RootCertificate rotation_root(const IET& rot, std::int64_t n) {
    if (n < 2) fail(errc::invalid_argument, "root order must be at least 2");
    IET c = canonicalize(rot).iet;
    if (c.count() > 2) fail(errc::not_a_rotation_base, "input is not of rotation type");
    ExactReal alpha = c.count() == 2 ? c.lambda()[1] : ExactReal::zero(c.basis());
    IET s = IET::rotation(c.length(), Rational(1, n) * alpha);
    if (!equal(power(s, n), c))
        fail(errc::verification_failed, "rotation root failed exact verification");
    return {std::move(s), n, true};
}

// Rank obstruction: a minimal m-exchange in separating form with
// rank > 1 + floor(m/2) has no n-th root for any n >= 2. Returns the
// certificate when the bound is violated, nothing when it is silent.
// Minimality evidence is re-checked where it is checkable.
inline std::optional<NoRootCertificate> rank_obstruction(const IET& t,
                                                         MinimalityEvidence evidence) {
    switch (evidence) {
        case MinimalityEvidence::Keane:
            if (keane_minimal_sufficient(t) != Keane::Yes)
                fail(errc::no_minimality_evidence, "Keane criterion does not apply");
            break;
        case MinimalityEvidence::ThreeIet:
            if (!minimal_3iet(t))
                fail(errc::no_minimality_evidence, "3-exchange minimality test fails");
            break;
        case MinimalityEvidence::Asserted:
            break;
    }
    IET c = canonicalize(t).iet;
    std::size_t r = rank(c);
    std::size_t bound = 1 + static_cast<std::size_t>(c.count()) / 2;
    if (r > bound)
        return NoRootCertificate{NoRootReason::RankBound, evidence, r, c.count()};
    return std::nullopt;
}

// Outcome of the 3-exchange root search: exactly one of root / no_root is
// set, or neither when an iteration budget truncated the chain or return
// search (budget.exhausted then names it).
struct RootSearch {
    std::optional<RootCertificate> root;
    std::optional<NoRootCertificate> no_root;
    BudgetReport budget;

    bool inconclusive() const { return !root && !no_root; }
};

// Decision pipeline for a minimal (321) 3-exchange that is not of rotation
// type: IDOC holds -> certified no root; IDOC fails -> all breakpoint
// orbits coincide, so the map is conjugate to a two-column tower over a
// minimal rotation, which is classified and given an explicit root that is
// pulled back through the accumulated conjugators. The returned
// certificate always satisfies power(S, n) = T exactly.
inline RootSearch find_root_3iet(const IET& t_in, std::int64_t max_iter = 0) {
    if (max_iter <= 0) max_iter = default_options().max_iter;
    IET t = as_three_iet(t_in).canon;
    if (!minimal_3iet(t))
        fail(errc::not_minimal, "root search requires a minimal 3-exchange");

    RootSearch out;
    out.budget.max_iter = max_iter;
    IdocResult idoc = idoc_3iet(t);
    if (idoc.holds) {
        out.no_root = NoRootCertificate{NoRootReason::IdocHolds,
                                        MinimalityEvidence::ThreeIet, 0, 3};
        return out;
    }

    ChainSet cs = maximal_chains(t, max_iter);
    out.budget.iterations_used += cs.budget_used;
    if (cs.chains.size() != 1) {
        // IDOC failure certifies a single orbit; extra chains mean the
        // budget truncated some seed-to-seed gap.
        out.budget.exhausted = "max_iter";
        return out;
    }

    Interval j = induction_interval(t, cs);
    auto fr = first_return(t, j, max_iter);
    out.budget.iterations_used += fr.budget.iterations_used;
    if (fr.inconclusive()) {
        out.budget.exhausted = fr.budget.exhausted;
        return out;
    }
    const ReturnSystem& rs = *fr.value;
    if (rs.pieces.size() != 2) {
        out.budget.exhausted = "max_iter";
        return out;
    }

    TowerConjugacy tc = tower_conjugator(t, rs);  // t = g^-1 S g
    TowerForm form = tower_classify(tc.shape);

    IET model_root = form.kind == TowerForm::Kind::Rotation
                         ? rotation_root(form.model(), 2).s
                         : build_root_of_constant_tower(form.model_shape).s;
    std::int64_t n = form.kind == TowerForm::Kind::Rotation ? 2 : form.d + 1;

    IET carrier = compose(form.g, tc.g);
    if (form.inverted) model_root = invert(model_root);
    IET root = canonicalize(compose(invert(carrier), compose(model_root, carrier))).iet;

    if (!equal(power(root, n), t))
        fail(errc::verification_failed, "3-exchange root failed exact verification");
    out.root = RootCertificate{std::move(root), n, true};
    return out;
}

struct ExampleFamily {
    IET t;
    IET s;
    std::int64_t n = 0;  // power(s, n) = t
};

// The optimal-rank families: block rotations composed with a cyclic block
// shift. For m = 2n blocks carry rotations alpha_1..alpha_n; for m = 2n+1
// an extra rotation-free block is appended. The result is a minimal
// m-exchange of rank exactly 1 + floor(m/2) together with its (blocks+1)-st
// root, both verified exactly.
inline ExampleFamily example_family(int m, const std::vector<ExactReal>& alphas) {
    if (m < 2) fail(errc::invalid_argument, "family needs m >= 2");
    int n = m / 2;
    int blocks = (m % 2 == 0) ? n : n + 1;
    if (static_cast<int>(alphas.size()) != n)
        fail(errc::invalid_argument, "family needs exactly floor(m/2) parameters");

    const BasisPtr& basis = alphas[0].basis();
    std::vector<std::vector<Rational>> rows;
    rows.push_back(ExactReal::rational(basis, 1).coeffs());
    for (const ExactReal& a : alphas) rows.push_back(a.coeffs());
    if (mat_rank(RationalMatrix::from_rows(rows)) != rows.size())
        fail(errc::dependent_parameters, "1 and the parameters must be Q-independent");

    ExactReal one = ExactReal::rational(basis, 1);
    ExactReal total = ExactReal::rational(basis, blocks);

    auto cyclic_shift = [&]() {
        std::vector<Piece> pieces;
        for (int r = 1; r <= blocks; ++r) {
            ExactReal a = ExactReal::rational(basis, r - 1);
            ExactReal b = ExactReal::rational(basis, r);
            pieces.push_back({a, b, r < blocks ? one : ExactReal::rational(basis, -(blocks - 1))});
        }
        return make_from_pieces(total, std::move(pieces));
    };

    auto assemble = [&](const std::vector<ExactReal>& amounts) {
        IET map = cyclic_shift();
        for (std::size_t i = 0; i < amounts.size(); ++i) {
            IET r = detail::row_rotation(total, one, blocks, static_cast<std::int64_t>(i) + 1,
                                         real_mod(amounts[i], one).remainder);
            map = canonicalize(compose(map, r)).iet;
        }
        return map;
    };

    IET t = assemble(alphas);

    // (I + ones) beta = (alpha_1, ..., alpha_n, [0]) mod 1
    std::vector<ExactReal> rhs;
    for (const ExactReal& a : alphas) rhs.push_back(real_mod(a, one).remainder);
    if (blocks > n) rhs.push_back(ExactReal::zero(basis));
    ExactReal rhs_sum = ExactReal::zero(basis);
    for (const ExactReal& r : rhs) rhs_sum = rhs_sum + r;
    ExactReal correction = Rational(1, blocks + 1) * rhs_sum;
    std::vector<ExactReal> beta;
    for (const ExactReal& r : rhs) beta.push_back(real_mod(r - correction, one).remainder);

    IET s = assemble(beta);
    std::int64_t order = blocks + 1;
    if (!equal(power(s, order), t))
        fail(errc::verification_failed, "family root failed exact verification");
    if (canonicalize(t).iet.count() != m)
        fail(errc::verification_failed, "family member does not have m intervals");
    if (rank(t) != 1 + static_cast<std::size_t>(m) / 2)
        fail(errc::verification_failed, "family member does not attain the rank bound");
    return {std::move(t), std::move(s), order};
}

} // namespace iet
