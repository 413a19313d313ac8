#pragma once

#include <optional>
#include <utility>

#include "iet/exchange.hpp"
#include "iet/linalg.hpp"

namespace iet {

// Canonical view of a 3-exchange with the reversing permutation (321) — the
// only separating irreducible pattern on three intervals, hence the shape
// every "genuine" 3-IET takes after canonicalization.
struct ThreeIET {
    IET canon;
    ExactReal l1, l2, l3;
};

inline ThreeIET as_three_iet(const IET& t) {
    IET c = canonicalize(t).iet;
    if (c.count() != 3 || !(c.perm() == Permutation({3, 2, 1})))
        fail(errc::not_candidate, "canonical form is not a (321) 3-exchange");
    return {c, c.lambda()[0], c.lambda()[1], c.lambda()[2]};
}

// Minimality is equivalent to (l1 - l3)/(L - l3) being irrational: the
// first return to [0, L - l3) is a rotation by that fraction of its
// domain. Over coefficient vectors the test is a rank computation.
inline bool minimal_3iet(const IET& t) {
    ThreeIET v = as_three_iet(t);
    ExactReal u = v.l1 - v.l3;
    ExactReal w = v.canon.length() - v.l3;
    RationalMatrix m = RationalMatrix::from_rows({u.coeffs(), w.coeffs()});
    return mat_rank(m) == 2;
}

struct IdocResult {
    bool holds = false;
    // witness with n*(l1-l3) = l1 + m*(L-l3), present exactly when it fails
    std::optional<std::pair<Integer, Integer>> witness;
};

// Keane's infinite distinct orbit condition for a minimal (321) 3-exchange:
// holds iff no integer pair (n, m) solves n*(l1-l3) = l1 + m*(L-l3).
// The rational relaxation is solved coordinate-by-coordinate over the
// basis, then searched for integer points; a found witness is re-verified
// by the exact vector identity before being returned.
inline IdocResult idoc_3iet(const IET& t) {
    if (!minimal_3iet(t)) fail(errc::not_minimal, "IDOC decision requires a minimal 3-exchange");
    ThreeIET v = as_three_iet(t);
    ExactReal u = v.l1 - v.l3;
    ExactReal w = v.canon.length() - v.l3;
    const ExactReal& rhs = v.l1;

    std::size_t dim = u.coeffs().size();
    RationalMatrix a(dim, 2);
    std::vector<Rational> b(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        a.at(k, 0) = u.coeffs()[k];
        a.at(k, 1) = -w.coeffs()[k];
        b[k] = rhs.coeffs()[k];
    }
    auto sol = integer_points(solve_affine(a, b));
    if (!sol) return {true, std::nullopt};

    Integer n = (*sol)[0], m = (*sol)[1];
    ExactReal check = Rational(n) * u - Rational(m) * w - rhs;
    if (!check.is_zero())
        fail(errc::verification_failed, "IDOC witness failed exact re-verification");
    return {false, std::make_pair(n, m)};
}

} // namespace iet
