#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "iet/exact_real.hpp"
#include "iet/linalg.hpp"
#include "iet/permutation.hpp"

namespace iet {

// Half-open interval [a, b) with exact endpoints.
struct Interval {
    ExactReal a;
    ExactReal b;
    ExactReal length() const { return b - a; }
};

class IET;
struct CanonicalIET;
inline CanonicalIET canonicalize(const IET& t);
inline IET invert(const IET& t);

// An interval exchange transformation on [0, L): ordered subinterval
// lengths plus the permutation that rearranges them by translations.
// Breakpoints and per-interval translation offsets are precomputed;
// the value is immutable afterwards.
class IET {
public:
    static IET make(Permutation perm, std::vector<ExactReal> lambda, ExactReal length) {
        if (perm.size() != static_cast<int>(lambda.size()))
            fail(errc::not_a_bijection, "permutation size does not match interval count");
        const BasisPtr& basis = length.basis();
        ExactReal sum = ExactReal::zero(basis);
        for (const ExactReal& l : lambda) {
            if (!same_basis(l.basis(), basis))
                fail(errc::basis_mismatch, "interval lengths live over different bases");
            if (sign(l) <= 0) fail(errc::nonpositive_length, "interval lengths must be positive");
            sum = sum + l;
        }
        if (!(sum == length))
            fail(errc::length_sum_mismatch, "interval lengths do not sum to the domain length");
        return IET(std::move(perm), std::move(lambda), std::move(length));
    }

    // The identity map, presented as a single interval.
    static IET identity(const ExactReal& length) {
        return make(Permutation::identity(1), {length}, length);
    }

    // x -> x + alpha (mod L); alpha is reduced into [0, L) first.
    // alpha = 0 (mod L) yields the identity.
    static IET rotation(const ExactReal& length, const ExactReal& alpha) {
        ExactReal a = real_mod(alpha, length).remainder;
        if (a.is_zero()) return identity(length);
        return make(Permutation({2, 1}), {length - a, a}, length);
    }

    const BasisPtr& basis() const { return length_.basis(); }
    const ExactReal& length() const { return length_; }
    const std::vector<ExactReal>& lambda() const { return lambda_; }
    const Permutation& perm() const { return perm_; }
    int count() const { return static_cast<int>(lambda_.size()); }

    // beta(0) = 0, beta(j) = lambda_1 + ... + lambda_j, beta(m) = L.
    const ExactReal& beta(int j) const { return beta_[static_cast<std::size_t>(j)]; }
    // Translation offset on interval j (1-based).
    const ExactReal& offset(int j) const { return offset_[static_cast<std::size_t>(j - 1)]; }

    Interval interval(int j) const { return {beta(j - 1), beta(j)}; }

    // 1-based index of the interval containing x; requires 0 <= x < L.
    int cell_of(const ExactReal& x) const {
        if (sign(x) < 0 || sign(x - length_) >= 0)
            fail(errc::out_of_domain, "point outside [0, L)");
        for (int j = 1; j < count(); ++j)
            if (sign(x - beta(j)) < 0) return j;
        return count();
    }

    ExactReal evaluate(const ExactReal& x) const { return x + offset(cell_of(x)); }

    ExactReal evaluate_inv(const ExactReal& y) const { return invert(*this).evaluate(y); }

    friend bool operator==(const IET& a, const IET& b) {
        return same_basis(a.basis(), b.basis()) && a.length_ == b.length_ &&
               a.perm_ == b.perm_ && a.lambda_ == b.lambda_;
    }

private:
    IET(Permutation perm, std::vector<ExactReal> lambda, ExactReal length)
        : length_(std::move(length)), lambda_(std::move(lambda)), perm_(std::move(perm)) {
        int m = count();
        beta_.reserve(static_cast<std::size_t>(m) + 1);
        ExactReal acc = ExactReal::zero(basis());
        beta_.push_back(acc);
        for (const ExactReal& l : lambda_) {
            acc = acc + l;
            beta_.push_back(acc);
        }
        // w_j = -sum_{i<j} lambda_i + sum_{pi(i)<pi(j)} lambda_i
        offset_.reserve(static_cast<std::size_t>(m));
        for (int j = 1; j <= m; ++j) {
            ExactReal w = -beta(j - 1);
            for (int i = 1; i <= m; ++i)
                if (perm_.image(i) < perm_.image(j)) w = w + lambda_[static_cast<std::size_t>(i - 1)];
            offset_.push_back(w);
        }
    }

    ExactReal length_;
    std::vector<ExactReal> lambda_;
    Permutation perm_;
    std::vector<ExactReal> beta_;
    std::vector<ExactReal> offset_;
};

// One piece of a piecewise translation: [a, b) shifted by offset.
struct Piece {
    ExactReal a;
    ExactReal b;
    ExactReal offset;
};

// Assembles pieces into an IET after verifying they partition [0, L) and
// their images tile [0, L). This is the single constructor behind compose,
// towers and conjugators, so those maps are validated at birth.
inline IET make_from_pieces(const ExactReal& length, std::vector<Piece> pieces) {
    if (pieces.empty()) fail(errc::invalid_argument, "no pieces");
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return less(x.a, y.a); });
    if (!pieces.front().a.is_zero())
        fail(errc::levels_do_not_tile, "pieces do not start at 0");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
        if (!(pieces[i].b == pieces[i + 1].a))
            fail(errc::levels_do_not_tile, "pieces do not partition the domain");
    if (!(pieces.back().b == length))
        fail(errc::levels_do_not_tile, "pieces do not end at the domain length");

    int m = static_cast<int>(pieces.size());
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return less(pieces[static_cast<std::size_t>(x)].a + pieces[static_cast<std::size_t>(x)].offset,
                    pieces[static_cast<std::size_t>(y)].a + pieces[static_cast<std::size_t>(y)].offset);
    });
    // Image tiling check.
    ExactReal cursor = ExactReal::zero(length.basis());
    for (int idx : order) {
        const Piece& p = pieces[static_cast<std::size_t>(idx)];
        if (!(p.a + p.offset == cursor))
            fail(errc::levels_do_not_tile, "piece images do not tile [0, L)");
        cursor = p.b + p.offset;
    }
    if (!(cursor == length)) fail(errc::levels_do_not_tile, "piece images do not tile [0, L)");

    std::vector<int> perm_images(static_cast<std::size_t>(m));
    for (int rank = 0; rank < m; ++rank)
        perm_images[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] = rank + 1;
    std::vector<ExactReal> lambda;
    lambda.reserve(static_cast<std::size_t>(m));
    for (const Piece& p : pieces) lambda.push_back(p.b - p.a);
    return IET::make(Permutation(std::move(perm_images)), std::move(lambda), length);
}

inline IET invert(const IET& t) {
    Permutation inv = t.perm().inverse();
    std::vector<ExactReal> mu;
    mu.reserve(static_cast<std::size_t>(t.count()));
    for (int p = 1; p <= t.count(); ++p)
        mu.push_back(t.lambda()[static_cast<std::size_t>(inv.image(p) - 1)]);
    return IET::make(std::move(inv), std::move(mu), t.length());
}

// compose(s, t) is the map x -> s(t(x)). Breakpoints are the union of t's
// with the t-preimages of s's, so the result refines both cell structures.
inline IET compose(const IET& s, const IET& t) {
    if (!same_basis(s.basis(), t.basis()))
        fail(errc::basis_mismatch, "composition over different bases");
    if (!(s.length() == t.length()))
        fail(errc::domain_mismatch, "composition of maps with different domains");

    std::vector<ExactReal> cuts;
    for (int j = 0; j < t.count(); ++j) cuts.push_back(t.beta(j));
    IET t_inv = invert(t);
    for (int j = 1; j < s.count(); ++j) cuts.push_back(t_inv.evaluate(s.beta(j)));
    std::sort(cuts.begin(), cuts.end(),
              [](const ExactReal& x, const ExactReal& y) { return less(x, y); });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(t.length());

    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const ExactReal& a = cuts[i];
        ExactReal mid_image = t.evaluate(a);
        ExactReal off = t.offset(t.cell_of(a)) + s.offset(s.cell_of(mid_image));
        pieces.push_back({a, cuts[i + 1], off});
    }
    return make_from_pieces(t.length(), std::move(pieces));
}

// An IET in its unique separating presentation, with the map from original
// interval indices (0-based) to canonical ones.
struct CanonicalIET {
    IET iet;
    std::vector<int> merge_map;
};

inline CanonicalIET canonicalize(const IET& t) {
    int m = t.count();
    // Maximal runs with pi(i+1) = pi(i)+1 are exactly the continuity runs.
    std::vector<std::pair<int, int>> runs;  // [first, last], 1-based
    int start = 1;
    for (int i = 2; i <= m; ++i) {
        if (t.perm().image(i) != t.perm().image(i - 1) + 1) {
            runs.emplace_back(start, i - 1);
            start = i;
        }
    }
    runs.emplace_back(start, m);

    int k = static_cast<int>(runs.size());
    std::vector<ExactReal> lambda;
    std::vector<int> image_start(static_cast<std::size_t>(k));
    lambda.reserve(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        auto [f, l] = runs[static_cast<std::size_t>(r)];
        lambda.push_back(t.beta(l) - t.beta(f - 1));
        image_start[static_cast<std::size_t>(r)] = t.perm().image(f);
    }
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return image_start[static_cast<std::size_t>(x)] < image_start[static_cast<std::size_t>(y)];
    });
    std::vector<int> perm_images(static_cast<std::size_t>(k));
    for (int rank = 0; rank < k; ++rank)
        perm_images[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] = rank + 1;

    std::vector<int> merge_map(static_cast<std::size_t>(m));
    for (int r = 0; r < k; ++r)
        for (int i = runs[static_cast<std::size_t>(r)].first; i <= runs[static_cast<std::size_t>(r)].second; ++i)
            merge_map[static_cast<std::size_t>(i - 1)] = r;

    IET canon = IET::make(Permutation(std::move(perm_images)), std::move(lambda), t.length());
    return {std::move(canon), std::move(merge_map)};
}

// Canonical-form equality: the complete invariant for the group.
inline bool equal(const IET& a, const IET& b) {
    if (!same_basis(a.basis(), b.basis()) || !(a.length() == b.length())) return false;
    IET ca = canonicalize(a).iet;
    IET cb = canonicalize(b).iet;
    return ca == cb;
}

inline IET power(const IET& t, std::int64_t n) {
    if (n == 0) return IET::identity(t.length());
    IET base = n < 0 ? invert(t) : t;
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
    IET result = IET::identity(t.length());
    for (;;) {
        if (e & 1) result = canonicalize(compose(result, base)).iet;
        e >>= 1;
        if (e == 0) break;
        base = canonicalize(compose(base, base)).iet;
    }
    return result;
}

// Interior breakpoints of the canonical form: the genuine discontinuities.
inline std::vector<ExactReal> discontinuities(const IET& t) {
    IET c = canonicalize(t).iet;
    std::vector<ExactReal> d;
    for (int j = 1; j < c.count(); ++j) d.push_back(c.beta(j));
    return d;
}

// Dimension over Q of the span of the canonical interval lengths.
inline std::size_t rank(const IET& t) {
    IET c = canonicalize(t).iet;
    std::vector<std::vector<Rational>> rows;
    rows.reserve(static_cast<std::size_t>(c.count()));
    for (const ExactReal& l : c.lambda()) rows.push_back(l.coeffs());
    return mat_rank(RationalMatrix::from_rows(rows));
}

inline bool is_rotation_type(const IET& t) { return canonicalize(t).iet.count() <= 2; }

enum class Keane { Yes, Unknown };

// Keane's sufficient criterion: irreducible canonical permutation plus
// Q-independent canonical lengths imply minimality. Unknown otherwise —
// the criterion is one-sided. Maps with fewer than two canonical intervals
// are the identity and never minimal.
inline Keane keane_minimal_sufficient(const IET& t) {
    IET c = canonicalize(t).iet;
    if (c.count() < 2 || !c.perm().is_irreducible()) return Keane::Unknown;
    return rank(c) == static_cast<std::size_t>(c.count()) ? Keane::Yes : Keane::Unknown;
}

// Rescale to a new domain length; only rational ratios newL/L are
// representable in the additive coefficient encoding.
inline IET rescale(const IET& t, const ExactReal& new_length) {
    if (sign(new_length) <= 0) fail(errc::nonpositive_length, "new length must be positive");
    const auto& lc = t.length().coeffs();
    const auto& nc = new_length.coeffs();
    Rational ratio;
    bool found = false;
    for (std::size_t i = 0; i < lc.size(); ++i) {
        if (lc[i] != 0) {
            ratio = nc[i] / lc[i];
            found = true;
            break;
        }
    }
    if (!found || !(Rational(ratio) * t.length() == new_length))
        fail(errc::irrational_rescale, "new length is not a rational multiple of the old one");
    std::vector<ExactReal> lambda;
    lambda.reserve(t.lambda().size());
    for (const ExactReal& l : t.lambda()) lambda.push_back(ratio * l);
    return IET::make(t.perm(), std::move(lambda), new_length);
}

} // namespace iet
