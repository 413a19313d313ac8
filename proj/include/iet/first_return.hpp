#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iet/chains.hpp"
#include "iet/exchange.hpp"

namespace iet {

struct BudgetReport {
    std::int64_t iterations_used = 0;
    std::optional<std::string> exhausted;  // budget name when inconclusive
    std::int64_t max_iter = 0;             // effective budget; 0 = session default
};

// Outcome of a budget-limited search: either a value, or an inconclusive
// report naming the exhausted budget. Truncation is a value, not an error.
template <class T>
struct Budgeted {
    std::optional<T> value;
    BudgetReport budget;

    bool inconclusive() const { return !value.has_value(); }
};

// The leftmost cell of the partition of [0, L) by all chain points:
// J = [0, min(C \ {0})), or the whole domain when C = {0}. Its interior
// avoids every discontinuity because D(T) is contained in C.
inline Interval induction_interval(const IET& t, const ChainSet& cs) {
    std::optional<ExactReal> best;
    for (const Chain& c : cs.chains)
        for (const ExactReal& p : c.segment) {
            if (p.is_zero()) continue;
            if (!best || less(p, *best)) best = p;
        }
    ExactReal zero = ExactReal::zero(t.basis());
    if (!best) return {zero, t.length()};
    return {zero, *best};
}

// First-return data for J = [a, b): the partition pieces J_i, their return
// times m_i, the induced exchange on [0, b-a), and every intermediate level
// T^j(J_i) for 0 <= j < m_i.
struct ReturnSystem {
    Interval j;
    std::vector<Interval> pieces;
    std::vector<std::int64_t> return_times;
    IET induced;
    std::vector<std::vector<Interval>> levels;
};

namespace detail {

// True iff x lies in the open interval (a, b).
inline bool in_open(const ExactReal& x, const Interval& iv) {
    return sign(x - iv.a) > 0 && sign(x - iv.b) < 0;
}

// Translates [a, a+len) one step under t, verifying the interval sits in a
// single continuity cell so the restriction really is a translation.
inline ExactReal step_interval(const IET& t, const ExactReal& a, const ExactReal& len) {
    int cell = t.cell_of(a);
    if (sign(t.beta(cell) - a - len) < 0)
        fail(errc::verification_failed, "interval straddles a discontinuity during iteration");
    return a + t.offset(cell);
}

} // namespace detail

// Return-system postconditions, re-checked from the stored levels:
//   (1) each level is carried to the next by a single translation,
//   (2) intermediate levels are disjoint from J,
//   (3) the final image of each piece is a subinterval of J,
//   (4) the final images are pairwise disjoint.
inline void verify_return_system(const IET& t_in, const ReturnSystem& rs) {
    IET t = canonicalize(t_in).iet;  // coarsest cells: translations verify cleanly
    std::size_t k = rs.pieces.size();
    std::vector<Interval> final_images;
    for (std::size_t i = 0; i < k; ++i) {
        ExactReal len = rs.pieces[i].length();
        if (rs.levels[i].size() != static_cast<std::size_t>(rs.return_times[i]))
            fail(errc::verification_failed, "level count does not match return time");
        for (std::size_t j = 0; j < rs.levels[i].size(); ++j) {
            const Interval& lv = rs.levels[i][j];
            if (!(lv.b - lv.a == len))
                fail(errc::verification_failed, "level lengths drift");
            ExactReal next = detail::step_interval(t, lv.a, len);  // (1)
            if (j + 1 < rs.levels[i].size()) {
                if (!(next == rs.levels[i][j + 1].a))
                    fail(errc::verification_failed, "levels are not consecutive images");
                // (2): disjoint from J
                const Interval& mid = rs.levels[i][j + 1];
                if (!(sign(mid.b - rs.j.a) <= 0 || sign(mid.a - rs.j.b) >= 0))
                    fail(errc::verification_failed, "intermediate level meets J");
            } else {
                // (3): back inside J
                if (sign(next - rs.j.a) < 0 || sign(next + len - rs.j.b) > 0)
                    fail(errc::verification_failed, "return image leaves J");
                final_images.push_back({next, next + len});
            }
        }
    }
    // (4)
    for (std::size_t i = 0; i < final_images.size(); ++i)
        for (std::size_t j = i + 1; j < final_images.size(); ++j) {
            const Interval &x = final_images[i], &y = final_images[j];
            if (!(sign(x.b - y.a) <= 0 || sign(y.b - x.a) <= 0))
                fail(errc::verification_failed, "return images overlap");
        }
}

// Exact tiling check: the levels partition [0, L). Holds whenever t is
// minimal; equivalent to sum m_i |J_i| = L plus pairwise disjointness.
inline bool return_levels_tile(const IET& t, const ReturnSystem& rs) {
    std::vector<Interval> all;
    for (const auto& col : rs.levels)
        for (const Interval& lv : col) all.push_back(lv);
    std::sort(all.begin(), all.end(),
              [](const Interval& x, const Interval& y) { return less(x.a, y.a); });
    if (!all.front().a.is_zero()) return false;
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        if (!(all[i].b == all[i + 1].a)) return false;
    return all.back().b == t.length();
}

// First return map to J = [a, b). The cut set of J consists of a, the
// discontinuities interior to J, and every backward-orbit first entry into
// (a, b) from a point of D(T) u {a, b}. When J's interior avoids D(T) this
// is exactly the classical construction and yields a (q+1)-exchange for q
// complete chains; interior discontinuities just contribute extra cuts.
inline Budgeted<ReturnSystem> first_return(const IET& t, const Interval& j,
                                           std::int64_t max_iter = 0) {
    if (max_iter <= 0) max_iter = default_options().max_iter;
    if (sign(j.a) < 0 || sign(j.b - j.a) <= 0 || sign(j.b - t.length()) > 0)
        fail(errc::bad_interval, "J must be a nonempty subinterval of [0, L)");

    IET c = canonicalize(t).iet;
    std::vector<ExactReal> targets = discontinuities(c);
    targets.push_back(j.a);
    if (!(j.b == c.length())) targets.push_back(j.b);

    BudgetReport report;
    report.max_iter = max_iter;
    std::vector<ExactReal> cuts;
    cuts.push_back(j.a);
    for (const ExactReal& d : discontinuities(c))
        if (detail::in_open(d, j)) cuts.push_back(d);

    IET c_inv = invert(c);
    for (const ExactReal& target : targets) {
        ExactReal y = target;
        bool resolved = false;
        for (std::int64_t step = 1; step <= max_iter; ++step) {
            check_cancelled();
            y = c_inv.evaluate(y);
            ++report.iterations_used;
            if (detail::in_open(y, j)) {
                cuts.push_back(y);
                resolved = true;
                break;
            }
            bool stop = y == j.a || y == j.b;
            for (const ExactReal& d : discontinuities(c))
                if (y == d) stop = true;
            if (stop) {
                resolved = true;  // dead end: another target owns this orbit
                break;
            }
        }
        if (!resolved) {
            report.exhausted = "max_iter";
            return {std::nullopt, report};
        }
    }

    std::sort(cuts.begin(), cuts.end(),
              [](const ExactReal& x, const ExactReal& y) { return less(x, y); });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(j.b);

    std::vector<Interval> pieces;
    std::vector<std::int64_t> times;
    std::vector<std::vector<Interval>> levels;
    std::vector<Piece> induced_pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Interval piece{cuts[i], cuts[i + 1]};
        ExactReal len = piece.length();
        std::vector<Interval> col{piece};
        ExactReal cur = piece.a;
        std::int64_t m = 0;
        for (std::int64_t step = 1;; ++step) {
            check_cancelled();
            if (step > max_iter) {
                report.exhausted = "max_iter";
                return {std::nullopt, report};
            }
            cur = detail::step_interval(c, cur, len);
            ++report.iterations_used;
            if (sign(cur - j.a) >= 0 && sign(cur + len - j.b) <= 0) {
                m = step;
                break;
            }
            col.push_back({cur, cur + len});
        }
        pieces.push_back(piece);
        times.push_back(m);
        levels.push_back(std::move(col));
        induced_pieces.push_back({piece.a - j.a, piece.b - j.a, cur - piece.a});
    }

    ReturnSystem rs{j, std::move(pieces), std::move(times),
                    make_from_pieces(j.b - j.a, std::move(induced_pieces)),
                    std::move(levels)};
    verify_return_system(c, rs);
    return {std::move(rs), report};
}

} // namespace iet
