#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "iet/first_return.hpp"

namespace iet {

// A tower over a base exchange: column i carries heights[i] copies of the
// base interval I_i, flattened to an exchange on [0, sum heights[i]*|I_i|).
// Layout: levels are laid out row-major from the bottom row up; within a
// row the surviving columns appear in order of decreasing height (ties by
// base index). The tower map carries a point up its column and applies the
// base map from the top level back into the bottom row.
//
// Any layout gives the same conjugacy class; this one keeps constant-height
// towers literally row-stacked and keeps two-column towers with distinct
// heights from collapsing onto their own base row, which the
// chain/induction pipeline relies on.
struct TowerShape {
    IET base;
    std::vector<std::int64_t> heights;
    std::vector<std::vector<ExactReal>> slot_start;  // [column][row-1]
    IET tower;
};

// Flattened interval of column col (0-based) at row (1-based).
inline Interval tower_slot(const TowerShape& shape, int col, std::int64_t row) {
    const ExactReal& start = shape.slot_start[static_cast<std::size_t>(col)]
                                             [static_cast<std::size_t>(row - 1)];
    return {start, start + shape.base.lambda()[static_cast<std::size_t>(col)]};
}

inline TowerShape tower_build(const IET& base, std::vector<std::int64_t> heights) {
    int m = base.count();
    if (static_cast<int>(heights.size()) != m)
        fail(errc::height_mismatch, "height count does not match base interval count");
    for (std::int64_t h : heights)
        if (h < 1) fail(errc::height_mismatch, "heights must be positive");

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return heights[static_cast<std::size_t>(x)] > heights[static_cast<std::size_t>(y)];
    });

    std::int64_t max_h = *std::max_element(heights.begin(), heights.end());
    std::vector<std::vector<ExactReal>> slot_start(static_cast<std::size_t>(m));
    ExactReal cursor = ExactReal::zero(base.basis());
    for (std::int64_t row = 1; row <= max_h; ++row) {
        for (int col : order) {
            if (heights[static_cast<std::size_t>(col)] < row) continue;
            slot_start[static_cast<std::size_t>(col)].push_back(cursor);
            cursor = cursor + base.lambda()[static_cast<std::size_t>(col)];
        }
    }
    ExactReal total = cursor;

    std::vector<Piece> pieces;
    for (int col = 0; col < m; ++col) {
        std::int64_t h = heights[static_cast<std::size_t>(col)];
        const ExactReal& len = base.lambda()[static_cast<std::size_t>(col)];
        for (std::int64_t row = 1; row < h; ++row) {
            const ExactReal& here = slot_start[static_cast<std::size_t>(col)]
                                              [static_cast<std::size_t>(row - 1)];
            const ExactReal& up = slot_start[static_cast<std::size_t>(col)]
                                            [static_cast<std::size_t>(row)];
            pieces.push_back({here, here + len, up - here});
        }
        // Top level: apply the base map and land in the bottom row, which
        // embeds base coordinates column slot by column slot. The base
        // image of I_col may straddle base cells, so split there.
        const ExactReal& top = slot_start[static_cast<std::size_t>(col)]
                                         [static_cast<std::size_t>(h - 1)];
        ExactReal img_a = base.beta(col) + base.offset(col + 1);
        ExactReal img_b = base.beta(col + 1) + base.offset(col + 1);
        for (int c = 1; c <= m; ++c) {
            ExactReal lo = less(img_a, base.beta(c - 1)) ? base.beta(c - 1) : img_a;
            ExactReal hi = less(base.beta(c), img_b) ? base.beta(c) : img_b;
            if (sign(hi - lo) <= 0) continue;
            // base point y in cell c sits at slot_start[c][0] + (y - beta(c-1))
            const ExactReal& row1 = slot_start[static_cast<std::size_t>(c - 1)][0];
            ExactReal dom_a = top + (lo - base.offset(col + 1)) - base.beta(col);
            ExactReal dom_b = dom_a + (hi - lo);
            ExactReal dest_a = row1 + (lo - base.beta(c - 1));
            pieces.push_back({dom_a, dom_b, dest_a - dom_a});
        }
    }
    IET tower = make_from_pieces(total, std::move(pieces));
    return {base, std::move(heights), std::move(slot_start), std::move(tower)};
}

struct TowerConjugacy {
    TowerShape shape;  // S = tower over the induced exchange, heights = return times
    IET g;             // compose(g, T) = compose(S, g), verified exactly
};

// Level-matching conjugator: g translates the level T^j(J_i) of the return
// system onto the corresponding level of the tower built from the induced
// map and return times. Requires the levels to tile [0, L) (T minimal).
inline TowerConjugacy tower_conjugator(const IET& t, const ReturnSystem& rs) {
    TowerShape shape = tower_build(rs.induced, rs.return_times);
    if (!(shape.tower.length() == t.length()))
        fail(errc::levels_do_not_tile, "levels do not fill the domain");

    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < rs.pieces.size(); ++i) {
        for (std::size_t k = 0; k < rs.levels[i].size(); ++k) {
            const Interval& lv = rs.levels[i][k];
            Interval slot = tower_slot(shape, static_cast<int>(i),
                                       static_cast<std::int64_t>(k) + 1);
            pieces.push_back({lv.a, lv.b, slot.a - lv.a});
        }
    }
    IET g = [&] {
        try {
            return make_from_pieces(t.length(), std::move(pieces));
        } catch (const error& e) {
            if (e.code() == errc::levels_do_not_tile)
                fail(errc::levels_do_not_tile, "return-system levels do not tile the domain");
            throw;
        }
    }();
    if (!equal(compose(g, t), compose(shape.tower, g)))
        fail(errc::verification_failed, "tower conjugacy identity failed");
    return {std::move(shape), std::move(g)};
}

} // namespace iet
