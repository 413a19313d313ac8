#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "iet/exchange.hpp"

namespace iet {

inline std::vector<ExactReal> orbit(const IET& t, const ExactReal& x, std::int64_t from,
                                    std::int64_t to) {
    if (from > to) fail(errc::invalid_argument, "orbit range is empty");
    std::vector<ExactReal> out;
    IET t_inv = invert(t);
    ExactReal p = x;
    if (from >= 0) {
        for (std::int64_t k = 0; k < from; ++k) p = t.evaluate(p);
    } else {
        for (std::int64_t k = 0; k < -from; ++k) p = t_inv.evaluate(p);
    }
    out.push_back(p);
    for (std::int64_t k = from; k < to; ++k) {
        check_cancelled();
        p = t.evaluate(p);
        out.push_back(p);
    }
    return out;
}

// A maximal T-chain: the orbit segment running from the first to the last
// point of D(T) u {0} on one orbit. Only the seed points are listed
// explicitly; gaps[i] forward steps of T lead from seeds[i] to seeds[i+1],
// and segment holds every orbit point along the way (seeds included).
// Points strictly between consecutive listed seeds are never seeds.
struct Chain {
    std::vector<ExactReal> seeds;
    std::vector<std::int64_t> gaps;
    std::vector<ExactReal> segment;
};

// The maximal chains found within an iteration budget. Maximality is
// budget-relative: a chain head/tail is one whose forward search spent the
// whole budget without reaching another seed. The chain count is therefore
// an upper bound on the number of distinct orbits meeting D(T) u {0}; it is
// exact whenever every true seed-to-seed gap fits in the budget.
struct ChainSet {
    std::vector<Chain> chains;
    std::int64_t budget_used = 0;
    std::int64_t max_iter = 0;
};

inline ChainSet maximal_chains(const IET& t, std::int64_t max_iter = 0) {
    if (max_iter <= 0) max_iter = default_options().max_iter;
    std::vector<ExactReal> seeds = discontinuities(t);
    seeds.insert(seeds.begin(), ExactReal::zero(t.basis()));

    auto seed_index = [&](const ExactReal& x) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            if (seeds[i] == x) return i;
        return std::nullopt;
    };

    struct Link {
        std::size_t to;
        std::int64_t steps;
        std::vector<ExactReal> interior;  // strictly between the two seeds
    };

    std::vector<std::optional<Link>> out(seeds.size());
    std::vector<bool> has_in(seeds.size(), false);
    std::int64_t used = 0;

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        ExactReal x = seeds[i];
        std::vector<ExactReal> interior;
        for (std::int64_t step = 1; step <= max_iter; ++step) {
            check_cancelled();
            x = t.evaluate(x);
            ++used;
            if (auto j = seed_index(x)) {
                if (*j == i) {
                    // A fixed seed is its own singleton chain; a longer
                    // cycle through seeds has no maximal chain at all.
                    if (step == 1) break;
                    fail(errc::periodic_seed, "a seed point is periodic");
                }
                out[i] = Link{*j, step, std::move(interior)};
                has_in[*j] = true;
                break;
            }
            interior.push_back(x);
        }
    }

    ChainSet cs;
    cs.budget_used = used;
    cs.max_iter = max_iter;
    for (std::size_t head = 0; head < seeds.size(); ++head) {
        if (has_in[head]) continue;
        Chain c;
        std::size_t cur = head;
        std::size_t hops = 0;
        c.seeds.push_back(seeds[cur]);
        c.segment.push_back(seeds[cur]);
        while (out[cur]) {
            if (++hops > seeds.size())
                fail(errc::periodic_seed, "seed links form a cycle");
            const Link& l = *out[cur];
            c.gaps.push_back(l.steps);
            for (const ExactReal& p : l.interior) c.segment.push_back(p);
            cur = l.to;
            c.seeds.push_back(seeds[cur]);
            c.segment.push_back(seeds[cur]);
        }
        cs.chains.push_back(std::move(c));
    }
    // Heads all found: in an aperiodic run every link target has an in-edge
    // and no cycles exist, so the paths cover all seeds.
    std::size_t covered = 0;
    for (const Chain& c : cs.chains) covered += c.seeds.size();
    if (covered != seeds.size())
        fail(errc::periodic_seed, "seed links form a cycle");

    // Deterministic order: by first seed.
    std::sort(cs.chains.begin(), cs.chains.end(),
              [](const Chain& a, const Chain& b) { return less(a.seeds[0], b.seeds[0]); });
    return cs;
}

} // namespace iet
