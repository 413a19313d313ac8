#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "iet/error.hpp"
#include "iet/rational.hpp"

namespace iet {

// A rational interval [lo, hi] known to contain a real value.
struct Enclosure {
    Rational lo;
    Rational hi;
};

enum class BasisKind { Unit, Sqrt, Decimal };

// One declared basis element of the ambient Q-vector space of reals.
//   Unit          — the number 1 (mandatory at index 0)
//   Sqrt(n)       — sqrt of a squarefree integer n >= 2
//   Decimal(a, e) — an opaque real known to lie in [a - e, a + e]
struct BasisElement {
    BasisKind kind = BasisKind::Unit;
    Integer radicand = 0;       // Sqrt
    Rational approx = 0;        // Decimal
    Rational err = 0;           // Decimal, err > 0

    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

// An ordered list of reals declared linearly independent over Q. Index 0 is
// always Unit. Distinct squarefree radicands make the Sqrt family genuinely
// independent (classical result), so those are certified by construction;
// Decimal elements are trusted as declared — the library has no way to
// verify independence of arbitrary reals and does not pretend to.
class BasisSpec {
public:
    static std::shared_ptr<const BasisSpec> create(std::vector<BasisElement> elements) {
        if (elements.empty() || elements[0].kind != BasisKind::Unit)
            fail(errc::missing_unit, "basis must start with the unit element");
        for (std::size_t i = 1; i < elements.size(); ++i) {
            auto& e = elements[i];
            switch (e.kind) {
                case BasisKind::Unit:
                    fail(errc::duplicate_radicand, "unit element may appear only at index 0");
                case BasisKind::Sqrt: {
                    if (e.radicand <= 0)
                        fail(errc::nonpositive_radicand, "sqrt radicand must be positive");
                    auto [sq, rest] = squarefree_decompose(e.radicand);
                    if (rest == 1)
                        fail(errc::perfect_square_radicand,
                             "sqrt(" + e.radicand.str() + ") is rational");
                    if (sq != 1)
                        fail(errc::nonsquarefree_radicand,
                             "radicand " + e.radicand.str() + " is not squarefree (normalizes to " +
                                 sq.str() + "*sqrt(" + rest.str() + "))");
                    for (std::size_t j = 1; j < i; ++j)
                        if (elements[j].kind == BasisKind::Sqrt && elements[j].radicand == e.radicand)
                            fail(errc::duplicate_radicand,
                                 "duplicate radicand " + e.radicand.str());
                    break;
                }
                case BasisKind::Decimal:
                    if (e.err <= 0)
                        fail(errc::invalid_argument, "decimal element needs a positive error bound");
                    break;
            }
        }
        return std::shared_ptr<const BasisSpec>(new BasisSpec(std::move(elements)));
    }

    std::size_t dim() const { return elements_.size(); }
    const BasisElement& element(std::size_t i) const { return elements_[i]; }
    const std::vector<BasisElement>& elements() const { return elements_; }

    // Integer bounds lo <= value * 2^bits <= hi for element i, memoized.
    // These back both the rational enclosures and the fast sign path.
    std::pair<Integer, Integer> scaled_bounds(std::size_t i, unsigned bits) const {
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = bound_cache_.find({i, bits});
            if (it != bound_cache_.end()) return it->second;
        }
        const BasisElement& e = elements_[i];
        Integer scale = Integer(1) << bits;
        std::pair<Integer, Integer> out;
        switch (e.kind) {
            case BasisKind::Unit:
                out = {scale, scale};
                break;
            case BasisKind::Sqrt: {
                Integer arg = e.radicand * scale * scale;
                Integer s = boost::multiprecision::sqrt(arg);
                out = {s, s + 1};
                break;
            }
            case BasisKind::Decimal: {
                Rational lo = (e.approx - e.err) * Rational(scale);
                Rational hi = (e.approx + e.err) * Rational(scale);
                out = {floor_int(lo), -floor_int(-hi)};
                break;
            }
        }
        std::lock_guard<std::mutex> lock(cache_mutex_);
        bound_cache_.emplace(std::make_pair(i, bits), out);
        return out;
    }

    // Enclosure of element i, tight to roughly 2^-bits for Sqrt elements.
    // Decimal enclosures are pinned by their declared error and never improve.
    Enclosure enclosure(std::size_t i, unsigned bits) const {
        if (elements_[i].kind == BasisKind::Decimal)
            return {elements_[i].approx - elements_[i].err,
                    elements_[i].approx + elements_[i].err};
        auto [lo, hi] = scaled_bounds(i, bits);
        Integer scale = Integer(1) << bits;
        return {Rational(lo, scale), Rational(hi, scale)};
    }

    bool refinable(std::size_t i) const { return elements_[i].kind == BasisKind::Sqrt; }

    std::string describe(std::size_t i) const {
        const BasisElement& e = elements_[i];
        switch (e.kind) {
            case BasisKind::Unit: return "1";
            case BasisKind::Sqrt: return "sqrt(" + e.radicand.str() + ")";
            case BasisKind::Decimal:
                return "decimal(" + to_string(e.approx) + "+-" + to_string(e.err) + ")";
        }
        return "?";
    }

    friend bool operator==(const BasisSpec& a, const BasisSpec& b) {
        return a.elements_ == b.elements_;
    }

private:
    explicit BasisSpec(std::vector<BasisElement> elements) : elements_(std::move(elements)) {}
    std::vector<BasisElement> elements_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<std::size_t, unsigned>, std::pair<Integer, Integer>> bound_cache_;
};

using BasisPtr = std::shared_ptr<const BasisSpec>;

inline bool same_basis(const BasisPtr& a, const BasisPtr& b) {
    return a == b || (a && b && *a == *b);
}

// Convenience constructors.
inline BasisElement unit_element() { return {}; }
inline BasisElement sqrt_element(Integer radicand) {
    BasisElement e;
    e.kind = BasisKind::Sqrt;
    e.radicand = std::move(radicand);
    return e;
}
inline BasisElement decimal_element(Rational approx, Rational err) {
    BasisElement e;
    e.kind = BasisKind::Decimal;
    e.approx = std::move(approx);
    e.err = std::move(err);
    return e;
}

} // namespace iet
