#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iet/basis.hpp"
#include "iet/error.hpp"
#include "iet/rational.hpp"

namespace iet {

// Tunables threaded through sign determination and orbit searches. The CLI
// overrides the defaults from flags / IET_MAX_ITER.
struct Options {
    std::int64_t max_iter = 100000;
    unsigned precision_bits = 4096;
    // Cooperative cancellation: long-running orbit iterations observe this
    // flag between steps and abort with errc::cancelled when it is set.
    const std::atomic<bool>* cancel = nullptr;
};

inline Options& default_options() {
    thread_local Options opts;
    return opts;
}

inline void check_cancelled() {
    const std::atomic<bool>* c = default_options().cancel;
    if (c && c->load(std::memory_order_relaxed))
        fail(errc::cancelled, "operation cancelled");
}

// RAII override of the thread-local defaults.
class OptionsScope {
public:
    explicit OptionsScope(Options o) : saved_(default_options()) { default_options() = o; }
    ~OptionsScope() { default_options() = saved_; }
    OptionsScope(const OptionsScope&) = delete;
    OptionsScope& operator=(const OptionsScope&) = delete;

private:
    Options saved_;
};

// A real number represented exactly as a rational combination of the basis
// elements. All arithmetic the library ever needs is additive plus rational
// scaling, so coefficient vectors are closed under every operation. The
// value is zero iff all coefficients are zero; that is the declared
// Q-independence made operational.
class ExactReal {
public:
    ExactReal() = default;

    ExactReal(BasisPtr basis, std::vector<Rational> coeffs)
        : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
        if (!basis_ || coeffs_.size() != basis_->dim())
            fail(errc::invalid_argument, "coefficient count does not match basis dimension");
    }

    // The rational q, i.e. q * unit.
    static ExactReal rational(const BasisPtr& basis, const Rational& q) {
        std::vector<Rational> c(basis->dim(), Rational(0));
        c[0] = q;
        return ExactReal(basis, std::move(c));
    }

    static ExactReal zero(const BasisPtr& basis) { return rational(basis, 0); }

    const BasisPtr& basis() const { return basis_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Rational& c) { return c == 0; });
    }

    // True when the value lies in Q, i.e. only the unit coefficient is set.
    bool is_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) return false;
        return true;
    }

    const Rational& unit_coeff() const { return coeffs_[0]; }

    friend ExactReal operator+(const ExactReal& a, const ExactReal& b) {
        check_same(a, b);
        std::vector<Rational> c(a.coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
        return ExactReal(a.basis_, std::move(c));
    }

    friend ExactReal operator-(const ExactReal& a, const ExactReal& b) {
        check_same(a, b);
        std::vector<Rational> c(a.coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] - b.coeffs_[i];
        return ExactReal(a.basis_, std::move(c));
    }

    friend ExactReal operator-(const ExactReal& a) {
        std::vector<Rational> c(a.coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.coeffs_[i];
        return ExactReal(a.basis_, std::move(c));
    }

    friend ExactReal operator*(const Rational& q, const ExactReal& a) {
        std::vector<Rational> c(a.coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = q * a.coeffs_[i];
        return ExactReal(a.basis_, std::move(c));
    }

    // Exact equality; never needs refinement.
    friend bool operator==(const ExactReal& a, const ExactReal& b) {
        return same_basis(a.basis_, b.basis_) && a.coeffs_ == b.coeffs_;
    }

    // Enclosure of the value from basis enclosures at the given precision.
    Enclosure enclose(unsigned bits) const {
        Rational lo = 0, hi = 0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational& c = coeffs_[i];
            if (c == 0) continue;
            Enclosure e = basis_->enclosure(i, bits);
            if (c > 0) {
                lo += c * e.lo;
                hi += c * e.hi;
            } else {
                lo += c * e.hi;
                hi += c * e.lo;
            }
        }
        return {lo, hi};
    }

    static void check_same(const ExactReal& a, const ExactReal& b) {
        if (!same_basis(a.basis_, b.basis_))
            fail(errc::basis_mismatch, "operands live over different bases");
    }

private:
    BasisPtr basis_;
    std::vector<Rational> coeffs_;
};

namespace signdetail {

// Integer-bound enclosure of value * 2^bits; the workhorse behind sign
// determination. Pure integer arithmetic: floor/ceil of coeff * bound with
// no rational normalization in the loop.
inline std::pair<Integer, Integer> scaled_enclosure(const ExactReal& a, unsigned bits) {
    Integer lo = 0, hi = 0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const Rational& c = a.coeffs()[i];
        if (c == 0) continue;
        auto [el_lo, el_hi] = a.basis()->scaled_bounds(i, bits);
        const Integer p = num(c), q = den(c);
        if (p > 0) {
            lo += floor_div(p * el_lo, q);
            hi += -floor_div(-(p * el_hi), q);
        } else {
            lo += floor_div(p * el_hi, q);
            hi += -floor_div(-(p * el_lo), q);
        }
    }
    return {lo, hi};
}

} // namespace signdetail

// Sign of the value: 0 exactly when all coefficients vanish; otherwise
// determined by refining enclosures until 0 is excluded. Never guesses:
// if the budget (or a Decimal element's fixed error bound) cannot separate
// the value from 0, this raises precision_exhausted.
inline int sign(const ExactReal& a, unsigned precision_bits = 0) {
    if (a.is_zero()) return 0;
    if (a.is_rational()) return sign_of(a.unit_coeff());
    if (precision_bits == 0) precision_bits = default_options().precision_bits;

    bool refinable = false;
    for (std::size_t i = 1; i < a.coeffs().size(); ++i)
        if (a.coeffs()[i] != 0 && a.basis()->refinable(i)) refinable = true;

    unsigned bits = 48;
    for (;;) {
        auto [lo, hi] = signdetail::scaled_enclosure(a, bits);
        if (lo > 0) return +1;
        if (hi < 0) return -1;
        if (!refinable || bits >= precision_bits)
            fail(errc::precision_exhausted,
                 "cannot separate value from zero within " + std::to_string(bits) + " bits");
        bits = std::min(bits * 2, precision_bits);
    }
}

inline bool less(const ExactReal& a, const ExactReal& b) { return sign(a - b) < 0; }
inline bool less_eq(const ExactReal& a, const ExactReal& b) { return sign(a - b) <= 0; }

struct ModResult {
    ExactReal remainder;  // in [0, L)
    Integer k;            // a = remainder + k * L
};

// Reduction mod a positive period L: a = r + k*L with 0 <= r < L. The
// integer k is located by a quotient enclosure of width < 1 and then pinned
// by exact sign tests, so the result is exact whenever it returns.
inline ModResult real_mod(const ExactReal& a, const ExactReal& L, unsigned precision_bits = 0) {
    if (sign(L, precision_bits) <= 0)
        fail(errc::invalid_argument, "modulus must be positive");
    if (a.is_zero()) return {ExactReal::zero(a.basis()), Integer(0)};
    if (precision_bits == 0) precision_bits = default_options().precision_bits;

    auto try_k = [&](const Integer& k) -> bool {
        ExactReal r = a - Rational(k) * L;
        return sign(r, precision_bits) >= 0 && sign(r - L, precision_bits) < 0;
    };

    unsigned bits = 32;
    for (;;) {
        Enclosure ea = a.enclose(bits);
        Enclosure el = L.enclose(bits);
        if (el.lo > 0) {
            Rational qlo = ea.lo / el.hi;
            Rational qhi = ea.hi / el.lo;
            Integer klo = floor_int(qlo);
            Integer khi = floor_int(qhi);
            if (khi - klo <= 2) {
                for (Integer k = klo; k <= khi; ++k)
                    if (try_k(k)) return {a - Rational(k) * L, k};
            }
        }
        if (bits >= precision_bits)
            fail(errc::precision_exhausted, "cannot locate quotient for real_mod");
        bits = std::min(bits * 2, precision_bits);
    }
}

// Decimal rendering for display only; the persistence layer never uses it.
// Rounds an enclosure midpoint to the requested number of fraction digits.
inline std::string approx_decimal(const ExactReal& a, unsigned digits = 12) {
    unsigned bits = 16 + static_cast<unsigned>(digits * 4);
    Enclosure e = a.enclose(bits);
    Rational mid = (e.lo + e.hi) / 2;
    Integer scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Rational scaled = mid * Rational(scale);
    Integer n = floor_int(scaled + Rational(1, 2));
    bool neg = n < 0;
    if (neg) n = -n;
    Integer whole = n / scale;
    Integer frac = n % scale;
    std::string fs = frac.str();
    fs.insert(fs.begin(), digits - fs.size(), '0');
    return (neg ? "-" : "") + whole.str() + "." + fs;
}

} // namespace iet
