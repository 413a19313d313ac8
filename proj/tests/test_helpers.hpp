#pragma once

#include <random>
#include <vector>

#include "iet/exchange.hpp"

namespace iet::testing {

inline BasisPtr basis_q() { return BasisSpec::create({unit_element()}); }

inline BasisPtr basis_sqrt2() {
    return BasisSpec::create({unit_element(), sqrt_element(2)});
}

inline BasisPtr basis_sqrt23() {
    return BasisSpec::create({unit_element(), sqrt_element(2), sqrt_element(3)});
}

inline ExactReal er(const BasisPtr& b, std::vector<Rational> coeffs) {
    coeffs.resize(b->dim(), Rational(0));
    return ExactReal(b, std::move(coeffs));
}

// sqrt(2) - 1 over a basis containing sqrt(2) at index 1.
inline ExactReal sqrt2_minus_1(const BasisPtr& b) { return er(b, {-1, 1}); }

inline Rational random_rational(std::mt19937& gen, int max_num = 6, int max_den = 6) {
    std::uniform_int_distribution<int> nd(-max_num, max_num);
    std::uniform_int_distribution<int> dd(1, max_den);
    return Rational(nd(gen), dd(gen));
}

// A random positive ExactReal over the basis (rejection sampling on sign).
inline ExactReal random_positive(const BasisPtr& b, std::mt19937& gen) {
    for (;;) {
        std::vector<Rational> c(b->dim());
        for (auto& q : c) q = random_rational(gen, 4, 4);
        ExactReal x(b, std::move(c));
        if (!x.is_zero() && sign(x) > 0) return x;
    }
}

// A random IET over the basis with m intervals and a random permutation.
inline IET random_iet(const BasisPtr& b, int m, std::mt19937& gen) {
    std::vector<ExactReal> lambda;
    ExactReal total = ExactReal::zero(b);
    for (int i = 0; i < m; ++i) {
        ExactReal l = random_positive(b, gen);
        lambda.push_back(l);
        total = total + l;
    }
    std::vector<int> images(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) images[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(images.begin(), images.end(), gen);
    return IET::make(Permutation(std::move(images)), std::move(lambda), total);
}

// A random IET on a prescribed domain [0, L): the last length absorbs the
// exact remainder, so the sum constraint holds with free coefficients.
inline IET random_iet_on(const BasisPtr& b, int m, std::mt19937& gen, const ExactReal& total) {
    for (;;) {
        std::vector<ExactReal> lambda;
        ExactReal sum = ExactReal::zero(b);
        for (int i = 0; i + 1 < m; ++i) {
            ExactReal l = Rational(1, 2 * m) * random_positive(b, gen);
            lambda.push_back(l);
            sum = sum + l;
        }
        ExactReal last = total - sum;
        if (sign(last) <= 0) continue;
        lambda.push_back(last);
        std::vector<int> images(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) images[static_cast<std::size_t>(i)] = i + 1;
        std::shuffle(images.begin(), images.end(), gen);
        return IET::make(Permutation(std::move(images)), std::move(lambda), total);
    }
}

// Random canonical (321) 3-IET; lengths are free positive values.
inline IET random_321(const BasisPtr& b, std::mt19937& gen) {
    std::vector<ExactReal> lambda;
    ExactReal total = ExactReal::zero(b);
    for (int i = 0; i < 3; ++i) {
        ExactReal l = random_positive(b, gen);
        lambda.push_back(l);
        total = total + l;
    }
    return IET::make(Permutation({3, 2, 1}), std::move(lambda), total);
}

// A random point in [0, L) with rational coordinates relative to L's span:
// q * L for random q in [0, 1).
inline ExactReal random_point(const IET& t, std::mt19937& gen) {
    std::uniform_int_distribution<int> nd(0, 999);
    Rational q(nd(gen), 1000);
    return q * t.length();
}

} // namespace iet::testing
