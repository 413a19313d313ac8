#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "iet/error.hpp"
#include "iet/rational.hpp"

namespace iet {

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        RationalMatrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c)
                fail(errc::invalid_argument, "matrix rows must have equal length");
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

// Rank over Q by fraction-free (Bareiss) elimination on the integer matrix
// obtained by clearing each row's denominators.
inline std::size_t mat_rank(const RationalMatrix& m) {
    std::size_t r = m.rows(), c = m.cols();
    if (r == 0 || c == 0) return 0;
    std::vector<std::vector<Integer>> a(r, std::vector<Integer>(c));
    for (std::size_t i = 0; i < r; ++i) {
        Integer lcm = 1;
        for (std::size_t j = 0; j < c; ++j)
            lcm = boost::multiprecision::lcm(lcm, den(m.at(i, j)));
        for (std::size_t j = 0; j < c; ++j) {
            Rational v = m.at(i, j) * Rational(lcm);
            a[i][j] = num(v);
        }
    }
    std::size_t rank = 0;
    Integer prev = 1;
    for (std::size_t col = 0; col < c && rank < r; ++col) {
        std::size_t pivot = rank;
        while (pivot < r && a[pivot][col] == 0) ++pivot;
        if (pivot == r) continue;
        std::swap(a[rank], a[pivot]);
        for (std::size_t i = rank + 1; i < r; ++i) {
            for (std::size_t j = col + 1; j < c; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

// Solution set of A*x = b over Q, stored as a particular point plus an
// independent direction basis of the kernel. Restricted to the shapes the
// library needs: at most two free directions (the IDOC systems have two
// unknowns; the root systems are square and invertible).
struct AffineSolutionSet {
    enum class Kind { Empty, Point, Line, Plane };

    Kind kind = Kind::Empty;
    std::vector<Rational> point;                    // valid unless Empty
    std::vector<std::vector<Rational>> directions;  // size 0 / 1 / 2

    std::size_t unknowns() const { return point.size(); }
};

inline AffineSolutionSet solve_affine(const RationalMatrix& a, const std::vector<Rational>& b) {
    if (a.rows() != b.size())
        fail(errc::invalid_argument, "right-hand side length does not match row count");
    std::size_t r = a.rows(), c = a.cols();

    // Gauss-Jordan on the augmented matrix.
    std::vector<std::vector<Rational>> m(r, std::vector<Rational>(c + 1));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) m[i][j] = a.at(i, j);
        m[i][c] = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t p = row;
        while (p < r && m[p][col] == 0) ++p;
        if (p == r) continue;
        std::swap(m[row], m[p]);
        Rational inv = Rational(1) / m[row][col];
        for (std::size_t j = col; j <= c; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rational f = m[i][col];
            for (std::size_t j = col; j <= c; ++j) m[i][j] -= f * m[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < r; ++i)
        if (m[i][c] != 0) return AffineSolutionSet{};  // inconsistent

    AffineSolutionSet s;
    s.point.assign(c, Rational(0));
    std::vector<bool> is_pivot(c, false);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
        is_pivot[pivot_col[i]] = true;
        s.point[pivot_col[i]] = m[i][c];
    }
    for (std::size_t col = 0; col < c; ++col) {
        if (is_pivot[col]) continue;
        std::vector<Rational> dir(c, Rational(0));
        dir[col] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            dir[pivot_col[i]] = -m[i][col];
        s.directions.push_back(std::move(dir));
    }
    switch (s.directions.size()) {
        case 0: s.kind = AffineSolutionSet::Kind::Point; break;
        case 1: s.kind = AffineSolutionSet::Kind::Line; break;
        case 2: s.kind = AffineSolutionSet::Kind::Plane; break;
        default:
            fail(errc::unsupported_dimension,
                 "solution set has more than two free directions");
    }
    return s;
}

// Integer points of a solution set in at most two unknowns. Returns a
// witness vector when one exists; std::nullopt when the set provably
// contains no integer point.
inline std::optional<std::vector<Integer>> integer_points(const AffineSolutionSet& s) {
    using Kind = AffineSolutionSet::Kind;
    if (s.kind == Kind::Empty) return std::nullopt;
    if (s.unknowns() > 2)
        fail(errc::unsupported_dimension, "integer search supports at most two unknowns");

    if (s.kind == Kind::Point) {
        std::vector<Integer> w;
        for (const Rational& v : s.point) {
            if (!is_integer(v)) return std::nullopt;
            w.push_back(num(v));
        }
        return w;
    }

    if (s.kind == Kind::Plane) {
        // Two independent directions in two unknowns span all of Q^2.
        return std::vector<Integer>{0, 0};
    }

    // Line in two unknowns: recover the single equation a*x + b*y = c from
    // point p and direction d via the normal (d1, -d0), clear denominators,
    // then solve the linear Diophantine equation by extended gcd.
    const auto& p = s.point;
    const auto& d = s.directions[0];
    if (s.unknowns() != 2)
        fail(errc::unsupported_dimension, "line search expects two unknowns");
    Rational ar = d[1], br = -d[0];
    Rational cr = ar * p[0] + br * p[1];
    Integer scale = boost::multiprecision::lcm(
        boost::multiprecision::lcm(den(ar), den(br)), den(cr));
    Integer A = num(ar * Rational(scale));
    Integer B = num(br * Rational(scale));
    Integer C = num(cr * Rational(scale));
    auto [g, x0, y0] = ext_gcd(A, B);
    if (g == 0) {
        // Degenerate normal cannot happen for a genuine line.
        fail(errc::invalid_argument, "degenerate line direction");
    }
    if (C % g != 0) return std::nullopt;
    Integer f = C / g;
    return std::vector<Integer>{x0 * f, y0 * f};
}

} // namespace iet
