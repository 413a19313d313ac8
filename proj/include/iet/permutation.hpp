#pragma once

#include <vector>

#include "iet/error.hpp"

namespace iet {

// A permutation of {1..m} in one-line notation: image(i) is the image of i,
// both 1-based. The (321)/(312) separating examples in the literature read
// this way: (321) maps 1->3, 2->2, 3->1.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
        int m = static_cast<int>(img_.size());
        if (m == 0) fail(errc::not_a_bijection, "empty permutation");
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (int v : img_) {
            if (v < 1 || v > m || seen[static_cast<std::size_t>(v - 1)])
                fail(errc::not_a_bijection, "images are not a bijection of {1..m}");
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
    }

    static Permutation identity(int m) {
        std::vector<int> v(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = i + 1;
        return Permutation(std::move(v));
    }

    int size() const { return static_cast<int>(img_.size()); }
    int image(int i) const { return img_[static_cast<std::size_t>(i - 1)]; }  // 1-based
    const std::vector<int>& images() const { return img_; }

    Permutation inverse() const {
        std::vector<int> inv(img_.size());
        for (int i = 1; i <= size(); ++i) inv[static_cast<std::size_t>(image(i) - 1)] = i;
        return Permutation(std::move(inv));
    }

    // pi(i+1) != pi(i)+1 for all i: every interior breakpoint is a genuine
    // discontinuity of the associated exchange.
    bool is_separating() const {
        for (int i = 1; i < size(); ++i)
            if (image(i + 1) == image(i) + 1) return false;
        return true;
    }

    // No proper prefix {1..k} is invariant.
    bool is_irreducible() const {
        int max_seen = 0;
        for (int i = 1; i < size(); ++i) {
            max_seen = std::max(max_seen, image(i));
            if (max_seen == i) return false;
        }
        return true;
    }

    bool is_identity() const {
        for (int i = 1; i <= size(); ++i)
            if (image(i) != i) return false;
        return true;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> img_;
};

} // namespace iet
