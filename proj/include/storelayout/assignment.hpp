#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace storelayout {

/// Product -> position map. Unassigned products hold `unassigned`.
///
/// Stands for x (category/location) or z (subcategory/sublocation) in the
/// binary formulation: x[i][k] == 1 exactly when position_of[i] == k.
struct Assignment {
    static constexpr int unassigned = -1;

    std::vector<int> position_of;

    Assignment() = default;
    explicit Assignment(std::size_t n) : position_of(n, unassigned) {}
    explicit Assignment(std::vector<int> positions) : position_of(std::move(positions)) {}

    std::size_t size() const noexcept { return position_of.size(); }
    int operator[](std::size_t product) const { return position_of[product]; }
    int& operator[](std::size_t product) { return position_of[product]; }

    bool complete() const {
        for (int p : position_of)
            if (p == unassigned) return false;
        return true;
    }

    /// Inverse map; positions with no product hold `unassigned`.
    std::vector<int> product_at(std::size_t position_count) const {
        std::vector<int> out(position_count, unassigned);
        for (std::size_t i = 0; i < position_of.size(); ++i) {
            const int p = position_of[i];
            if (p >= 0 && static_cast<std::size_t>(p) < position_count) out[p] = static_cast<int>(i);
        }
        return out;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < position_of.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(position_of[i]);
        }
        return s + "]";
    }

    // Lexicographic on product -> position; used for deterministic tie-breaks.
    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

}  // namespace storelayout
