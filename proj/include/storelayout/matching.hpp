#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "storelayout/matrix.hpp"

namespace storelayout {

/// Kuhn's augmenting-path matching on a square 0/1 matrix (rows = products,
/// cols = positions). `initial` may hold a partial matching (row -> col or
/// -1) that is kept where possible. Returns row -> col when perfect.
inline std::optional<std::vector<int>> perfect_matching(const BoolMatrix& allowed,
                                                        std::vector<int> initial = {}) {
    const std::size_t n = allowed.rows();
    std::vector<int> row_of(n, -1);
    std::vector<int> col_of(n, -1);
    if (initial.size() == n) {
        for (std::size_t r = 0; r < n; ++r) {
            const int c = initial[r];
            if (c >= 0 && static_cast<std::size_t>(c) < n && allowed(r, c) && row_of[c] < 0) {
                row_of[c] = static_cast<int>(r);
                col_of[r] = c;
            }
        }
    }
    std::vector<char> visited;
    // Iterative DFS would be safer for huge n; instances here stay small.
    auto augment = [&](auto&& self, int r) -> bool {
        for (std::size_t c = 0; c < n; ++c) {
            if (!allowed(r, c) || visited[c]) continue;
            visited[c] = 1;
            if (row_of[c] < 0 || self(self, row_of[c])) {
                row_of[c] = r;
                col_of[r] = static_cast<int>(c);
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = 0; r < n; ++r) {
        if (col_of[r] >= 0) continue;
        visited.assign(n, 0);
        if (!augment(augment, static_cast<int>(r))) return std::nullopt;
    }
    return col_of;
}

/// Maximum-weight perfect assignment (Hungarian method with potentials,
/// O(n^3)). Entries equal to -infinity are forbidden. Returns the row -> col
/// map and total weight, or nullopt when no finite perfect assignment exists.
struct LapResult {
    std::vector<int> col_of_row;
    double value = 0.0;
};

inline std::optional<LapResult> max_weight_assignment(const Matrix<double>& weight) {
    const std::size_t n = weight.rows();
    if (n == 0) return LapResult{};
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Solve the min-cost problem on cost = -weight, forbidden -> large finite.
    double big = 1.0;
    for (double w : weight.values())
        if (std::isfinite(w)) big = std::max(big, std::abs(w));
    big = big * static_cast<double>(n + 1) * 4.0;
    auto cost = [&](std::size_t i, std::size_t j) {
        const double w = weight(i, j);
        return std::isfinite(w) ? -w : big;
    };

    // 1-based arrays as in the classical formulation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    LapResult out;
    out.col_of_row.assign(n, -1);
    for (std::size_t j = 1; j <= n; ++j) out.col_of_row[p[j] - 1] = static_cast<int>(j - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weight(i, static_cast<std::size_t>(out.col_of_row[i]));
        if (!std::isfinite(w)) return std::nullopt;
        out.value += w;
    }
    return out;
}

}  // namespace storelayout
