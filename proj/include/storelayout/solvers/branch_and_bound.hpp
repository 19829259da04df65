#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "storelayout/solvers/common.hpp"

namespace storelayout {

/// Gilmore-Lawler style upper bound on every completion of `partial`
/// (maximization).
///
/// Placing free product i at free position k is credited with its exact
/// interaction with the placed products plus the best possible pairing of
/// its remaining flow row with the position's remaining exposure row (both
/// sorted descending, which maximizes the dot product). A linear assignment
/// over these credits then bounds the completion. Returns -infinity when no
/// eligible completion exists.
inline double gilmore_lawler_bound(const QapInstance& inst, const Assignment& partial) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    const std::size_t n = inst.size();
    const auto& f = inst.flow();
    const auto& e = inst.exposure();

    std::vector<int> placed, free_products, free_positions;
    std::vector<char> used(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (partial[i] >= 0) {
            placed.push_back(static_cast<int>(i));
            used[partial[i]] = 1;
        } else {
            free_products.push_back(static_cast<int>(i));
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!used[k]) free_positions.push_back(static_cast<int>(k));

    double fixed = 0.0;
    for (int i : placed)
        for (int j : placed) fixed += f(i, j) * e(partial[i], partial[j]);
    const std::size_t u = free_products.size();
    if (u == 0) return fixed;

    std::vector<std::vector<double>> frows(u), erows(u);
    for (std::size_t a = 0; a < u; ++a) {
        for (std::size_t b = 0; b < u; ++b)
            if (a != b) {
                frows[a].push_back(f(free_products[a], free_products[b]));
                erows[a].push_back(e(free_positions[a], free_positions[b]));
            }
        std::sort(frows[a].begin(), frows[a].end(), std::greater<>());
        std::sort(erows[a].begin(), erows[a].end(), std::greater<>());
    }

    Matrix<double> credit(u, u, neg_inf);
    for (std::size_t a = 0; a < u; ++a) {
        const int i = free_products[a];
        for (std::size_t b = 0; b < u; ++b) {
            const int k = free_positions[b];
            if (!inst.eligible(i, k)) continue;
            double c = f(i, i) * e(k, k);
            for (int j : placed) c += f(i, j) * e(k, partial[j]) + f(j, i) * e(partial[j], k);
            for (std::size_t t = 0; t + 1 < u; ++t) c += frows[a][t] * erows[b][t];
            credit(a, b) = c;
        }
    }
    const auto lap = max_weight_assignment(credit);
    if (!lap) return neg_inf;
    return fixed + lap->value;
}

/// Depth-first branch and bound.
///
/// Forced products are placed at the root; the rest are branched in static
/// order of fewest eligible positions (index on ties), children visited by
/// decreasing bound. A child is pruned when its bound falls below the
/// incumbent by more than the comparison tolerance. Every complete
/// assignment reached is offered to `pool` when given; the pool never steers
/// the search. When the node or time limit stops the search early, the bound
/// reported is the largest bound still open.
inline SolveResult branch_and_bound(const QapInstance& inst, const SolverConfig& config,
                                    SolutionPool* pool = nullptr) {
    if (inst.level() == Level::integrated)
        throw ValidationError("branch and bound handles level1/level2 instances only");
    config.validate();
    Stopwatch clock;
    const std::size_t n = inst.size();

    Assignment current(n);
    std::vector<int> branch_order;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& el = inst.eligible_positions(static_cast<int>(i));
        if (el.size() == 1)
            current[i] = el.front();
        else
            branch_order.push_back(static_cast<int>(i));
    }
    std::stable_sort(branch_order.begin(), branch_order.end(), [&](int a, int b) {
        return inst.eligible_positions(a).size() < inst.eligible_positions(b).size();
    });
    std::vector<char> used(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (current[i] >= 0) used[current[i]] = 1;

    SolveResult result;
    result.best = greedy_assignment(inst);
    result.objective = objective_unchecked(inst, result.best);
    if (pool) pool->offer(result.best, result.objective);

    bool aborted = false;
    double open_bound = -std::numeric_limits<double>::infinity();
    SolverTrace& trace = result.trace;

    auto out_of_budget = [&] {
        return trace.nodes >= config.node_limit || clock.seconds() >= config.time_limit_seconds;
    };

    auto explore = [&](auto&& self, std::size_t depth, double node_bound) -> void {
        ++trace.nodes;
        if (depth == branch_order.size()) {
            const double v = objective_unchecked(inst, current);
            if (pool) pool->offer(current, v);
            if (better_solution(v, current, result.objective, result.best)) {
                result.best = current;
                result.objective = v;
                ++trace.improvements;
            }
            return;
        }
        if (out_of_budget()) {
            aborted = true;
            open_bound = std::max(open_bound, node_bound);
            return;
        }
        const int i = branch_order[depth];
        std::vector<std::pair<double, int>> children;
        for (int k : inst.eligible_positions(i)) {
            if (used[k]) continue;
            current[i] = k;
            const double b = gilmore_lawler_bound(inst, current);
            current[i] = Assignment::unassigned;
            if (b > -std::numeric_limits<double>::infinity()) children.emplace_back(b, k);
        }
        std::stable_sort(children.begin(), children.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        for (std::size_t c = 0; c < children.size(); ++c) {
            const auto [b, k] = children[c];
            if (b < result.objective - objective_tol(result.objective)) break;
            if (aborted) {
                open_bound = std::max(open_bound, b);
                continue;
            }
            current[i] = k;
            used[k] = 1;
            self(self, depth + 1, b);
            current[i] = Assignment::unassigned;
            used[k] = 0;
        }
    };

    const double root = gilmore_lawler_bound(inst, current);
    explore(explore, 0, root);

    trace.limit_reached = aborted;
    result.bound = aborted ? std::max(open_bound, result.objective) : result.objective;
    if (aborted) trace.notes.push_back("branch and bound stopped at its node/time limit");
    result.wall_seconds = clock.seconds();
    return result;
}

}  // namespace storelayout
